#include <iostream>

#include "twcst/cli.hpp"

int main(int argc, char** argv) { return twcst::run(argc, argv, std::cout, std::cerr); }
