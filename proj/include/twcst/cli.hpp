#pragma once

#include <cstdint>
#include <iosfwd>

#include "twcst/instance.hpp"

namespace twcst {

namespace exit_code {
inline constexpr int ok = 0;
inline constexpr int infeasible = 1;
inline constexpr int usage = 2;
inline constexpr int internal = 3;
}  // namespace exit_code

// standard queries, all three operators, 20 distinct weights
Instance bench_instance(int n, std::uint64_t seed);

// seconds for one dp2wcst solve
double time_solve(const Instance& instance);

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace twcst
