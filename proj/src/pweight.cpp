#include "twcst/pweight.hpp"

#include <algorithm>
#include <numeric>

namespace twcst {

std::string to_string(const PWeight& w) {
  std::string out = to_string(w.real);
  if (w.eps != 0) out += " + (" + to_string(w.eps) + ")e";
  return out;
}

PerturbedInstance::PerturbedInstance(const Instance& instance) : base_(instance) {
  by_position_.reserve(static_cast<size_t>(instance.class_count()));
  for (int p = 0; p < instance.class_count(); ++p) {
    QueryClass q = QueryClass::at(p);
    if (q.is_key()) {
      by_position_.emplace_back(instance.beta(q.index), Rational(q.index));
    } else {
      by_position_.emplace_back(instance.alpha(q.index), Rational(0));
    }
  }
}

std::vector<int> PerturbedInstance::keys_by_weight() const {
  std::vector<int> keys(static_cast<size_t>(base_.n()));
  std::iota(keys.begin(), keys.end(), 1);
  std::sort(keys.begin(), keys.end(),
            [this](int a, int b) { return beta(b) < beta(a); });
  return keys;
}

PerturbedInstance perturb_instance(const Instance& instance) {
  return PerturbedInstance(instance);
}

}  // namespace twcst
