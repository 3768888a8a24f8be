#pragma once

#include <compare>
#include <string>
#include <vector>

#include "twcst/instance.hpp"
#include "twcst/rational.hpp"

namespace twcst {

/// A value `real + eps * e` where e is a symbolic positive infinitesimal.
/// Arithmetic is component-wise; ordering is lexicographic on (real, eps).
template <class T>
struct BasicPWeight {
  T real{};
  T eps{};

  BasicPWeight() = default;
  BasicPWeight(T r, T e = T{}) : real(std::move(r)), eps(std::move(e)) {}

  BasicPWeight& operator+=(const BasicPWeight& o) {
    real += o.real;
    eps += o.eps;
    return *this;
  }
  friend BasicPWeight operator+(BasicPWeight a, const BasicPWeight& b) {
    a += b;
    return a;
  }
  friend BasicPWeight operator-(BasicPWeight a, const BasicPWeight& b) {
    a.real -= b.real;
    a.eps -= b.eps;
    return a;
  }
  friend bool operator==(const BasicPWeight& a, const BasicPWeight& b) {
    return a.real == b.real && a.eps == b.eps;
  }
  friend bool operator<(const BasicPWeight& a, const BasicPWeight& b) {
    return a.real < b.real || (a.real == b.real && a.eps < b.eps);
  }
  friend bool operator>(const BasicPWeight& a, const BasicPWeight& b) { return b < a; }
  friend bool operator<=(const BasicPWeight& a, const BasicPWeight& b) { return !(b < a); }
  friend bool operator>=(const BasicPWeight& a, const BasicPWeight& b) { return !(a < b); }
};

using PWeight = BasicPWeight<Rational>;

inline PWeight add(const PWeight& a, const PWeight& b) { return a + b; }
inline PWeight scale(const Rational& z, const PWeight& a) {
  return PWeight(z * a.real, z * a.eps);
}
inline bool less(const PWeight& a, const PWeight& b) { return a < b; }

/// "p/q + (r/s)e"; the eps part is omitted when zero.
std::string to_string(const PWeight& w);

/// Class weights of the perturbed instance: beta'_j = beta_j + j*e, gaps
/// unchanged. Indexed by class position.
class PerturbedInstance {
 public:
  explicit PerturbedInstance(const Instance& instance);

  const Instance& base() const { return base_; }
  const PWeight& beta(int i) const { return by_position_[static_cast<size_t>(2 * i - 1)]; }
  const PWeight& alpha(int i) const { return by_position_[static_cast<size_t>(2 * i)]; }
  const PWeight& weight(QueryClass q) const { return weight_at(q.position()); }
  const PWeight& weight_at(int position) const {
    return by_position_[static_cast<size_t>(position)];
  }
  /// Key indices sorted by decreasing perturbed weight (ties in beta go to
  /// the higher index).
  std::vector<int> keys_by_weight() const;

 private:
  Instance base_;
  std::vector<PWeight> by_position_;
};

PerturbedInstance perturb_instance(const Instance& instance);

/// True when key `a` outranks key `b` under the perturbed order.
inline bool perturbed_heavier(const Instance& instance, int a, int b) {
  const auto& wa = instance.beta(a);
  const auto& wb = instance.beta(b);
  return wa > wb || (wa == wb && a > b);
}

}  // namespace twcst
