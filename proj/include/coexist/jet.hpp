#pragma once

#include <cstddef>
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

#include "coexist/errors.hpp"

namespace coexist {

/// Value and derivatives of a function of s at a fixed centre:
/// coeffs()[j] = d^j f / ds^j (s), j = 0..order(). Raw derivatives, not Taylor
/// coefficients, so products follow the Leibniz rule with binomial weights.
class Jet {
 public:
  Jet(double center, std::vector<double> derivs) : center_(center), d_(std::move(derivs)) {
    if (d_.empty()) throw DomainError("a jet needs at least its value");
  }

  /// The constant function 1.
  static Jet identity(double center, int order) {
    std::vector<double> d(static_cast<std::size_t>(order) + 1, 0.0);
    d[0] = 1.0;
    return {center, std::move(d)};
  }

  double center() const { return center_; }
  int order() const { return static_cast<int>(d_.size()) - 1; }
  double value() const { return d_[0]; }
  double operator[](std::size_t j) const { return d_[j]; }
  std::span<const double> coeffs() const { return d_; }

 private:
  double center_;
  std::vector<double> d_;
};

namespace detail {

inline void check_compatible(const Jet& a, const Jet& b) {
  if (a.order() != b.order()) throw DomainError("jet order mismatch");
  if (a.center() != b.center()) throw DomainError("jets expanded about different centres");
}

}  // namespace detail

/// Leibniz product: (ab)^(j) = sum_l C(j,l) a^(l) b^(j-l).
inline Jet jet_mul(const Jet& a, const Jet& b) {
  detail::check_compatible(a, b);
  const auto n = a.coeffs().size();
  std::vector<double> out(n, 0.0);
  std::vector<double> binom(n, 0.0);
  binom[0] = 1.0;
  for (std::size_t j = 0; j < n; ++j) {
    // row j of Pascal's triangle, updated in place from the right
    for (std::size_t l = j; l > 0; --l) binom[l] += binom[l - 1];
    double acc = 0.0;
    for (std::size_t l = 0; l <= j; ++l) acc += binom[l] * a[l] * b[j - l];
    out[j] = acc;
  }
  return {a.center(), std::move(out)};
}

inline Jet operator*(const Jet& a, const Jet& b) { return jet_mul(a, b); }

/// a^N by binary exponentiation; N = 0 gives the identity jet.
inline Jet jet_pow(const Jet& a, long long N) {
  if (N < 0) throw DomainError("jet power must be >= 0");
  Jet result = Jet::identity(a.center(), a.order());
  Jet base = a;
  while (N > 0) {
    if (N & 1) result = jet_mul(result, base);
    N >>= 1;
    if (N > 0) base = jet_mul(base, base);
  }
  return result;
}

}  // namespace coexist
