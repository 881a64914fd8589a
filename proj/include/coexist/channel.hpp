#pragma once

#include <algorithm>
#include <cmath>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "coexist/errors.hpp"

namespace coexist {

enum class FadingKind { GammaNakagami, Rician, Deterministic };

/// Power fading gain H with E[H] = 1.
///
/// GammaNakagami(m): H ~ Gamma(m, 1/m), the power of a Nakagami-m amplitude.
/// Rician(K): H = |X|^2 with X complex Gaussian, LOS power K/(K+1) and
/// scattered power 1/(K+1). Deterministic: H = 1.
struct FadingModel {
  FadingKind kind = FadingKind::GammaNakagami;
  int m = 1;
  double K = 0.0;

  static FadingModel nakagami(int m) {
    if (m < 1) throw DomainError("Nakagami m must be an integer >= 1");
    return {FadingKind::GammaNakagami, m, 0.0};
  }
  static FadingModel rician(double K) {
    if (!(K >= 0.0)) throw DomainError("Rician K must be >= 0");
    return {FadingKind::Rician, 1, K};
  }
  static FadingModel deterministic() { return {FadingKind::Deterministic, 1, 0.0}; }

  friend bool operator==(const FadingModel&, const FadingModel&) = default;
};

inline std::string to_string(const FadingModel& f) {
  switch (f.kind) {
    case FadingKind::GammaNakagami: return "nakagami(m=" + std::to_string(f.m) + ")";
    case FadingKind::Rician: return "rician(K=" + std::to_string(f.K) + ")";
    case FadingKind::Deterministic: return "deterministic";
  }
  return "?";
}

/// E[exp(-z H)] for z >= 0.
inline double laplace(const FadingModel& model, double z) {
  switch (model.kind) {
    case FadingKind::GammaNakagami:
      return std::pow(1.0 + z / model.m, -model.m);
    case FadingKind::Deterministic:
      return std::exp(-z);
    case FadingKind::Rician: {
      const double los = model.K / (model.K + 1.0);
      const double diffuse = 1.0 / (model.K + 1.0);
      const double g = 1.0 / (1.0 + z * diffuse);
      return g * std::exp(-z * los * g);
    }
  }
  return 1.0;
}

namespace detail {

// Taylor coefficients (not derivatives) of exp(q(h)) from those of q.
inline std::vector<double> taylor_exp(const std::vector<double>& q) {
  const std::size_t n = q.size();
  std::vector<double> e(n, 0.0);
  e[0] = std::exp(q[0]);
  for (std::size_t k = 1; k < n; ++k) {
    double acc = 0.0;
    for (std::size_t j = 1; j <= k; ++j) acc += static_cast<double>(j) * q[j] * e[k - j];
    e[k] = acc / static_cast<double>(k);
  }
  return e;
}

}  // namespace detail

/// d^j/ds^j of L_H(s*c) for j = 0..out.size()-1, evaluated at s.
///
/// Gamma fading uses (-c/m)^j (m)_j (1 + s c/m)^(-m-j); deterministic is
/// (-c)^j exp(-s c); Rician goes through truncated Taylor arithmetic of
/// g(s) exp(-los c s g(s)) with g = 1/(1 + diffuse c s).
inline void laplace_derivatives_into(const FadingModel& model, double s, double c,
                                     std::span<double> d) {
  const std::size_t n = d.size();
  switch (model.kind) {
    case FadingKind::GammaNakagami: {
      const double m = model.m;
      const double u = 1.0 + s * c / m;
      double coef = 1.0;  // (-c/m)^j (m)_j
      double upow = model.m == 1 ? 1.0 / u : std::pow(u, -m);
      for (std::size_t j = 0; j < n; ++j) {
        d[j] = coef * upow;
        coef *= -(c / m) * (m + static_cast<double>(j));
        upow /= u;
      }
      return;
    }
    case FadingKind::Deterministic: {
      const double e = std::exp(-s * c);
      double p = 1.0;
      for (std::size_t j = 0; j < n; ++j) {
        d[j] = p * e;
        p *= -c;
      }
      return;
    }
    case FadingKind::Rician: {
      const double los = model.K / (model.K + 1.0) * c;
      const double b = c / (model.K + 1.0);
      // g(s+h) = g0 * sum_k (-b g0 h)^k
      const double g0 = 1.0 / (1.0 + b * s);
      std::vector<double> g(n);
      double t = g0;
      for (std::size_t k = 0; k < n; ++k) {
        g[k] = t;
        t *= -b * g0;
      }
      // q = -los * (s + h) * g
      std::vector<double> q(n);
      for (std::size_t k = 0; k < n; ++k) q[k] = -los * (s * g[k] + (k > 0 ? g[k - 1] : 0.0));
      const auto e = detail::taylor_exp(q);
      double fact = 1.0;
      for (std::size_t k = 0; k < n; ++k) {
        double acc = 0.0;
        for (std::size_t j = 0; j <= k; ++j) acc += g[j] * e[k - j];
        if (k > 0) fact *= static_cast<double>(k);
        d[k] = acc * fact;
      }
      return;
    }
  }
}

inline std::vector<double> laplace_derivatives(const FadingModel& model, double s, double c,
                                               int order) {
  if (order < 0) throw DomainError("derivative order must be >= 0");
  std::vector<double> d(static_cast<std::size_t>(order) + 1);
  laplace_derivatives_into(model, s, c, d);
  return d;
}

/// Integer Nakagami m whose gamma power distribution matches the first two
/// moments of Rician(K) power: m = round((K+1)^2 / (2K+1)), at least 1.
inline int match_rician_to_nakagami(double K) {
  if (!(K >= 0.0)) throw DomainError("Rician K must be >= 0");
  const double m = (K * K + 2.0 * K + 1.0) / (2.0 * K + 1.0);
  return std::max(1, static_cast<int>(std::lround(m)));
}

/// Second moment E[H^2] of the normalized power gain.
inline double second_moment(const FadingModel& model) {
  switch (model.kind) {
    case FadingKind::GammaNakagami: return 1.0 + 1.0 / model.m;
    case FadingKind::Deterministic: return 1.0;
    case FadingKind::Rician: {
      const double k1 = model.K + 1.0;
      return 1.0 + (2.0 * model.K + 1.0) / (k1 * k1);
    }
  }
  return 1.0;
}

/// Draws one power gain from `model`.
template <class Rng>
double sample(const FadingModel& model, Rng& rng) {
  switch (model.kind) {
    case FadingKind::GammaNakagami: {
      if (model.m == 1) return std::exponential_distribution<double>(1.0)(rng);
      return std::gamma_distribution<double>(model.m, 1.0 / model.m)(rng);
    }
    case FadingKind::Deterministic:
      return 1.0;
    case FadingKind::Rician: {
      const double los = std::sqrt(model.K / (model.K + 1.0));
      const double sd = std::sqrt(0.5 / (model.K + 1.0));
      std::normal_distribution<double> n(0.0, sd);
      const double re = los + n(rng);
      const double im = n(rng);
      return re * re + im * im;
    }
  }
  return 1.0;
}

}  // namespace coexist
