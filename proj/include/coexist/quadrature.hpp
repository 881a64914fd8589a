#pragma once

// Globally adaptive Gauss-Kronrod (7/15) quadrature over a sequence of
// panels. Integrands may be vector valued so a Laplace transform and all of
// its s-derivatives share one subdivision.

#include <algorithm>
#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <cstddef>
#include <initializer_list>
#include <limits>
#include <span>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "coexist/errors.hpp"

namespace coexist {

struct QuadratureOptions {
  double rel_tol = 1e-8;
  double abs_tol = 1e-12;
  std::size_t max_intervals = 4000;
  // Maps each panel through x = a + (b - a) t^2 (3 - 2t). Square-root
  // behaviour at panel edges (lens areas near tangency) becomes smooth in t.
  bool smooth_endpoints = true;
};

struct VectorQuadrature {
  std::vector<double> value;
  std::vector<double> error;
};

struct ScalarQuadrature {
  double value = 0.0;
  double error = 0.0;
};

namespace detail {

struct Panel {
  double a;  // in the local coordinate of panel `base`
  double b;
  double priority;
  std::size_t slot;  // offset into the value/error storage
  std::size_t base;  // index of the breakpoint panel this piece belongs to
};

/// One 15-point Kronrod estimate with the embedded 7-point Gauss rule as error proxy.
template <class F>
void gk15(F& f, double a, double b, std::size_t dim, std::span<double> value,
          std::span<double> error, std::span<double> scratch) {
  using kronrod = boost::math::quadrature::gauss_kronrod<double, 15>;
  using gauss = boost::math::quadrature::gauss<double, 7>;
  static const auto& xk = kronrod::abscissa();
  static const auto& wk = kronrod::weights();
  static const auto& wg = gauss::weights();

  const double mid = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  std::span<double> fx = scratch.subspan(0, dim);
  std::span<double> gsum = scratch.subspan(dim, dim);

  f(mid, fx);
  for (std::size_t i = 0; i < dim; ++i) {
    value[i] = wk[0] * fx[i];
    gsum[i] = wg[0] * fx[i];
  }
  std::span<double> fy = scratch.subspan(2 * dim, dim);
  for (std::size_t k = 1; k < xk.size(); ++k) {
    const double dx = half * xk[k];
    f(mid - dx, fx);
    f(mid + dx, fy);
    for (std::size_t i = 0; i < dim; ++i) {
      const double pair = fx[i] + fy[i];
      value[i] += wk[k] * pair;
      // Gauss nodes sit at the even Kronrod indices.
      if (k % 2 == 0) gsum[i] += wg[k / 2] * pair;
    }
  }
  for (std::size_t i = 0; i < dim; ++i) {
    value[i] *= half;
    error[i] = std::abs(value[i] - half * gsum[i]);
  }
}

inline bool converged(std::span<const double> total, std::span<const double> err,
                      const QuadratureOptions& opt) {
  for (std::size_t i = 0; i < total.size(); ++i) {
    if (!(err[i] <= std::max(opt.abs_tol, opt.rel_tol * std::abs(total[i])))) return false;
  }
  return true;
}

}  // namespace detail

/// Integrates a vector-valued integrand `f(x, out)` of dimension `dim` over
/// the panels delimited by the sorted `breakpoints` (first and last entries
/// are the limits). Every component must satisfy
/// err <= max(abs_tol, rel_tol * |value|).
template <class F>
VectorQuadrature integrate_vector(F&& f, std::size_t dim, std::span<const double> breakpoints,
                                  const QuadratureOptions& opt = {},
                                  std::string_view what = "integral") {
  VectorQuadrature out{std::vector<double>(dim, 0.0), std::vector<double>(dim, 0.0)};
  if (breakpoints.size() < 2 || dim == 0) return out;

  std::vector<double> store;  // [value(dim), error(dim)] per panel
  std::vector<detail::Panel> heap;
  std::vector<double> scratch(3 * dim);

  // Pieces live in a local coordinate: t in [0, 1] when smoothing, x otherwise.
  auto to_x = [&](std::size_t base, double t) {
    if (!opt.smooth_endpoints) return t;
    const double lo = breakpoints[base];
    const double hi = breakpoints[base + 1];
    return lo + (hi - lo) * t * t * (3.0 - 2.0 * t);
  };
  auto evaluate = [&](std::size_t base, double a, double b) {
    const std::size_t slot = store.size();
    store.resize(slot + 2 * dim);
    std::span<double> s(store);
    if (opt.smooth_endpoints) {
      const double width = breakpoints[base + 1] - breakpoints[base];
      auto g = [&](double t, std::span<double> y) {
        f(to_x(base, t), y);
        const double jac = 6.0 * width * t * (1.0 - t);
        for (double& v : y) v *= jac;
      };
      detail::gk15(g, a, b, dim, s.subspan(slot, dim), s.subspan(slot + dim, dim), scratch);
    } else {
      detail::gk15(f, a, b, dim, s.subspan(slot, dim), s.subspan(slot + dim, dim), scratch);
    }
    return slot;
  };
  auto priority_of = [&](std::size_t slot) {
    double p = 0.0;
    for (std::size_t i = 0; i < dim; ++i) {
      const double scale = std::max(opt.abs_tol, opt.rel_tol * std::abs(out.value[i]));
      p = std::max(p, store[slot + dim + i] / scale);
    }
    return p;
  };
  auto cmp = [](const detail::Panel& x, const detail::Panel& y) { return x.priority < y.priority; };

  for (std::size_t k = 0; k + 1 < breakpoints.size(); ++k) {
    const double a = breakpoints[k];
    const double b = breakpoints[k + 1];
    if (!(b > a)) continue;
    const double ta = opt.smooth_endpoints ? 0.0 : a;
    const double tb = opt.smooth_endpoints ? 1.0 : b;
    const std::size_t slot = evaluate(k, ta, tb);
    for (std::size_t i = 0; i < dim; ++i) {
      out.value[i] += store[slot + i];
      out.error[i] += store[slot + dim + i];
    }
    heap.push_back({ta, tb, 0.0, slot, k});
  }
  for (auto& p : heap) p.priority = priority_of(p.slot);
  std::make_heap(heap.begin(), heap.end(), cmp);

  while (!detail::converged(out.value, out.error, opt)) {
    if (heap.size() >= opt.max_intervals) {
      std::ostringstream msg;
      msg << what << ": adaptive quadrature exceeded " << opt.max_intervals
          << " subintervals (error estimate " << *std::max_element(out.error.begin(), out.error.end())
          << ")";
      throw QuadratureError(msg.str());
    }
    std::pop_heap(heap.begin(), heap.end(), cmp);
    const detail::Panel worst = heap.back();
    heap.pop_back();

    const double mid = 0.5 * (worst.a + worst.b);
    if (!(mid > worst.a && mid < worst.b) ||
        (worst.b - worst.a) < 64.0 * std::numeric_limits<double>::epsilon() *
                                  std::max(std::abs(worst.a), std::abs(worst.b))) {
      std::ostringstream msg;
      msg << what << ": subinterval [" << to_x(worst.base, worst.a) << ", "
          << to_x(worst.base, worst.b) << "] cannot be refined further";
      throw QuadratureError(msg.str());
    }
    const std::size_t left = evaluate(worst.base, worst.a, mid);
    const std::size_t right = evaluate(worst.base, mid, worst.b);
    for (std::size_t i = 0; i < dim; ++i) {
      out.value[i] += store[left + i] + store[right + i] - store[worst.slot + i];
      out.error[i] +=
          store[left + dim + i] + store[right + dim + i] - store[worst.slot + dim + i];
    }
    heap.push_back({worst.a, mid, priority_of(left), left, worst.base});
    std::push_heap(heap.begin(), heap.end(), cmp);
    heap.push_back({mid, worst.b, priority_of(right), right, worst.base});
    std::push_heap(heap.begin(), heap.end(), cmp);
  }
  // Running sums accumulate cancellation noise; recompute from the live panels.
  std::fill(out.value.begin(), out.value.end(), 0.0);
  std::fill(out.error.begin(), out.error.end(), 0.0);
  std::sort(heap.begin(), heap.end(), [](const detail::Panel& x, const detail::Panel& y) {
    return x.base != y.base ? x.base < y.base : x.a < y.a;
  });
  for (const auto& p : heap) {
    for (std::size_t i = 0; i < dim; ++i) {
      out.value[i] += store[p.slot + i];
      out.error[i] += store[p.slot + dim + i];
    }
  }
  return out;
}

/// Scalar convenience wrapper around integrate_vector.
template <class F>
ScalarQuadrature integrate(F&& f, std::span<const double> breakpoints,
                           const QuadratureOptions& opt = {}, std::string_view what = "integral") {
  auto vf = [&f](double x, std::span<double> out) { out[0] = f(x); };
  auto r = integrate_vector(vf, 1, breakpoints, opt, what);
  return {r.value[0], r.error[0]};
}

/// Sorted, de-duplicated panel edges restricted to [lo, hi].
inline std::vector<double> panel_edges(double lo, double hi, std::initializer_list<double> interior) {
  std::vector<double> edges{lo};
  for (double x : interior) {
    if (x > lo && x < hi) edges.push_back(x);
  }
  edges.push_back(hi);
  std::sort(edges.begin(), edges.end());
  edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
  return edges;
}

}  // namespace coexist
