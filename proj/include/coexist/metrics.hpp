#pragma once

// Coverage probability and average rate of the TN user. Both condition on the
// serving distance r0, express P(SINR > T | r0) through the gamma CCDF of the
// Nakagami-m serving gain, and integrate against the serving-distance pdf.

#include <algorithm>
#include <cmath>
#include <optional>
#include <vector>

#include "coexist/config.hpp"
#include "coexist/errors.hpp"
#include "coexist/geometry.hpp"
#include "coexist/interference.hpp"
#include "coexist/jet.hpp"
#include "coexist/quadrature.hpp"

namespace coexist {

struct MetricResult {
  double value = 0.0;
  double abs_error_estimate = 0.0;
  CoexistenceCase coexistence = CoexistenceCase::CaseI_NtnDl;
  std::optional<double> threshold;  // linear SINR threshold, coverage only
};

struct MetricOptions {
  QuadratureOptions outer{1e-8, 1e-12};   // over r0
  QuadratureOptions middle{1e-9, 1e-13};  // over t (rate only)
  QuadratureOptions inner{1e-10, 1e-14};  // interference Laplace transforms
  double t_max = 40.0;                    // bit/s/Hz cap on the rate integral
};

/// e^{-s sigma^2} sum_{k<m} (1/k!) sum_{l<=k} C(k,l) (s sigma^2)^l (-s)^{k-l} L^{(k-l)}(s).
///
/// Evaluated as sum_{l+j<m} P_l D_j with Poisson weights P_l = e^{-x} x^l / l!
/// (x = s sigma^2) and D_j = (-s)^j L^{(j)} / j!, which is the same double sum
/// regrouped and never forms x^l or e^{-x} separately.
inline double coverage_kernel(const Jet& jet, double s, double noise_power, int m) {
  if (m < 1) throw DomainError("serving m must be >= 1");
  if (jet.order() < m - 1) throw DomainError("jet order must be at least m - 1");
  const double x = s * noise_power;
  std::vector<double> poisson(static_cast<std::size_t>(m));
  poisson[0] = std::exp(-x);
  for (int l = 1; l < m; ++l) poisson[l] = poisson[l - 1] * x / l;
  double total = 0.0;
  double scaled = 1.0;  // (-s)^j / j!
  for (int j = 0; j < m; ++j) {
    double cumulative = 0.0;
    for (int l = 0; l < m - j; ++l) cumulative += poisson[l];
    total += scaled * jet[static_cast<std::size_t>(j)] * cumulative;
    scaled *= -s / (j + 1);
  }
  return total;
}

namespace detail {

/// Poisson argument x = s sigma^2 beyond which P(Poisson(x) < m) is negligible
/// (below ~1e-17), so the noise alone forbids coverage.
inline double noise_cutoff(int m) { return m + 40.0 + 10.0 * std::sqrt(static_cast<double>(m)); }

inline double serving_prefactor(const Scenario& sc) {
  return sc.chan.serving_m / (sc.tn.bs_power * effective_gains(sc).tn);
}

}  // namespace detail

/// s at which the kernel is evaluated: m T r0^alpha / (p_TN G_TN).
inline double evaluation_point(const Scenario& sc, double threshold, double r0) {
  return detail::serving_prefactor(sc) * threshold * std::pow(r0, sc.tn.pathloss_exp);
}

/// P(SINR > T | R0 = r0).
inline double conditional_coverage(const Scenario& sc, double threshold, double r0,
                                   const MetricOptions& opt = {}) {
  const int m = sc.chan.serving_m;
  const double s = evaluation_point(sc, threshold, r0);
  if (s * sc.chan.noise_power > detail::noise_cutoff(m)) return 0.0;
  const Jet jet = interference_laplace(s, m - 1, r0, sc, opt.inner);
  return std::clamp(coverage_kernel(jet, s, sc.chan.noise_power, m), 0.0, 1.0);
}

namespace detail {

/// Serving distances beyond which noise alone keeps SINR below T.
inline double coverage_r0_limit(const Scenario& sc, double threshold) {
  const double umax = sc.tn.cluster_radius + sc.tn.ue_offset;
  if (threshold <= 0.0) return umax;
  const double x = noise_cutoff(sc.chan.serving_m);
  const double r = std::pow(x / (serving_prefactor(sc) * threshold * sc.chan.noise_power),
                            1.0 / sc.tn.pathloss_exp);
  return std::min(umax, r);
}

template <class F>
ScalarQuadrature integrate_over_serving(const Scenario& sc, double r_hi, F&& conditional,
                                        const QuadratureOptions& quad, const char* what,
                                        bool refine_origin) {
  const double x0 = sc.tn.ue_offset;
  const double r_tn = sc.tn.cluster_radius;
  const int nc = sc.tn.num_bs;
  // At high thresholds all of the mass sits at tiny r0; geometric panels
  // towards 0 keep the adaptive rule from sampling only the empty bulk.
  auto edges = panel_edges(0.0, r_hi, {r_tn - x0});
  if (refine_origin)
    for (double r = r_hi / 4.0; r > r_hi * 1e-8; r /= 4.0) edges.push_back(r);
  std::sort(edges.begin(), edges.end());
  edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
  auto integrand = [&](double r0) {
    const double f = geometry::serving_pdf(r0, x0, r_tn, nc);
    if (f == 0.0) return 0.0;
    return f * conditional(r0);
  };
  return integrate(integrand, edges, quad, what);
}

}  // namespace detail

/// Coverage probability P(SINR > T) at a linear threshold T > 0.
inline MetricResult coverage(const Scenario& sc, double threshold, const MetricOptions& opt = {}) {
  if (!(threshold > 0.0)) throw DomainError("SINR threshold must be > 0");
  const double r_hi = detail::coverage_r0_limit(sc, threshold);
  auto q = detail::integrate_over_serving(
      sc, r_hi, [&](double r0) { return conditional_coverage(sc, threshold, r0, opt); }, opt.outer,
      "coverage over serving distance", true);
  return {std::clamp(q.value, 0.0, 1.0), q.error, sc.coexistence, threshold};
}

/// E[log2(1 + SINR) | R0 = r0] = int_0^{t_max} P(SINR > 2^t - 1 | r0) dt.
inline ScalarQuadrature conditional_rate(const Scenario& sc, double r0, const MetricOptions& opt = {}) {
  const int m = sc.chan.serving_m;
  // P(SINR > 2^t - 1 | r0) is negligible once s sigma^2 passes the noise cutoff.
  const double snr_scale =
      detail::noise_cutoff(m) /
      (detail::serving_prefactor(sc) * std::pow(r0, sc.tn.pathloss_exp) * sc.chan.noise_power);
  const double t_hi = std::min(opt.t_max, std::log2(1.0 + snr_scale));
  if (!(t_hi > 0.0)) return {};
  const double edges[] = {0.0, t_hi};
  return integrate(
      [&](double t) { return conditional_coverage(sc, std::exp2(t) - 1.0, r0, opt); }, edges,
      opt.middle, "rate over t");
}

/// Average achievable rate in bit/s/Hz.
inline MetricResult rate(const Scenario& sc, const MetricOptions& opt = {}) {
  const double r_hi = sc.tn.cluster_radius + sc.tn.ue_offset;
  auto q = detail::integrate_over_serving(
      sc, r_hi, [&](double r0) { return conditional_rate(sc, r0, opt).value; }, opt.outer,
      "rate over serving distance", false);
  return {std::max(0.0, q.value), q.error, sc.coexistence, std::nullopt};
}

/// Same quantity as rate() with the integration order swapped:
/// int_0^{t_max} P_c(2^t - 1) dt. Kept as an independent consistency route.
inline MetricResult rate_from_coverage(const Scenario& sc, const MetricOptions& opt = {}) {
  const double edges[] = {0.0, opt.t_max};
  auto q = integrate(
      [&](double t) {
        const double T = std::exp2(t) - 1.0;
        if (T <= 0.0) return 1.0;
        return coverage(sc, T, opt).value;
      },
      edges, opt.middle, "rate from coverage");
  return {std::max(0.0, q.value), q.error, sc.coexistence, std::nullopt};
}

}  // namespace coexist
