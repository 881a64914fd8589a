#pragma once

// Laplace transforms of the aggregate interference terms, delivered as jets
// in s so the coverage kernel can take Leibniz products and derivatives.

#include <algorithm>
#include <cmath>
#include <span>
#include <string>
#include <vector>

#include "coexist/channel.hpp"
#include "coexist/config.hpp"
#include "coexist/geometry.hpp"
#include "coexist/jet.hpp"
#include "coexist/quadrature.hpp"

namespace coexist {

/// One interferer class: received power p*G*H*r^(-alpha) with r drawn from
/// `distance`, N i.i.d. copies, each active with probability `activity`.
struct InterferenceField {
  FadingModel fading;
  double tx_power_gain = 0.0;  // p * G
  double pathloss_exp = 0.0;
  geometry::PiecewiseDistribution distance;
  long count = 0;
  double activity = 1.0;
};

namespace detail {

// Rescaling the j-th derivative by scale^j keeps every component O(1) so one
// absolute tolerance fits all orders.
inline double derivative_scale(double s, const InterferenceField& f) {
  if (s > 0.0) return s;
  const double r_ref = 0.5 * (f.distance.support_min() + f.distance.support_max());
  return 1.0 / (f.tx_power_gain * std::pow(r_ref, -f.pathloss_exp));
}

}  // namespace detail

/// Per-interferer factor A(s) = E_r[L_H(s p G r^-alpha)] and its derivatives,
/// before thinning and powering.
inline Jet single_interferer_laplace(const InterferenceField& f, double s, int order,
                                     const QuadratureOptions& quad = {},
                                     const std::string& what = "interferer Laplace") {
  const auto n = static_cast<std::size_t>(order) + 1;
  if (f.distance.is_point_mass()) {
    const double r = f.distance.support_min();
    return {s, laplace_derivatives(f.fading, s, f.tx_power_gain * std::pow(r, -f.pathloss_exp), order)};
  }
  const double scale = detail::derivative_scale(s, f);
  std::vector<double> scale_pow(n, 1.0);
  for (std::size_t j = 1; j < n; ++j) scale_pow[j] = scale_pow[j - 1] * scale;

  auto integrand = [&](double r, std::span<double> out) {
    const double pdf = f.distance.pdf(r);
    if (pdf == 0.0) {
      std::fill(out.begin(), out.end(), 0.0);
      return;
    }
    const double c = f.tx_power_gain * std::pow(r, -f.pathloss_exp);
    laplace_derivatives_into(f.fading, s, c, out);
    for (std::size_t j = 0; j < n; ++j) out[j] *= scale_pow[j] * pdf;
  };
  auto res = integrate_vector(integrand, n, f.distance.breakpoints(), quad, what);
  for (std::size_t j = 0; j < n; ++j) res.value[j] /= scale_pow[j];
  return {s, std::move(res.value)};
}

/// Jet of E[exp(-s I)] for the whole field: ((1 - rho) + rho A(s))^N.
inline Jet field_laplace(const InterferenceField& f, double s, int order,
                         const QuadratureOptions& quad = {},
                         const std::string& what = "interference Laplace") {
  if (f.count == 0 || f.activity == 0.0) return Jet::identity(s, order);
  const Jet a = single_interferer_laplace(f, s, order, quad, what);
  std::vector<double> thinned(a.coeffs().begin(), a.coeffs().end());
  for (double& v : thinned) v *= f.activity;
  thinned[0] += 1.0 - f.activity;
  return jet_pow(Jet(s, std::move(thinned)), f.count);
}

/// The N_c - 1 co-cluster interferers seen by a user served from distance r0.
inline InterferenceField tn_interference_field(const Scenario& sc, double r0) {
  const auto g = interferer_gains(sc);
  return {sc.chan.tn_interf_fading,
          sc.tn.bs_power * g.tn,
          sc.tn.pathloss_exp,
          geometry::interferer_distribution(r0, sc.tn.ue_offset, sc.tn.cluster_radius),
          sc.tn.num_bs - 1,
          sc.tn.load};
}

/// Satellite downlink interferer (one satellite, alpha_NTN).
inline InterferenceField ntn_dl_interference_field(const Scenario& sc) {
  double gain = sc.ntn.sat_gain * sc.chan.ue_gain;
  if (sc.chan.side_lobe_interferers) gain *= sc.chan.side_lobe_ratio;
  return {sc.chan.ntn_interf_fading,
          sc.ntn.sat_power * gain,
          sc.ntn.pathloss_exp,
          geometry::satellite_distance(sc.ntn.satellite_model, sc.ntn.altitude, sc.ntn.earth_radius),
          1,
          1.0};
}

/// NTN uplink users on the annulus. Ground-to-ground links use alpha_TN.
inline InterferenceField ntn_ul_interference_field(const Scenario& sc) {
  double gain = sc.ntn.ue_gain * sc.chan.ue_gain;
  if (sc.chan.side_lobe_interferers) gain *= sc.chan.side_lobe_ratio;
  return {sc.chan.ntn_interf_fading,
          sc.ntn.ue_power * gain,
          sc.tn.pathloss_exp,
          geometry::annulus_distribution(sc.tn.ue_offset, sc.tn.cluster_radius, sc.ntn.isolation,
                                         sc.ntn.outer_radius),
          sc.ntn.num_ues,
          1.0};
}

/// L_{I_TN}(s) given the serving distance r0.
inline Jet laplace_tn(double s, int order, double r0, const Scenario& sc,
                      const QuadratureOptions& quad = {}) {
  if (sc.tn.num_bs <= 1 || sc.tn.load == 0.0) return Jet::identity(s, order);
  return field_laplace(tn_interference_field(sc, r0), s, order, quad, "TN interference Laplace");
}

/// L_{I_DL}(s) for the satellite downlink; closed form at the zenith.
inline Jet laplace_ntn_dl(double s, int order, const Scenario& sc,
                          const QuadratureOptions& quad = {}) {
  return field_laplace(ntn_dl_interference_field(sc), s, order, quad, "NTN downlink Laplace");
}

/// L_{I_UL}(s) for N_u uplink users on the annulus.
inline Jet laplace_ntn_ul(double s, int order, const Scenario& sc,
                          const QuadratureOptions& quad = {}) {
  if (sc.ntn.num_ues == 0) return Jet::identity(s, order);
  return field_laplace(ntn_ul_interference_field(sc), s, order, quad, "NTN uplink Laplace");
}

/// NTN term selected by the scenario's co-existence case.
inline Jet laplace_ntn(double s, int order, const Scenario& sc, const QuadratureOptions& quad = {}) {
  switch (sc.coexistence) {
    case CoexistenceCase::CaseI_NtnDl: return laplace_ntn_dl(s, order, sc, quad);
    case CoexistenceCase::CaseII_NtnUl: return laplace_ntn_ul(s, order, sc, quad);
    case CoexistenceCase::NoNtnBaseline: return Jet::identity(s, order);
  }
  return Jet::identity(s, order);
}

/// Jet of L_{I_TN}(s) L_{I_NTN}(s); the factorization relies on independence
/// of the TN and NTN interference.
inline Jet interference_laplace(double s, int order, double r0, const Scenario& sc,
                                const QuadratureOptions& quad = {}) {
  return jet_mul(laplace_tn(s, order, r0, sc, quad), laplace_ntn(s, order, sc, quad));
}

}  // namespace coexist
