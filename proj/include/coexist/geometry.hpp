#pragma once

// Distance distributions seen by a TN user at (x0, 0): distances to BPP base
// stations on the TN disc, to BPP NTN users on the outer annulus, and to the
// interfering satellite.

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>
#include <span>
#include <utility>
#include <vector>

#include "coexist/errors.hpp"

namespace coexist::geometry {

inline constexpr double kPi = std::numbers::pi;

namespace detail {

inline double clamp_unit(double v) { return std::clamp(v, -1.0, 1.0); }

inline void check_offset(double x0, double r_tn) {
  if (!(r_tn > 0.0)) throw DomainError("cluster radius must be > 0");
  if (!(x0 >= 0.0) || x0 > r_tn) throw DomainError("user offset must satisfy 0 <= x0 <= r_TN");
}

inline void check_annulus(double x0, double r_tn, double d_iso, double r_ntn) {
  check_offset(x0, r_tn);
  if (!(d_iso >= 0.0)) throw GeometryError("isolation distance must be >= 0");
  if (!(r_tn + d_iso < r_ntn)) throw GeometryError("annulus requires r_TN + d_iso < r_NTN");
}

}  // namespace detail

/// Half-angle, seen from a circle of radius r centred at distance d from the
/// origin, of the arc of that circle lying inside the origin-centred disc of
/// radius R. Its derivative identity d/dr lens = 2 r angle gives every pdf here.
inline double inside_arc_half_angle(double r, double d, double R) {
  if (r <= R - d) return kPi;
  if (r >= R + d || r <= d - R) return 0.0;
  return std::acos(detail::clamp_unit((r * r + d * d - R * R) / (2.0 * d * r)));
}

/// Area of disc(centre (d,0), radius r) intersected with disc(0, R), in the
/// theta/phi form. Branch widths are tested directly so d = 0 never divides.
inline double disc_lens_area(double r, double d, double R) {
  if (r <= 0.0) return 0.0;
  if (r + R <= d) return 0.0;
  if (r <= R - d) return kPi * r * r;
  if (R <= r - d) return kPi * R * R;
  const double theta = std::acos(detail::clamp_unit((r * r + d * d - R * R) / (2.0 * d * r)));
  const double phi = std::acos(detail::clamp_unit((-r * r + d * d + R * R) / (2.0 * d * R)));
  return r * r * (theta - 0.5 * std::sin(2.0 * theta)) + R * R * (phi - 0.5 * std::sin(2.0 * phi));
}

/// Area of the disc of radius r_n around the user that falls inside the TN
/// cluster disc. Saturates at pi r_TN^2 once the cluster is covered.
inline double intersection_area(double r_n, double x0, double r_tn) {
  detail::check_offset(x0, r_tn);
  if (r_n < 0.0) throw DomainError("distance must be >= 0");
  return disc_lens_area(r_n, x0, r_tn);
}

/// CDF of the distance from the user to one uniform point in the cluster.
inline double point_in_disc_cdf(double r, double x0, double r_tn) {
  if (r <= 0.0) return 0.0;
  return std::min(1.0, intersection_area(r, x0, r_tn) / (kPi * r_tn * r_tn));
}

inline double point_in_disc_pdf(double r, double x0, double r_tn) {
  detail::check_offset(x0, r_tn);
  if (r <= 0.0) return 0.0;
  return 2.0 * r * inside_arc_half_angle(r, x0, r_tn) / (kPi * r_tn * r_tn);
}

/// CDF of the nearest of N_c i.i.d. cluster points.
inline double serving_cdf(double r0, double x0, double r_tn, int num_bs) {
  if (num_bs < 1) throw DomainError("N_c must be >= 1");
  const double f = point_in_disc_cdf(r0, x0, r_tn);
  return 1.0 - std::pow(1.0 - f, num_bs);
}

inline double serving_pdf(double r0, double x0, double r_tn, int num_bs) {
  if (num_bs < 1) throw DomainError("N_c must be >= 1");
  const double f = point_in_disc_cdf(r0, x0, r_tn);
  return num_bs * std::pow(1.0 - f, num_bs - 1) * point_in_disc_pdf(r0, x0, r_tn);
}

/// CDF of an interfering BS distance given that the serving BS is at r0.
inline double interferer_cdf_given_serving(double r_n, double r0, double x0, double r_tn) {
  const double f0 = point_in_disc_cdf(r0, x0, r_tn);
  if (!(f0 < 1.0)) throw DegenerateConditionError("serving distance at the cluster edge leaves no room for interferers");
  if (r_n <= r0) return 0.0;
  return (point_in_disc_cdf(r_n, x0, r_tn) - f0) / (1.0 - f0);
}

inline double interferer_pdf_given_serving(double r_n, double r0, double x0, double r_tn) {
  const double f0 = point_in_disc_cdf(r0, x0, r_tn);
  if (!(f0 < 1.0)) throw DegenerateConditionError("serving distance at the cluster edge leaves no room for interferers");
  if (r_n < r0) return 0.0;
  return point_in_disc_pdf(r_n, x0, r_tn) / (1.0 - f0);
}

/// F_{a,b}(y): twice the antiderivative of the half chord sqrt(a^2-(y-b)^2)
/// of a circle of radius a centred at (b, 0). Differences give vertical strip
/// areas of that circle.
inline double strip_antiderivative(double a, double b, double y) {
  const double u = std::clamp(y - b, -a, a);
  const double h = std::sqrt(std::max(0.0, (a - u) * (a + u)));
  return u * h + a * a * std::asin(detail::clamp_unit(u / a));
}

namespace detail {

/// F_{a,b}(b + a) - F_{a,b}(b + u): the part of a radius-a circle beyond the
/// chord at offset u from its centre. Written as a^2 acos(u/a) - u h so the
/// tangent end stays exact instead of differencing two values near a^2 pi/2.
inline double cap_beyond(double a, double u) {
  u = std::clamp(u, -a, a);
  const double h = std::sqrt(std::max(0.0, (a - u) * (a + u)));
  return a * a * std::acos(clamp_unit(u / a)) - u * h;
}

}  // namespace detail

/// Same lens as disc_lens_area, assembled from strips split at the chord
/// x = (R^2 - r^2 + d^2) / (2 d): the user disc bounds the lens on the left of
/// the chord and the origin disc on the right.
inline double lens_area_strips(double r, double d, double R) {
  if (r <= 0.0) return 0.0;
  if (r + R <= d) return 0.0;
  if (r <= R - d) return kPi * r * r;
  if (R <= r - d) return kPi * R * R;
  const double y = (R * R - r * r + d * d) / (2.0 * d);
  // left of the chord inside the user disc: F_{r,d}(y) - F_{r,d}(d - r)
  const double left = detail::cap_beyond(r, d - y);
  // right of the chord inside the origin disc: F_{R,0}(R) - F_{R,0}(y)
  const double right = detail::cap_beyond(R, y);
  return left + right;
}

/// CDF of the distance from the user to one NTN user uniform on the annulus
/// w = r_TN + d_iso <= |p| <= r_NTN.
inline double annulus_intersection_cdf(double r, double x0, double r_tn, double d_iso,
                                       double r_ntn) {
  detail::check_annulus(x0, r_tn, d_iso, r_ntn);
  const double w = r_tn + d_iso;
  if (r <= w - x0) return 0.0;
  if (r >= r_ntn + x0) return 1.0;
  const double area = lens_area_strips(r, x0, r_ntn) - lens_area_strips(r, x0, w);
  return std::clamp(area / (kPi * (r_ntn * r_ntn - w * w)), 0.0, 1.0);
}

inline double annulus_pdf(double r, double x0, double r_tn, double d_iso, double r_ntn) {
  detail::check_annulus(x0, r_tn, d_iso, r_ntn);
  const double w = r_tn + d_iso;
  if (r <= w - x0 || r >= r_ntn + x0) return 0.0;
  const double arc = inside_arc_half_angle(r, x0, r_ntn) - inside_arc_half_angle(r, x0, w);
  return std::max(0.0, 2.0 * r * arc / (kPi * (r_ntn * r_ntn - w * w)));
}

/// Distance distribution with explicit support breakpoints. The pdf is smooth
/// between consecutive breakpoints; a point mass has a single breakpoint.
class PiecewiseDistribution {
 public:
  PiecewiseDistribution(std::vector<double> breakpoints, std::function<double(double)> cdf,
                        std::function<double(double)> pdf)
      : breakpoints_(std::move(breakpoints)), cdf_(std::move(cdf)), pdf_(std::move(pdf)) {
    std::sort(breakpoints_.begin(), breakpoints_.end());
    breakpoints_.erase(std::unique(breakpoints_.begin(), breakpoints_.end()), breakpoints_.end());
  }

  static PiecewiseDistribution point_mass(double at) {
    return PiecewiseDistribution({at}, [at](double r) { return r >= at ? 1.0 : 0.0; },
                                 [](double) { return 0.0; });
  }

  double cdf(double r) const { return cdf_(r); }
  /// Density; zero everywhere for a point mass.
  double pdf(double r) const { return pdf_(r); }
  double support_min() const { return breakpoints_.front(); }
  double support_max() const { return breakpoints_.back(); }
  bool is_point_mass() const { return breakpoints_.size() == 1; }
  std::span<const double> breakpoints() const { return breakpoints_; }

 private:
  std::vector<double> breakpoints_;
  std::function<double(double)> cdf_;
  std::function<double(double)> pdf_;
};

inline PiecewiseDistribution serving_distribution(double x0, double r_tn, int num_bs) {
  detail::check_offset(x0, r_tn);
  if (num_bs < 1) throw DomainError("N_c must be >= 1");
  std::vector<double> bp{0.0, r_tn + x0};
  if (x0 > 0.0) bp.push_back(r_tn - x0);
  return {std::move(bp), [=](double r) { return serving_cdf(r, x0, r_tn, num_bs); },
          [=](double r) { return serving_pdf(r, x0, r_tn, num_bs); }};
}

inline PiecewiseDistribution interferer_distribution(double r0, double x0, double r_tn) {
  detail::check_offset(x0, r_tn);
  if (!(point_in_disc_cdf(r0, x0, r_tn) < 1.0)) throw DegenerateConditionError("serving distance at the cluster edge leaves no room for interferers");
  std::vector<double> bp{std::max(0.0, r0), r_tn + x0};
  if (r_tn - x0 > r0) bp.push_back(r_tn - x0);
  return {std::move(bp), [=](double r) { return interferer_cdf_given_serving(r, r0, x0, r_tn); },
          [=](double r) { return interferer_pdf_given_serving(r, r0, x0, r_tn); }};
}

inline PiecewiseDistribution annulus_distribution(double x0, double r_tn, double d_iso,
                                                  double r_ntn) {
  detail::check_annulus(x0, r_tn, d_iso, r_ntn);
  const double w = r_tn + d_iso;
  return {{w - x0, w + x0, r_ntn - x0, r_ntn + x0},
          [=](double r) { return annulus_intersection_cdf(r, x0, r_tn, d_iso, r_ntn); },
          [=](double r) { return annulus_pdf(r, x0, r_tn, d_iso, r_ntn); }};
}

enum class SatelliteModel { Zenith, UniformCap };

/// Slant range at which a satellite at altitude a sits on the user's horizon.
inline double max_slant_range(double altitude, double earth_radius) {
  return std::sqrt(2.0 * earth_radius * altitude + altitude * altitude);
}

/// Zenith: point mass at the altitude. UniformCap: one satellite uniform on
/// the visible spherical cap, for which d^2 is uniform on [a^2, r_max^2].
inline PiecewiseDistribution satellite_distance(SatelliteModel model, double altitude,
                                                double earth_radius) {
  if (!(altitude > 0.0)) throw DomainError("altitude must be > 0");
  if (model == SatelliteModel::Zenith) return PiecewiseDistribution::point_mass(altitude);
  const double a = altitude;
  const double rmax = max_slant_range(a, earth_radius);
  const double span = rmax * rmax - a * a;
  return {{a, rmax},
          [=](double d) { return std::clamp((d * d - a * a) / span, 0.0, 1.0); },
          [=](double d) { return (d < a || d > rmax) ? 0.0 : 2.0 * d / span; }};
}

}  // namespace coexist::geometry
