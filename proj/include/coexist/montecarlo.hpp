#pragma once

// Trial-by-trial simulation of the SINR at the TN user, independent of the
// analytic path: points are placed explicitly, the nearest BS serves, and
// interference powers are summed directly.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <numbers>
#include <random>
#include <span>
#include <thread>
#include <vector>

#include "coexist/channel.hpp"
#include "coexist/config.hpp"

namespace coexist::mc {

struct Point {
  double x = 0.0;
  double y = 0.0;
};

inline double distance(const Point& a, const Point& b) { return std::hypot(a.x - b.x, a.y - b.y); }

/// n points uniform in the disc of the given radius (radial inverse CDF r = R sqrt(u)).
template <class Rng>
std::vector<Point> sample_disc_bpp(std::size_t n, double radius, Rng& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<Point> pts(n);
  for (auto& p : pts) {
    const double r = radius * std::sqrt(u(rng));
    const double ang = 2.0 * std::numbers::pi * u(rng);
    p = {r * std::cos(ang), r * std::sin(ang)};
  }
  return pts;
}

/// n points uniform in the annulus r_in <= |p| <= r_out.
template <class Rng>
std::vector<Point> sample_annulus_bpp(std::size_t n, double r_in, double r_out, Rng& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<Point> pts(n);
  for (auto& p : pts) {
    const double r = std::sqrt(r_in * r_in + u(rng) * (r_out * r_out - r_in * r_in));
    const double ang = 2.0 * std::numbers::pi * u(rng);
    p = {r * std::cos(ang), r * std::sin(ang)};
  }
  return pts;
}

/// Slant range to one satellite uniform on the part of its orbital sphere
/// above the user's horizon.
template <class Rng>
double sample_cap_slant_range(double altitude, double earth_radius, Rng& rng) {
  const double orbit = earth_radius + altitude;
  const double cos_min = earth_radius / orbit;
  const double c = std::uniform_real_distribution<double>(cos_min, 1.0)(rng);
  return std::sqrt(std::max(0.0, earth_radius * earth_radius + orbit * orbit - 2.0 * earth_radius * orbit * c));
}

struct TrialOutcome {
  double sinr = 0.0;
  double serving_distance = 0.0;
  double i_tn = 0.0;   // W
  double i_ntn = 0.0;  // W
};

/// Engine for trial `index` of a run seeded with `seed`: a 64-bit mix of the
/// pair (SplitMix64 finalizer) seeds an mt19937_64, so trials never share a
/// stream and the worker layout cannot affect results.
inline std::mt19937_64 trial_engine(std::uint64_t seed, std::uint64_t index) {
  std::uint64_t z = seed * 0x9E3779B97F4A7C15ULL + index + 0x632BE59BD9B4E019ULL;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  z ^= z >> 31;
  return std::mt19937_64(z);
}

struct LinkFading {
  FadingModel serving;
  FadingModel tn_interferer;
  FadingModel ntn_interferer;
};

inline LinkFading simulation_fading(const Scenario& sc) {
  if (sc.chan.sim_fading == SimFading::Matched) {
    return {FadingModel::nakagami(sc.chan.serving_m), sc.chan.tn_interf_fading, sc.chan.ntn_interf_fading};
  }
  return {FadingModel::rician(sc.chan.rician_k_tn), FadingModel::rician(sc.chan.rician_k_tn),
          FadingModel::rician(sc.chan.rician_k_ntn)};
}

/// One realization of the SINR at the user located at (x0, 0).
template <class Rng>
TrialOutcome simulate_trial(const Scenario& sc, Rng& rng) {
  const auto fading = simulation_fading(sc);
  const auto g = effective_gains(sc);
  const auto gi = interferer_gains(sc);
  const Point user{sc.tn.ue_offset, 0.0};

  const auto bs = sample_disc_bpp(static_cast<std::size_t>(sc.tn.num_bs), sc.tn.cluster_radius, rng);
  std::vector<double> dist(bs.size());
  for (std::size_t i = 0; i < bs.size(); ++i) dist[i] = distance(user, bs[i]);
  const auto serving = static_cast<std::size_t>(std::min_element(dist.begin(), dist.end()) - dist.begin());

  TrialOutcome out;
  out.serving_distance = dist[serving];
  const double signal = sc.tn.bs_power * g.tn * sample(fading.serving, rng) *
                        std::pow(out.serving_distance, -sc.tn.pathloss_exp);

  std::bernoulli_distribution active(sc.tn.load);
  for (std::size_t i = 0; i < dist.size(); ++i) {
    if (i == serving) continue;
    if (!active(rng)) continue;
    out.i_tn += sc.tn.bs_power * gi.tn * sample(fading.tn_interferer, rng) *
                std::pow(dist[i], -sc.tn.pathloss_exp);
  }

  switch (sc.coexistence) {
    case CoexistenceCase::CaseI_NtnDl: {
      const double d = sc.ntn.satellite_model == geometry::SatelliteModel::Zenith
                           ? sc.ntn.altitude
                           : sample_cap_slant_range(sc.ntn.altitude, sc.ntn.earth_radius, rng);
      out.i_ntn = sc.ntn.sat_power * gi.ntn * sample(fading.ntn_interferer, rng) *
                  std::pow(d, -sc.ntn.pathloss_exp);
      break;
    }
    case CoexistenceCase::CaseII_NtnUl: {
      const auto ues = sample_annulus_bpp(static_cast<std::size_t>(sc.ntn.num_ues),
                                          sc.tn.cluster_radius + sc.ntn.isolation,
                                          sc.ntn.outer_radius, rng);
      for (const auto& ue : ues) {
        out.i_ntn += sc.ntn.ue_power * gi.ntn * sample(fading.ntn_interferer, rng) *
                     std::pow(distance(user, ue), -sc.tn.pathloss_exp);
      }
      break;
    }
    case CoexistenceCase::NoNtnBaseline:
      break;
  }
  out.sinr = signal / (out.i_tn + out.i_ntn + sc.chan.noise_power);
  return out;
}

inline TrialOutcome simulate_trial(const Scenario& sc, std::uint64_t seed, std::uint64_t index) {
  auto rng = trial_engine(seed, index);
  return simulate_trial(sc, rng);
}

/// Runs trials [0, trials) on `workers` threads (0 = hardware concurrency).
/// Outcomes are stored by trial index, so the result is layout independent.
inline std::vector<TrialOutcome> run_trials(const Scenario& sc, std::uint64_t trials,
                                            std::uint64_t seed, unsigned workers = 0) {
  if (trials < 1) throw DomainError("trials must be >= 1");
  std::vector<TrialOutcome> out(trials);
  if (workers == 0) workers = std::max(1u, std::thread::hardware_concurrency());
  workers = static_cast<unsigned>(std::min<std::uint64_t>(workers, trials));
  auto work = [&](std::uint64_t begin, std::uint64_t end) {
    for (std::uint64_t i = begin; i < end; ++i) out[i] = simulate_trial(sc, seed, i);
  };
  if (workers == 1) {
    work(0, trials);
    return out;
  }
  {
    std::vector<std::jthread> pool;
    const std::uint64_t chunk = (trials + workers - 1) / workers;
    for (unsigned w = 0; w < workers; ++w) {
      const std::uint64_t b = w * chunk;
      const std::uint64_t e = std::min(trials, b + chunk);
      if (b < e) pool.emplace_back(work, b, e);
    }
  }
  return out;
}

struct SimEstimate {
  double mean = 0.0;
  double half_width_95 = 0.0;  // 1.96 standard errors
  std::uint64_t trials = 0;
  std::uint64_t seed = 0;
};

struct SimResult {
  std::vector<double> thresholds;  // linear
  std::vector<SimEstimate> coverage;
  SimEstimate rate;
};

namespace detail {

/// Neumaier-compensated running sum; fed in trial order.
class CompensatedSum {
 public:
  void add(double v) {
    const double t = sum_ + v;
    if (std::abs(sum_) >= std::abs(v)) {
      c_ += (sum_ - t) + v;
    } else {
      c_ += (v - t) + sum_;
    }
    sum_ = t;
  }
  double value() const { return sum_ + c_; }

 private:
  double sum_ = 0.0;
  double c_ = 0.0;
};

}  // namespace detail

/// Coverage at every threshold and mean log2(1 + SINR), with 95% half-widths.
inline SimResult summarize(std::span<const TrialOutcome> outcomes, std::span<const double> thresholds,
                           std::uint64_t seed) {
  const auto n = static_cast<double>(outcomes.size());
  SimResult res;
  res.thresholds.assign(thresholds.begin(), thresholds.end());
  for (double T : thresholds) {
    std::uint64_t hits = 0;
    for (const auto& o : outcomes) hits += o.sinr > T ? 1 : 0;
    const double p = static_cast<double>(hits) / n;
    res.coverage.push_back({p, 1.96 * std::sqrt(p * (1.0 - p) / n), outcomes.size(), seed});
  }
  detail::CompensatedSum sum;
  detail::CompensatedSum sq;
  for (const auto& o : outcomes) {
    const double c = std::log2(1.0 + o.sinr);
    sum.add(c);
    sq.add(c * c);
  }
  const double mean = sum.value() / n;
  const double var = outcomes.size() > 1 ? std::max(0.0, (sq.value() - n * mean * mean) / (n - 1.0)) : 0.0;
  res.rate = {mean, 1.96 * std::sqrt(var / n), outcomes.size(), seed};
  return res;
}

inline SimResult run_case(const Scenario& sc, std::span<const double> thresholds, std::uint64_t trials,
                          std::uint64_t seed, unsigned workers = 0) {
  const auto outcomes = run_trials(sc, trials, seed, workers);
  return summarize(outcomes, thresholds, seed);
}

/// Sorted samples viewed as a step CDF.
class EmpiricalCdf {
 public:
  explicit EmpiricalCdf(std::vector<double> samples) : x_(std::move(samples)) {
    std::sort(x_.begin(), x_.end());
  }

  double operator()(double v) const {
    if (x_.empty()) return 0.0;
    const auto it = std::upper_bound(x_.begin(), x_.end(), v);
    return static_cast<double>(it - x_.begin()) / static_cast<double>(x_.size());
  }

  std::size_t size() const { return x_.size(); }
  std::span<const double> samples() const { return x_; }

  /// sup_x |F_n(x) - F(x)| for a continuous reference CDF F.
  double ks_distance(const std::function<double(double)>& cdf) const {
    const auto n = static_cast<double>(x_.size());
    double d = 0.0;
    for (std::size_t i = 0; i < x_.size(); ++i) {
      const double f = cdf(x_[i]);
      d = std::max({d, (static_cast<double>(i) + 1.0) / n - f, f - static_cast<double>(i) / n});
    }
    return d;
  }

 private:
  std::vector<double> x_;
};

inline EmpiricalCdf empirical_cdf(std::vector<double> samples) { return EmpiricalCdf(std::move(samples)); }

}  // namespace coexist::mc
