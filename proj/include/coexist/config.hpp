#pragma once

// Scenario parameterization. Everything in Scenario is linear SI (W, m,
// linear gain); RawScenario is the dB/km form used by scenario files and the
// CLI, and from_db_domain is the only bridge between them.

#include <cmath>
#include <optional>
#include <sstream>
#include <string>

#include "coexist/channel.hpp"
#include "coexist/errors.hpp"
#include "coexist/geometry.hpp"
#include "coexist/units.hpp"

namespace coexist {

enum class CoexistenceCase { CaseI_NtnDl, CaseII_NtnUl, NoNtnBaseline };

/// Fading used by the Monte Carlo engine: Rician per link class (K_TN, K_NTN),
/// or the analytic engine's own models (useful for exact cross-checks).
enum class SimFading { Rician, Matched };

struct TnConfig {
  double cluster_radius = 0.0;      // r_TN, m
  double ue_offset = 0.0;           // x_0, m from cluster centre
  int num_bs = 19;                  // N_c
  double inter_site_distance = 0.0; // d_ISD, m
  double bs_power = 0.0;            // p_TN, W
  double bs_gain = 1.0;             // G_BS
  double pathloss_exp = 3.0;        // alpha_TN
  double load = 1.0;                // fraction of interfering BSs active
};

struct NtnConfig {
  double altitude = 0.0;      // a, m
  double sat_power = 0.0;     // W
  double ue_power = 0.0;      // W, NTN UE uplink
  double sat_gain = 1.0;
  double ue_gain = 1.0;       // NTN UE transmit antenna
  int num_ues = 0;            // N_u
  double isolation = 0.0;     // d_iso, m
  double outer_radius = 0.0;  // r_NTN, m
  double pathloss_exp = 2.0;  // alpha_NTN
  double earth_radius = units::kEarthRadius;
  geometry::SatelliteModel satellite_model = geometry::SatelliteModel::Zenith;
};

struct ChannelConfig {
  int serving_m = 1;
  FadingModel tn_interf_fading = FadingModel::nakagami(1);
  FadingModel ntn_interf_fading = FadingModel::nakagami(101);
  double rician_k_tn = 0.0;
  double rician_k_ntn = 200.0;
  double ue_gain = 1.0;  // G_u, victim TN UE
  double side_lobe_ratio = 0.05011872336272722;  // -13 dB
  bool side_lobe_interferers = false;
  double noise_power = 0.0;  // sigma^2, W
  double bandwidth = 20e6;
  double carrier = 2e9;
  SimFading sim_fading = SimFading::Rician;
};

struct Scenario {
  TnConfig tn;
  NtnConfig ntn;
  ChannelConfig chan;
  CoexistenceCase coexistence = CoexistenceCase::CaseI_NtnDl;

  /// Throws DomainError / GeometryError on the first violated invariant.
  void validate() const {
    auto require = [](bool ok, const char* what) {
      if (!ok) throw DomainError(what);
    };
    require(tn.cluster_radius > 0.0, "r_TN must be > 0");
    require(tn.ue_offset >= 0.0 && tn.ue_offset <= tn.cluster_radius, "x_0 must lie in [0, r_TN]");
    require(tn.num_bs >= 1, "N_c must be >= 1");
    require(tn.bs_power > 0.0, "p_TN must be > 0");
    require(tn.bs_gain > 0.0, "G_BS must be > 0");
    require(tn.pathloss_exp > 2.0, "alpha_TN must be > 2");
    require(tn.load >= 0.0 && tn.load <= 1.0, "load must lie in [0, 1]");
    require(ntn.altitude > 0.0, "altitude must be > 0");
    require(ntn.sat_power > 0.0 && ntn.ue_power > 0.0, "NTN powers must be > 0");
    require(ntn.sat_gain > 0.0 && ntn.ue_gain > 0.0, "NTN gains must be > 0");
    require(ntn.num_ues >= 0, "N_u must be >= 0");
    require(ntn.isolation >= 0.0, "d_iso must be >= 0");
    require(ntn.pathloss_exp >= 2.0, "alpha_NTN must be >= 2");
    require(ntn.earth_radius > 0.0, "earth radius must be > 0");
    if (!(tn.cluster_radius + ntn.isolation < ntn.outer_radius)) {
      std::ostringstream msg;
      msg << "invalid geometry: r_TN + d_iso = " << tn.cluster_radius + ntn.isolation
          << " m must be < r_NTN = " << ntn.outer_radius << " m";
      throw GeometryError(msg.str());
    }
    require(chan.serving_m >= 1, "serving m must be an integer >= 1");
    require(chan.ue_gain > 0.0, "G_u must be > 0");
    require(chan.side_lobe_ratio > 0.0, "side-lobe ratio must be > 0");
    require(chan.noise_power > 0.0, "noise power must be > 0");
    require(chan.rician_k_tn >= 0.0 && chan.rician_k_ntn >= 0.0, "Rician K must be >= 0");
  }
};

struct EffectiveGains {
  double tn;   // G_TN = G_BS G_u
  double ntn;  // G_NTN = G_sat G_u (Case I) or G_u,NTN G_u (Case II)
};

inline EffectiveGains effective_gains(const Scenario& s) {
  const double ntn_tx =
      s.coexistence == CoexistenceCase::CaseII_NtnUl ? s.ntn.ue_gain : s.ntn.sat_gain;
  return {s.tn.bs_gain * s.chan.ue_gain, ntn_tx * s.chan.ue_gain};
}

/// Gains applied on interfering links: the maximum gain, optionally scaled
/// down to the side-lobe level.
inline EffectiveGains interferer_gains(const Scenario& s) {
  auto g = effective_gains(s);
  if (s.chan.side_lobe_interferers) {
    g.tn *= s.chan.side_lobe_ratio;
    g.ntn *= s.chan.side_lobe_ratio;
  }
  return g;
}

/// Transmit power of the NTN aggressor for the scenario's case.
inline double ntn_tx_power(const Scenario& s) {
  return s.coexistence == CoexistenceCase::CaseII_NtnUl ? s.ntn.ue_power : s.ntn.sat_power;
}

/// kTB noise at 290 K times the receiver noise figure.
inline double default_noise_power(double bandwidth_hz, double noise_figure_db) {
  if (!(bandwidth_hz > 0.0)) throw DomainError("bandwidth must be > 0");
  return units::kBoltzmann * units::kReferenceTemperature * bandwidth_hz *
         units::db_to_linear(noise_figure_db);
}

/// Cluster radius holding N_c sites on a hexagonal grid of pitch d_ISD:
/// the smallest number of rings k with 1 + 3k(k+1) >= N_c, radius (k + 1/2) d_ISD.
/// N_c = 19 gives 2.5 d_ISD.
inline double cluster_radius_for_isd(double isd, int num_bs) {
  int rings = 0;
  while (1 + 3 * rings * (rings + 1) < num_bs) ++rings;
  return (rings + 0.5) * isd;
}

inline std::string to_string(CoexistenceCase c) {
  switch (c) {
    case CoexistenceCase::CaseI_NtnDl: return "I";
    case CoexistenceCase::CaseII_NtnUl: return "II";
    case CoexistenceCase::NoNtnBaseline: return "baseline";
  }
  return "?";
}

inline CoexistenceCase parse_case(const std::string& v) {
  if (v == "I" || v == "1" || v == "case1" || v == "ntn_dl") return CoexistenceCase::CaseI_NtnDl;
  if (v == "II" || v == "2" || v == "case2" || v == "ntn_ul") return CoexistenceCase::CaseII_NtnUl;
  if (v == "baseline" || v == "none" || v == "no_ntn") return CoexistenceCase::NoNtnBaseline;
  throw DomainError("unknown co-existence case '" + v + "' (expected I, II or baseline)");
}

/// Scenario in the units the link budget is written in. Optional fields fall
/// back to derived defaults in from_db_domain.
struct RawScenario {
  std::string coexistence = "I";
  // TN cluster
  double isd_km = 0.75;
  long num_bs = 19;
  std::optional<double> cluster_radius_km;  // default cluster_radius_for_isd
  double ue_offset_frac = 0.5;              // x_0 / r_TN
  double bs_power_dbm = 46.0;
  double bs_gain_dbi = 17.0;
  double pathloss_exp_tn = 3.0;
  double load = 1.0;
  // NTN
  double altitude_km = 600.0;
  double sat_power_dbm = 46.0;
  double sat_gain_dbi = 30.0;
  double ntn_ue_power_dbm = 23.010299956639813;  // 200 mW
  double ntn_ue_gain_dbi = 1.0;
  long num_ntn_ues = 3;
  std::optional<double> isolation_km;     // default: one ISD
  double annulus_width_km = 25.0;         // r_NTN = r_TN + d_iso + width unless overridden
  std::optional<double> outer_radius_km;  // r_NTN
  double pathloss_exp_ntn = 2.0;
  double earth_radius_km = 6371.0;
  std::string satellite_model = "zenith";
  // channels
  double rician_k_tn = 0.0;
  double rician_k_ntn = 200.0;
  std::optional<long> serving_m;     // default: matched to rician_k_tn
  std::optional<long> tn_interf_m;   // default: matched to rician_k_tn
  std::optional<long> ntn_interf_m;  // default: matched to rician_k_ntn
  std::string interferer_fading = "nakagami";  // or "rician": exact Rician LT for interferers
  std::string sim_fading = "rician";           // or "matched"
  double ue_gain_dbi = 0.0;
  double side_lobe_db = -13.0;
  bool side_lobe_interferers = false;
  double noise_figure_db = 7.0;
  double bandwidth_mhz = 20.0;
  double carrier_ghz = 2.0;
  std::optional<double> noise_power_dbm;  // overrides kTB + NF
};

namespace detail {

inline void require_finite(double v, const char* name) {
  if (!std::isfinite(v)) throw DomainError(std::string(name) + " must be finite");
}

inline int to_count(long v, const char* name, long min) {
  if (v < min) throw DomainError(std::string(name) + " must be >= " + std::to_string(min));
  return static_cast<int>(v);
}

}  // namespace detail

/// Converts dBm/dBi/km inputs to a validated linear-unit Scenario.
inline Scenario from_db_domain(const RawScenario& raw) {
  using detail::require_finite;
  for (auto [v, name] : {std::pair{raw.isd_km, "isd_km"}, {raw.ue_offset_frac, "ue_offset_frac"},
                         {raw.bs_power_dbm, "bs_power_dbm"}, {raw.bs_gain_dbi, "bs_gain_dbi"},
                         {raw.pathloss_exp_tn, "pathloss_exp_tn"}, {raw.load, "load"},
                         {raw.altitude_km, "altitude_km"}, {raw.sat_power_dbm, "sat_power_dbm"},
                         {raw.sat_gain_dbi, "sat_gain_dbi"}, {raw.ntn_ue_power_dbm, "ntn_ue_power_dbm"},
                         {raw.ntn_ue_gain_dbi, "ntn_ue_gain_dbi"}, {raw.annulus_width_km, "annulus_width_km"},
                         {raw.pathloss_exp_ntn, "pathloss_exp_ntn"}, {raw.earth_radius_km, "earth_radius_km"},
                         {raw.rician_k_tn, "rician_k_tn"}, {raw.rician_k_ntn, "rician_k_ntn"},
                         {raw.ue_gain_dbi, "ue_gain_dbi"}, {raw.side_lobe_db, "side_lobe_db"},
                         {raw.noise_figure_db, "noise_figure_db"}, {raw.bandwidth_mhz, "bandwidth_mhz"},
                         {raw.carrier_ghz, "carrier_ghz"}}) {
    require_finite(v, name);
  }

  Scenario s;
  s.coexistence = parse_case(raw.coexistence);

  auto& tn = s.tn;
  tn.num_bs = detail::to_count(raw.num_bs, "num_bs", 1);
  tn.inter_site_distance = units::km(raw.isd_km);
  tn.cluster_radius = raw.cluster_radius_km ? units::km(*raw.cluster_radius_km)
                                            : cluster_radius_for_isd(tn.inter_site_distance, tn.num_bs);
  if (!(raw.ue_offset_frac >= 0.0 && raw.ue_offset_frac <= 1.0))
    throw DomainError("ue_offset_frac must lie in [0, 1]");
  tn.ue_offset = raw.ue_offset_frac * tn.cluster_radius;
  tn.bs_power = units::dbm_to_watts(raw.bs_power_dbm);
  tn.bs_gain = units::db_to_linear(raw.bs_gain_dbi);
  tn.pathloss_exp = raw.pathloss_exp_tn;
  tn.load = raw.load;

  auto& ntn = s.ntn;
  ntn.altitude = units::km(raw.altitude_km);
  ntn.sat_power = units::dbm_to_watts(raw.sat_power_dbm);
  ntn.ue_power = units::dbm_to_watts(raw.ntn_ue_power_dbm);
  ntn.sat_gain = units::db_to_linear(raw.sat_gain_dbi);
  ntn.ue_gain = units::db_to_linear(raw.ntn_ue_gain_dbi);
  ntn.num_ues = detail::to_count(raw.num_ntn_ues, "num_ntn_ues", 0);
  ntn.isolation = raw.isolation_km ? units::km(*raw.isolation_km) : tn.inter_site_distance;
  ntn.outer_radius = raw.outer_radius_km
                         ? units::km(*raw.outer_radius_km)
                         : tn.cluster_radius + ntn.isolation + units::km(raw.annulus_width_km);
  ntn.pathloss_exp = raw.pathloss_exp_ntn;
  ntn.earth_radius = units::km(raw.earth_radius_km);
  if (raw.satellite_model == "zenith") {
    ntn.satellite_model = geometry::SatelliteModel::Zenith;
  } else if (raw.satellite_model == "uniform_cap") {
    ntn.satellite_model = geometry::SatelliteModel::UniformCap;
  } else {
    throw DomainError("satellite_model must be 'zenith' or 'uniform_cap'");
  }

  auto& ch = s.chan;
  ch.rician_k_tn = raw.rician_k_tn;
  ch.rician_k_ntn = raw.rician_k_ntn;
  if (!(ch.rician_k_tn >= 0.0 && ch.rician_k_ntn >= 0.0)) throw DomainError("Rician K must be >= 0");
  const int m_tn = match_rician_to_nakagami(ch.rician_k_tn);
  const int m_ntn = match_rician_to_nakagami(ch.rician_k_ntn);
  ch.serving_m = raw.serving_m ? detail::to_count(*raw.serving_m, "serving_m", 1) : m_tn;
  if (raw.interferer_fading == "nakagami") {
    ch.tn_interf_fading =
        FadingModel::nakagami(raw.tn_interf_m ? detail::to_count(*raw.tn_interf_m, "tn_interf_m", 1) : m_tn);
    ch.ntn_interf_fading = FadingModel::nakagami(
        raw.ntn_interf_m ? detail::to_count(*raw.ntn_interf_m, "ntn_interf_m", 1) : m_ntn);
  } else if (raw.interferer_fading == "rician") {
    ch.tn_interf_fading = FadingModel::rician(ch.rician_k_tn);
    ch.ntn_interf_fading = FadingModel::rician(ch.rician_k_ntn);
  } else {
    throw DomainError("interferer_fading must be 'nakagami' or 'rician'");
  }
  if (raw.sim_fading == "rician") {
    ch.sim_fading = SimFading::Rician;
  } else if (raw.sim_fading == "matched") {
    ch.sim_fading = SimFading::Matched;
  } else {
    throw DomainError("sim_fading must be 'rician' or 'matched'");
  }
  ch.ue_gain = units::db_to_linear(raw.ue_gain_dbi);
  ch.side_lobe_ratio = units::db_to_linear(raw.side_lobe_db);
  ch.side_lobe_interferers = raw.side_lobe_interferers;
  ch.bandwidth = raw.bandwidth_mhz * 1e6;
  ch.carrier = raw.carrier_ghz * 1e9;
  if (raw.noise_power_dbm) {
    detail::require_finite(*raw.noise_power_dbm, "noise_power_dbm");
    ch.noise_power = units::dbm_to_watts(*raw.noise_power_dbm);
  } else {
    ch.noise_power = default_noise_power(ch.bandwidth, raw.noise_figure_db);
  }

  s.validate();
  return s;
}

/// Inverse of from_db_domain with every optional made explicit.
inline RawScenario to_db_domain(const Scenario& s) {
  RawScenario r;
  r.coexistence = to_string(s.coexistence);
  r.isd_km = s.tn.inter_site_distance / 1e3;
  r.num_bs = s.tn.num_bs;
  r.cluster_radius_km = s.tn.cluster_radius / 1e3;
  r.ue_offset_frac = s.tn.ue_offset / s.tn.cluster_radius;
  r.bs_power_dbm = units::watts_to_dbm(s.tn.bs_power);
  r.bs_gain_dbi = units::linear_to_db(s.tn.bs_gain);
  r.pathloss_exp_tn = s.tn.pathloss_exp;
  r.load = s.tn.load;
  r.altitude_km = s.ntn.altitude / 1e3;
  r.sat_power_dbm = units::watts_to_dbm(s.ntn.sat_power);
  r.sat_gain_dbi = units::linear_to_db(s.ntn.sat_gain);
  r.ntn_ue_power_dbm = units::watts_to_dbm(s.ntn.ue_power);
  r.ntn_ue_gain_dbi = units::linear_to_db(s.ntn.ue_gain);
  r.num_ntn_ues = s.ntn.num_ues;
  r.isolation_km = s.ntn.isolation / 1e3;
  r.outer_radius_km = s.ntn.outer_radius / 1e3;
  r.annulus_width_km = (s.ntn.outer_radius - s.tn.cluster_radius - s.ntn.isolation) / 1e3;
  r.pathloss_exp_ntn = s.ntn.pathloss_exp;
  r.earth_radius_km = s.ntn.earth_radius / 1e3;
  r.satellite_model =
      s.ntn.satellite_model == geometry::SatelliteModel::Zenith ? "zenith" : "uniform_cap";
  r.rician_k_tn = s.chan.rician_k_tn;
  r.rician_k_ntn = s.chan.rician_k_ntn;
  r.serving_m = s.chan.serving_m;
  const bool rician = s.chan.tn_interf_fading.kind == FadingKind::Rician;
  r.interferer_fading = rician ? "rician" : "nakagami";
  if (!rician) {
    r.tn_interf_m = s.chan.tn_interf_fading.m;
    r.ntn_interf_m = s.chan.ntn_interf_fading.m;
  }
  r.sim_fading = s.chan.sim_fading == SimFading::Rician ? "rician" : "matched";
  r.ue_gain_dbi = units::linear_to_db(s.chan.ue_gain);
  r.side_lobe_db = units::linear_to_db(s.chan.side_lobe_ratio);
  r.side_lobe_interferers = s.chan.side_lobe_interferers;
  r.bandwidth_mhz = s.chan.bandwidth / 1e6;
  r.carrier_ghz = s.chan.carrier / 1e9;
  r.noise_power_dbm = units::watts_to_dbm(s.chan.noise_power);
  return r;
}

/// Urban preset: ISD 0.75 km.
inline RawScenario urban_preset() { return RawScenario{}; }

/// Rural preset: ISD 7.5 km.
inline RawScenario rural_preset() {
  RawScenario r;
  r.isd_km = 7.5;
  return r;
}

}  // namespace coexist
