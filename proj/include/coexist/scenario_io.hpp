#pragma once

// Flat JSON scenario files and `key=value` overrides for RawScenario.

#include <fstream>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <type_traits>

#include <json.hpp>

#include "coexist/config.hpp"
#include "coexist/errors.hpp"

namespace coexist::io {

using nlohmann::json;

namespace detail {

template <class T>
void read_value(const json& j, T& out, std::string_view key) {
  if constexpr (std::is_same_v<T, long>) {
    if (!j.is_number_integer()) throw DomainError("'" + std::string(key) + "' must be an integer, got " + j.dump());
  }
  try {
    out = j.get<T>();
  } catch (const json::exception&) {
    throw DomainError("bad value for '" + std::string(key) + "': " + j.dump());
  }
}

template <class T>
void read_value(const json& j, std::optional<T>& out, std::string_view key) {
  if (j.is_null()) {
    out.reset();
    return;
  }
  T v{};
  read_value(j, v, key);
  out = v;
}

template <class T>
json write_value(const T& v) { return v; }

template <class T>
json write_value(const std::optional<T>& v) { return v ? json(*v) : json(nullptr); }

}  // namespace detail

/// Calls f(name, member) for every scenario key, in file order.
template <class Raw, class F>
void for_each_field(Raw& r, F&& f) {
  f("coexistence", r.coexistence);
  f("isd_km", r.isd_km);
  f("num_bs", r.num_bs);
  f("cluster_radius_km", r.cluster_radius_km);
  f("ue_offset_frac", r.ue_offset_frac);
  f("bs_power_dbm", r.bs_power_dbm);
  f("bs_gain_dbi", r.bs_gain_dbi);
  f("pathloss_exp_tn", r.pathloss_exp_tn);
  f("load", r.load);
  f("altitude_km", r.altitude_km);
  f("sat_power_dbm", r.sat_power_dbm);
  f("sat_gain_dbi", r.sat_gain_dbi);
  f("ntn_ue_power_dbm", r.ntn_ue_power_dbm);
  f("ntn_ue_gain_dbi", r.ntn_ue_gain_dbi);
  f("num_ntn_ues", r.num_ntn_ues);
  f("isolation_km", r.isolation_km);
  f("annulus_width_km", r.annulus_width_km);
  f("outer_radius_km", r.outer_radius_km);
  f("pathloss_exp_ntn", r.pathloss_exp_ntn);
  f("earth_radius_km", r.earth_radius_km);
  f("satellite_model", r.satellite_model);
  f("rician_k_tn", r.rician_k_tn);
  f("rician_k_ntn", r.rician_k_ntn);
  f("serving_m", r.serving_m);
  f("tn_interf_m", r.tn_interf_m);
  f("ntn_interf_m", r.ntn_interf_m);
  f("interferer_fading", r.interferer_fading);
  f("sim_fading", r.sim_fading);
  f("ue_gain_dbi", r.ue_gain_dbi);
  f("side_lobe_db", r.side_lobe_db);
  f("side_lobe_interferers", r.side_lobe_interferers);
  f("noise_figure_db", r.noise_figure_db);
  f("bandwidth_mhz", r.bandwidth_mhz);
  f("carrier_ghz", r.carrier_ghz);
  f("noise_power_dbm", r.noise_power_dbm);
}

/// Applies the keys present in `j` on top of `base`. Unknown keys are errors.
inline RawScenario merge_json(RawScenario base, const json& j) {
  if (!j.is_object()) throw DomainError("scenario must be a JSON object");
  std::set<std::string> seen;
  for_each_field(base, [&](std::string_view name, auto& member) {
    const auto it = j.find(std::string(name));
    if (it == j.end()) return;
    detail::read_value(*it, member, name);
    seen.emplace(name);
  });
  for (const auto& [key, _] : j.items()) {
    if (key == "preset") continue;
    if (!seen.contains(key)) throw DomainError("unknown scenario key '" + key + "'");
  }
  return base;
}

/// A scenario object may name a base "preset" ("urban" or "rural").
inline RawScenario from_json(const json& j) {
  RawScenario base = urban_preset();
  if (j.is_object() && j.contains("preset")) {
    const auto p = j.at("preset").get<std::string>();
    if (p == "rural") {
      base = rural_preset();
    } else if (p != "urban") {
      throw DomainError("unknown preset '" + p + "' (expected urban or rural)");
    }
  }
  return merge_json(base, j);
}

inline json to_json(const RawScenario& raw) {
  json j = json::object();
  for_each_field(raw, [&](std::string_view name, const auto& member) {
    j[std::string(name)] = detail::write_value(member);
  });
  return j;
}

inline RawScenario load_scenario(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DomainError("cannot open scenario file '" + path + "'");
  json j;
  try {
    j = json::parse(in, nullptr, true, true);
  } catch (const json::parse_error& e) {
    throw DomainError("scenario file '" + path + "': " + e.what());
  }
  return from_json(j);
}

/// "key=value"; the value is read as JSON when it parses, otherwise as a string.
inline RawScenario apply_override(RawScenario raw, std::string_view assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string_view::npos || eq == 0)
    throw DomainError("override must look like key=value, got '" + std::string(assignment) + "'");
  const std::string key(assignment.substr(0, eq));
  const std::string text(assignment.substr(eq + 1));
  json value = json::parse(text, nullptr, false);
  if (value.is_discarded()) value = text;
  json j = json::object();
  j[key] = value;
  return merge_json(std::move(raw), j);
}

}  // namespace coexist::io
