#pragma once

// Sweep plumbing behind the command-line tool: expands a scenario over one
// axis and a threshold grid, evaluates analytically or by simulation, and
// serializes rows in a fixed order.

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <exception>
#include <functional>
#include <mutex>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <thread>
#include <tuple>
#include <type_traits>
#include <vector>

#include <json.hpp>

#include "coexist/config.hpp"
#include "coexist/errors.hpp"
#include "coexist/metrics.hpp"
#include "coexist/montecarlo.hpp"
#include "coexist/units.hpp"

namespace coexist::exp {

enum class Axis { None, TDb, Altitude, PTnDbm, DIsd, DIso, NU, Load, X0Frac };

inline Axis parse_axis(const std::string& name) {
  if (name == "T_db") return Axis::TDb;
  if (name == "altitude") return Axis::Altitude;
  if (name == "p_tn_dbm") return Axis::PTnDbm;
  if (name == "d_isd") return Axis::DIsd;
  if (name == "d_iso") return Axis::DIso;
  if (name == "n_u") return Axis::NU;
  if (name == "load") return Axis::Load;
  if (name == "x_0_frac") return Axis::X0Frac;
  throw DomainError("unknown sweep axis '" + name +
                    "' (expected T_db, altitude, p_tn_dbm, d_isd, d_iso, n_u, load or x_0_frac)");
}

inline std::string to_string(Axis a) {
  switch (a) {
    case Axis::None: return "none";
    case Axis::TDb: return "T_db";
    case Axis::Altitude: return "altitude";
    case Axis::PTnDbm: return "p_tn_dbm";
    case Axis::DIsd: return "d_isd";
    case Axis::DIso: return "d_iso";
    case Axis::NU: return "n_u";
    case Axis::Load: return "load";
    case Axis::X0Frac: return "x_0_frac";
  }
  return "?";
}

/// Sets one axis on a raw scenario. Lengths are in km (altitude, d_isd, d_iso).
inline RawScenario apply_axis(RawScenario raw, Axis axis, double v) {
  switch (axis) {
    case Axis::None:
    case Axis::TDb: break;
    case Axis::Altitude: raw.altitude_km = v; break;
    case Axis::PTnDbm: raw.bs_power_dbm = v; break;
    case Axis::DIsd: raw.isd_km = v; break;
    case Axis::DIso: raw.isolation_km = v; break;
    case Axis::NU:
      if (v != std::floor(v)) throw DomainError("n_u values must be integers");
      raw.num_ntn_ues = static_cast<long>(v);
      break;
    case Axis::Load: raw.load = v; break;
    case Axis::X0Frac: raw.ue_offset_frac = v; break;
  }
  return raw;
}

/// Inclusive range "a:b:step" (step > 0, b >= a).
inline std::vector<double> parse_range(const std::string& text) {
  double a = 0.0, b = 0.0, step = 0.0;
  char tail = 0;
  if (std::sscanf(text.c_str(), "%lf:%lf:%lf%c", &a, &b, &step, &tail) != 3)
    throw DomainError("range must look like a:b:step, got '" + text + "'");
  if (!(step > 0.0) || !(b >= a)) throw DomainError("range needs step > 0 and b >= a: '" + text + "'");
  const auto n = static_cast<long>(std::floor((b - a) / step + 1e-9)) + 1;
  std::vector<double> out;
  out.reserve(static_cast<std::size_t>(n));
  for (long i = 0; i < n; ++i) out.push_back(a + static_cast<double>(i) * step);
  return out;
}

/// Comma list "v1,v2,..." or a single range "a:b:step".
inline std::vector<double> parse_values(const std::string& text) {
  if (text.find(':') != std::string::npos) return parse_range(text);
  std::vector<double> out;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const auto comma = std::min(text.find(',', pos), text.size());
    const std::string item = text.substr(pos, comma - pos);
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(item, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != item.size()) throw DomainError("bad numeric value '" + item + "'");
    out.push_back(v);
    pos = comma + 1;
  }
  return out;
}

struct SweepSpec {
  Axis axis = Axis::None;
  std::vector<double> values;
  std::vector<CoexistenceCase> cases;  // empty: the scenario's own case

  /// "axis=v1,v2,..." or "axis=a:b:step".
  static SweepSpec parse(const std::string& text) {
    const auto eq = text.find('=');
    if (eq == std::string::npos) throw DomainError("sweep must look like axis=values, got '" + text + "'");
    SweepSpec s;
    s.axis = parse_axis(text.substr(0, eq));
    s.values = parse_values(text.substr(eq + 1));
    if (s.values.empty()) throw DomainError("sweep has no values");
    return s;
  }
};

inline std::vector<double> default_t_grid_db() { return parse_range("-10:30:5"); }

struct Row {
  CoexistenceCase coexistence = CoexistenceCase::CaseI_NtnDl;
  Axis axis = Axis::None;
  std::optional<double> axis_value;
  std::optional<double> t_db;  // empty for rate rows
  std::string metric;          // "coverage" or "rate"
  double value = 0.0;
  double err = 0.0;            // quadrature error estimate (analytic) or 0
  std::optional<double> half_width;
  std::optional<std::uint64_t> seed;
  std::optional<std::uint64_t> trials;
};

/// Sort key: case, axis value, then T_db with rate rows last.
inline bool row_less(const Row& a, const Row& b) {
  auto key = [](const Row& r) {
    return std::tuple(static_cast<int>(r.coexistence), r.axis_value.value_or(0.0), r.t_db.has_value() ? 0 : 1,
                      r.t_db.value_or(0.0));
  };
  return key(a) < key(b);
}

/// One evaluation point of a sweep: a concrete scenario and its threshold grid.
struct GridPoint {
  CoexistenceCase coexistence;
  Axis axis;
  std::optional<double> axis_value;
  Scenario scenario;
  std::vector<double> t_db;
};

inline std::vector<GridPoint> expand(const RawScenario& raw, const SweepSpec& sweep,
                                     const std::vector<double>& t_grid_db) {
  std::vector<CoexistenceCase> cases = sweep.cases;
  if (cases.empty()) cases.push_back(parse_case(raw.coexistence));
  std::vector<GridPoint> out;
  for (auto c : cases) {
    RawScenario base = raw;
    base.coexistence = to_string(c);
    if (sweep.axis == Axis::None) {
      out.push_back({c, Axis::None, std::nullopt, from_db_domain(base), t_grid_db});
    } else if (sweep.axis == Axis::TDb) {
      out.push_back({c, Axis::TDb, std::nullopt, from_db_domain(base), sweep.values});
    } else {
      for (double v : sweep.values) {
        out.push_back({c, sweep.axis, v, from_db_domain(apply_axis(base, sweep.axis, v)), t_grid_db});
      }
    }
  }
  return out;
}

/// Runs tasks[i]() for all i on up to `workers` threads; first exception wins.
inline void parallel_for(std::size_t n, unsigned workers, const std::function<void(std::size_t)>& task) {
  if (workers == 0) workers = std::max(1u, std::thread::hardware_concurrency());
  workers = static_cast<unsigned>(std::min<std::size_t>(workers, std::max<std::size_t>(n, 1)));
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto drain = [&] {
    for (std::size_t i = next++; i < n; i = next++) {
      try {
        task(i);
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
      }
    }
  };
  if (workers <= 1) {
    drain();
  } else {
    std::vector<std::jthread> pool;
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(drain);
  }
  if (failure) std::rethrow_exception(failure);
}

struct RunOptions {
  bool coverage = true;
  bool rate = true;
  unsigned workers = 0;
  MetricOptions metric;
  std::uint64_t trials = 100000;
  std::uint64_t seed = 1;
};

inline std::vector<Row> analyze(const std::vector<GridPoint>& grid, const RunOptions& opt) {
  struct Task {
    std::size_t point;
    std::optional<double> t_db;
  };
  std::vector<Task> tasks;
  for (std::size_t p = 0; p < grid.size(); ++p) {
    if (opt.coverage)
      for (double t : grid[p].t_db) tasks.push_back({p, t});
    if (opt.rate) tasks.push_back({p, std::nullopt});
  }
  std::vector<Row> rows(tasks.size());
  parallel_for(tasks.size(), opt.workers, [&](std::size_t i) {
    const auto& gp = grid[tasks[i].point];
    Row r{gp.coexistence, gp.axis, gp.axis_value, tasks[i].t_db, "", 0.0, 0.0, {}, {}, {}};
    if (gp.axis == Axis::TDb) r.axis_value = tasks[i].t_db;
    if (tasks[i].t_db) {
      const auto res = coverage(gp.scenario, units::db_to_linear(*tasks[i].t_db), opt.metric);
      r.metric = "coverage";
      r.value = res.value;
      r.err = res.abs_error_estimate;
    } else {
      const auto res = rate(gp.scenario, opt.metric);
      r.metric = "rate";
      r.value = res.value;
      r.err = res.abs_error_estimate;
    }
    rows[i] = std::move(r);
  });
  std::stable_sort(rows.begin(), rows.end(), row_less);
  return rows;
}

inline std::vector<Row> simulate(const std::vector<GridPoint>& grid, const RunOptions& opt) {
  std::vector<Row> rows;
  for (const auto& gp : grid) {
    std::vector<double> thresholds;
    for (double t : gp.t_db) thresholds.push_back(units::db_to_linear(t));
    const auto res = mc::run_case(gp.scenario, thresholds, opt.trials, opt.seed, opt.workers);
    auto base = [&](std::optional<double> t_db, const char* metric, const mc::SimEstimate& e) {
      Row r{gp.coexistence, gp.axis, gp.axis_value, t_db, metric, e.mean, 0.0, e.half_width_95, e.seed, e.trials};
      if (gp.axis == Axis::TDb) r.axis_value = t_db;
      return r;
    };
    if (opt.coverage)
      for (std::size_t i = 0; i < gp.t_db.size(); ++i) rows.push_back(base(gp.t_db[i], "coverage", res.coverage[i]));
    if (opt.rate) rows.push_back(base(std::nullopt, "rate", res.rate));
  }
  std::stable_sort(rows.begin(), rows.end(), row_less);
  return rows;
}

struct Comparison {
  Row analytic;
  Row simulated;
  double delta = 0.0;      // simulated - analytic (relative for rate)
  double tolerance = 0.0;
  bool pass = false;
};

struct ValidationReport {
  std::vector<Comparison> points;
  bool all_pass() const {
    return std::all_of(points.begin(), points.end(), [](const Comparison& c) { return c.pass; });
  }
};

/// Coverage compared in absolute terms, rate relative to the analytic value.
inline ValidationReport validate(const std::vector<GridPoint>& grid, const RunOptions& opt, double coverage_tol,
                                 double rate_rel_tol) {
  const auto an = analyze(grid, opt);
  const auto sim = simulate(grid, opt);
  if (an.size() != sim.size()) throw std::logic_error("analytic and simulated grids differ");
  ValidationReport rep;
  for (std::size_t i = 0; i < an.size(); ++i) {
    Comparison c{an[i], sim[i], 0.0, 0.0, false};
    if (an[i].metric == "rate") {
      c.delta = an[i].value > 0.0 ? (sim[i].value - an[i].value) / an[i].value : sim[i].value - an[i].value;
      c.tolerance = rate_rel_tol;
    } else {
      c.delta = sim[i].value - an[i].value;
      c.tolerance = coverage_tol;
    }
    c.pass = std::abs(c.delta) <= c.tolerance;
    rep.points.push_back(std::move(c));
  }
  return rep;
}

// ---- output ----

inline std::string fmt_num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

template <class T>
std::string fmt_opt(const std::optional<T>& v) {
  if (!v) return "";
  if constexpr (std::is_floating_point_v<T>) {
    return fmt_num(*v);
  } else {
    return std::to_string(*v);
  }
}

inline void write_csv(std::ostream& os, const std::vector<Row>& rows, bool simulated) {
  os << "case,axis,axis_value,T_db,metric,value,err";
  if (simulated) os << ",half_width,seed,trials";
  os << '\n';
  for (const auto& r : rows) {
    os << to_string(r.coexistence) << ',' << to_string(r.axis) << ',' << fmt_opt(r.axis_value) << ','
       << fmt_opt(r.t_db) << ',' << r.metric << ',' << fmt_num(r.value) << ',' << fmt_num(r.err);
    if (simulated) os << ',' << fmt_opt(r.half_width) << ',' << fmt_opt(r.seed) << ',' << fmt_opt(r.trials);
    os << '\n';
  }
}

inline nlohmann::json row_json(const Row& r, bool simulated) {
  nlohmann::json j;
  j["case"] = to_string(r.coexistence);
  j["axis"] = to_string(r.axis);
  j["axis_value"] = r.axis_value ? nlohmann::json(*r.axis_value) : nlohmann::json(nullptr);
  j["T_db"] = r.t_db ? nlohmann::json(*r.t_db) : nlohmann::json(nullptr);
  j["metric"] = r.metric;
  j["value"] = r.value;
  j["err"] = r.err;
  if (simulated) {
    j["half_width"] = r.half_width.value_or(0.0);
    j["seed"] = r.seed.value_or(0);
    j["trials"] = r.trials.value_or(0);
  }
  return j;
}

inline void write_json(std::ostream& os, const std::vector<Row>& rows, bool simulated) {
  auto arr = nlohmann::json::array();
  for (const auto& r : rows) arr.push_back(row_json(r, simulated));
  os << arr.dump(2) << '\n';
}

inline void write_validation_csv(std::ostream& os, const ValidationReport& rep) {
  os << "case,axis,axis_value,T_db,metric,analytic,simulated,half_width,delta,tolerance,pass\n";
  for (const auto& c : rep.points) {
    const auto& a = c.analytic;
    os << to_string(a.coexistence) << ',' << to_string(a.axis) << ',' << fmt_opt(a.axis_value) << ','
       << fmt_opt(a.t_db) << ',' << a.metric << ',' << fmt_num(a.value) << ',' << fmt_num(c.simulated.value)
       << ',' << fmt_opt(c.simulated.half_width) << ',' << fmt_num(c.delta) << ',' << fmt_num(c.tolerance)
       << ',' << (c.pass ? "pass" : "FAIL") << '\n';
  }
}

inline void write_validation_json(std::ostream& os, const ValidationReport& rep) {
  auto arr = nlohmann::json::array();
  for (const auto& c : rep.points) {
    auto j = row_json(c.analytic, false);
    j.erase("value");
    j.erase("err");
    j["analytic"] = c.analytic.value;
    j["simulated"] = c.simulated.value;
    j["half_width"] = c.simulated.half_width.value_or(0.0);
    j["delta"] = c.delta;
    j["tolerance"] = c.tolerance;
    j["pass"] = c.pass;
    arr.push_back(std::move(j));
  }
  nlohmann::json out;
  out["pass"] = rep.all_pass();
  out["points"] = std::move(arr);
  os << out.dump(2) << '\n';
}

}  // namespace coexist::exp
