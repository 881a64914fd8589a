// coexist: coverage and rate of a terrestrial downlink sharing spectrum with
// a LEO satellite network, analytic and simulated.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "coexist/coexist.hpp"

namespace {

using namespace coexist;

struct Common {
  std::string scenario_path;
  std::vector<std::string> overrides;
  std::string sweep;
  std::string cases;
  std::string t_db;
  std::string format = "csv";
  std::string out;
  std::string metrics = "coverage,rate";
  unsigned workers = 0;
  std::uint64_t trials = 100000;
  std::uint64_t seed = 1;
};

void add_scenario_options(CLI::App* app, Common& c) {
  app->add_option("--scenario", c.scenario_path, "Scenario JSON file (default: built-in urban preset)");
  app->add_option("--set", c.overrides, "Override a scenario key, key=value (repeatable)");
}

void add_common(CLI::App* app, Common& c) {
  add_scenario_options(app, c);
  app->add_option("--sweep", c.sweep, "axis=v1,v2,... or axis=a:b:step");
  app->add_option("--cases", c.cases, "Comma list of cases to run: I, II, baseline");
  app->add_option("--t-db", c.t_db, "SINR threshold grid in dB, a:b:step or list (default -10:30:5)");
  app->add_option("--metrics", c.metrics, "Comma list: coverage, rate");
  app->add_option("--format", c.format, "Output format")->check(CLI::IsMember({"csv", "json"}));
  app->add_option("--out", c.out, "Write output to this file instead of stdout");
  app->add_option("--workers", c.workers, "Worker threads (0 = all cores)");
}

void add_mc(CLI::App* app, Common& c) {
  app->add_option("--trials", c.trials, "Monte Carlo trials per grid point")->check(CLI::PositiveNumber);
  app->add_option("--seed", c.seed, "Monte Carlo seed");
}

RawScenario load(const Common& c) {
  RawScenario raw = c.scenario_path.empty() ? urban_preset() : io::load_scenario(c.scenario_path);
  for (const auto& o : c.overrides) raw = io::apply_override(raw, o);
  return raw;
}

std::vector<std::string> split(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  for (std::string item; std::getline(ss, item, ',');)
    if (!item.empty()) out.push_back(item);
  return out;
}

std::vector<exp::GridPoint> build_grid(const Common& c) {
  const RawScenario raw = load(c);
  exp::SweepSpec sweep;
  if (!c.sweep.empty()) sweep = exp::SweepSpec::parse(c.sweep);
  for (const auto& name : split(c.cases)) sweep.cases.push_back(parse_case(name));
  const auto t_grid = c.t_db.empty() ? exp::default_t_grid_db() : exp::parse_values(c.t_db);
  return exp::expand(raw, sweep, t_grid);
}

exp::RunOptions run_options(const Common& c) {
  exp::RunOptions opt;
  opt.coverage = false;
  opt.rate = false;
  for (const auto& m : split(c.metrics)) {
    if (m == "coverage") {
      opt.coverage = true;
    } else if (m == "rate") {
      opt.rate = true;
    } else {
      throw DomainError("unknown metric '" + m + "' (expected coverage or rate)");
    }
  }
  opt.workers = c.workers;
  opt.trials = c.trials;
  opt.seed = c.seed;
  return opt;
}

/// Output goes to --out when given, else stdout.
class Sink {
 public:
  explicit Sink(const std::string& path) {
    if (!path.empty()) {
      file_ = std::make_unique<std::ofstream>(path);
      if (!*file_) throw DomainError("cannot write '" + path + "'");
    }
  }
  std::ostream& stream() { return file_ ? *file_ : std::cout; }

 private:
  std::unique_ptr<std::ofstream> file_;
};

void emit(const Common& c, const std::vector<exp::Row>& rows, bool simulated) {
  Sink sink(c.out);
  if (c.format == "json") {
    exp::write_json(sink.stream(), rows, simulated);
  } else {
    exp::write_csv(sink.stream(), rows, simulated);
  }
}

geometry::PiecewiseDistribution pick_distribution(const Scenario& sc, const std::string& which,
                                                  double r0_km) {
  if (which == "serving") return geometry::serving_distribution(sc.tn.ue_offset, sc.tn.cluster_radius, sc.tn.num_bs);
  if (which == "interferer") {
    return geometry::interferer_distribution(units::km(r0_km), sc.tn.ue_offset, sc.tn.cluster_radius);
  }
  if (which == "annulus") {
    return geometry::annulus_distribution(sc.tn.ue_offset, sc.tn.cluster_radius, sc.ntn.isolation,
                                          sc.ntn.outer_radius);
  }
  if (which == "satellite")
    return geometry::satellite_distance(sc.ntn.satellite_model, sc.ntn.altitude, sc.ntn.earth_radius);
  throw DomainError("unknown distribution '" + which + "' (expected serving, interferer, annulus or satellite)");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Coverage and rate of a terrestrial network sharing spectrum with a LEO satellite network"};
  app.require_subcommand(1);

  Common an;
  auto* analyze_cmd = app.add_subcommand("analyze", "Analytic coverage and rate over a grid");
  add_common(analyze_cmd, an);

  Common sim;
  auto* simulate_cmd = app.add_subcommand("simulate", "Monte Carlo coverage and rate over a grid");
  add_common(simulate_cmd, sim);
  add_mc(simulate_cmd, sim);

  Common val;
  double tolerance = 0.02;
  double rate_tolerance = 0.02;
  auto* validate_cmd = app.add_subcommand("validate", "Compare analytic and simulated results; exit 1 on mismatch");
  add_common(validate_cmd, val);
  add_mc(validate_cmd, val);
  validate_cmd->add_option("--tolerance", tolerance, "Absolute coverage tolerance")->check(CLI::NonNegativeNumber);
  validate_cmd->add_option("--rate-tolerance", rate_tolerance, "Relative rate tolerance")
      ->check(CLI::NonNegativeNumber);

  Common geo;
  std::string dist = "serving";
  double r0_km = 0.0;
  int points = 201;
  auto* geometry_cmd = app.add_subcommand("geometry", "Distance distributions");
  geometry_cmd->require_subcommand(1);
  auto* dump_cmd = geometry_cmd->add_subcommand("dump-cdf", "Tabulate (r, cdf, pdf) for one distribution");
  add_scenario_options(dump_cmd, geo);
  dump_cmd->add_option("--dist", dist, "serving, interferer, annulus or satellite");
  dump_cmd->add_option("--r0-km", r0_km, "Serving distance for the interferer distribution (km)");
  dump_cmd->add_option("--points", points, "Number of rows")->check(CLI::Range(2, 1000000));
  dump_cmd->add_option("--out", geo.out, "Write output to this file instead of stdout");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*analyze_cmd) {
      emit(an, exp::analyze(build_grid(an), run_options(an)), false);
    } else if (*simulate_cmd) {
      emit(sim, exp::simulate(build_grid(sim), run_options(sim)), true);
    } else if (*validate_cmd) {
      const auto rep = exp::validate(build_grid(val), run_options(val), tolerance, rate_tolerance);
      Sink sink(val.out);
      if (val.format == "json") {
        exp::write_validation_json(sink.stream(), rep);
      } else {
        exp::write_validation_csv(sink.stream(), rep);
      }
      std::size_t failed = 0;
      for (const auto& p : rep.points) failed += p.pass ? 0 : 1;
      std::cerr << (failed == 0 ? "PASS" : "FAIL") << ": " << rep.points.size() - failed << "/"
                << rep.points.size() << " points within tolerance\n";
      return failed == 0 ? 0 : 1;
    } else if (*dump_cmd) {
      const auto sc = from_db_domain(load(geo));
      const auto d = pick_distribution(sc, dist, r0_km);
      Sink sink(geo.out);
      auto& os = sink.stream();
      os << "r,cdf,pdf\n";
      const double lo = d.support_min();
      const double hi = d.support_max();
      for (int i = 0; i < points; ++i) {
        const double r = d.is_point_mass() ? lo : lo + (hi - lo) * i / (points - 1);
        os << exp::fmt_num(r) << ',' << exp::fmt_num(d.cdf(r)) << ',' << exp::fmt_num(d.pdf(r)) << '\n';
        if (d.is_point_mass()) break;
      }
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
