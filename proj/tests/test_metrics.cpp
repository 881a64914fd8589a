#include <cmath>
#include <vector>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/special_functions/expint.hpp>
#include <boost/math/special_functions/gamma.hpp>
#include <gtest/gtest.h>

#include "coexist/config.hpp"
#include "coexist/metrics.hpp"
#include "coexist/montecarlo.hpp"

using namespace coexist;

namespace {

RawScenario single_cell(int m) {
  auto raw = urban_preset();
  raw.coexistence = "baseline";
  raw.num_bs = 1;
  raw.ue_offset_frac = 0.0;
  raw.serving_m = m;
  raw.bs_power_dbm = -30.0;  // make noise matter inside the cell
  return raw;
}

}  // namespace

TEST(CoverageKernel, IdentityJetIsNoiseOnlyGammaTail) {
  for (int m : {1, 2, 5, 20}) {
    for (double x : {0.0, 0.3, 2.0, 9.0}) {
      const double s = 1.0;
      const Jet id = Jet::identity(s, m - 1);
      EXPECT_NEAR(coverage_kernel(id, s, x, m), boost::math::gamma_q(static_cast<double>(m), x), 1e-14)
          << m << " " << x;
    }
  }
}

TEST(CoverageKernel, RejectsShortJet) {
  EXPECT_THROW(coverage_kernel(Jet::identity(1.0, 1), 1.0, 0.0, 3), DomainError);
  EXPECT_THROW(coverage_kernel(Jet::identity(1.0, 1), 1.0, 0.0, 0), DomainError);
}

TEST(ConditionalCoverage, SingleLinkIsGammaTail) {
  for (int m : {1, 3}) {
    const auto sc = from_db_domain(single_cell(m));
    for (double r0 : {50.0, 150.0, 300.0}) {
      const double T = 2.0;
      const double snr = sc.tn.bs_power * sc.tn.bs_gain * std::pow(r0, -3.0) / sc.chan.noise_power;
      const double expect = boost::math::gamma_q(static_cast<double>(m), m * T / snr);
      EXPECT_NEAR(conditional_coverage(sc, T, r0), expect, 1e-13);
    }
  }
}

TEST(Coverage, SingleCellMatchesDirectIntegral) {
  const auto sc = from_db_domain(single_cell(1));
  const double R = sc.tn.cluster_radius;
  for (double T_db : {-10.0, 0.0, 10.0}) {
    const double T = units::db_to_linear(T_db);
    const double k = T * sc.chan.noise_power / (sc.tn.bs_power * sc.tn.bs_gain);
    using boost::math::quadrature::gauss_kronrod;
    const double direct = gauss_kronrod<double, 61>::integrate(
        [&](double r) { return 2.0 * r / (R * R) * std::exp(-k * r * r * r); }, 0.0, R, 20, 1e-14);
    EXPECT_NEAR(coverage(sc, T).value, direct, 1e-6);
  }
}

TEST(Coverage, RejectsNonPositiveThreshold) {
  const auto sc = from_db_domain(urban_preset());
  EXPECT_THROW(coverage(sc, 0.0), DomainError);
  EXPECT_THROW(coverage(sc, -1.0), DomainError);
}

TEST(Coverage, DecreasesWithThresholdAndStaysInUnitInterval) {
  for (const char* c : {"I", "II", "baseline"}) {
    auto raw = urban_preset();
    raw.coexistence = c;
    const auto sc = from_db_domain(raw);
    double prev = 1.0;
    for (double t_db = -10.0; t_db <= 30.0; t_db += 5.0) {
      const auto r = coverage(sc, units::db_to_linear(t_db));
      EXPECT_GE(r.value, 0.0);
      EXPECT_LE(r.value, prev + 1e-9) << c << " " << t_db;
      EXPECT_EQ(r.coexistence, sc.coexistence);
      ASSERT_TRUE(r.threshold.has_value());
      prev = r.value;
    }
  }
}

TEST(Coverage, NtnInterferenceNeverHelps) {
  for (auto raw : {urban_preset(), rural_preset()}) {
    raw.coexistence = "baseline";
    const double base = coverage(from_db_domain(raw), 1.0).value;
    raw.coexistence = "I";
    EXPECT_LE(coverage(from_db_domain(raw), 1.0).value, base + 1e-9);
    raw.coexistence = "II";
    EXPECT_LE(coverage(from_db_domain(raw), 1.0).value, base + 1e-9);
  }
}

TEST(Coverage, HigherServingOrderMatchesMatchedSimulation) {
  auto raw = urban_preset();
  raw.serving_m = 3;
  raw.tn_interf_m = 2;
  raw.sim_fading = "matched";
  const auto sc = from_db_domain(raw);
  const std::vector<double> T{0.1, 1.0, 10.0};
  const auto sim = mc::run_case(sc, T, 200000, 99, 1);
  for (std::size_t i = 0; i < T.size(); ++i) {
    const double an = coverage(sc, T[i]).value;
    EXPECT_NEAR(an, sim.coverage[i].mean, 2.0 * sim.coverage[i].half_width_95 + 1e-4) << T[i];
  }
}

TEST(Rate, SingleLinkMatchesExponentialIntegral) {
  // E[log2(1 + g H)] for H ~ Exp(1) is e^{1/g} E1(1/g) / ln 2.
  const auto sc = from_db_domain(single_cell(1));
  for (double r0 : {80.0, 200.0, 370.0}) {
    const double g = sc.tn.bs_power * sc.tn.bs_gain * std::pow(r0, -3.0) / sc.chan.noise_power;
    const double expect = std::exp(1.0 / g) * boost::math::expint(1, 1.0 / g) / std::log(2.0);
    EXPECT_NEAR(conditional_rate(sc, r0).value, expect, 1e-8 * expect) << r0;
  }
}

TEST(Rate, SwappedIntegrationOrderAgrees) {
  for (const char* c : {"I", "baseline"}) {
    auto raw = urban_preset();
    raw.coexistence = c;
    const auto sc = from_db_domain(raw);
    const double a = rate(sc).value;
    const double b = rate_from_coverage(sc).value;
    EXPECT_NEAR(a, b, 2e-7 * a) << c;
  }
}

TEST(Rate, NtnInterferenceLowersRate) {
  auto raw = rural_preset();
  raw.coexistence = "baseline";
  const double base = rate(from_db_domain(raw)).value;
  raw.coexistence = "I";
  const double dl = rate(from_db_domain(raw)).value;
  EXPECT_LT(dl, base);
  EXPECT_GT(dl, 0.0);
}
