#include <cmath>

#include <gtest/gtest.h>

#include "coexist/config.hpp"
#include "coexist/units.hpp"

using namespace coexist;

TEST(Units, DbRoundTrip) {
  for (double db : {-130.0, -13.0, 0.0, 3.0, 17.0, 30.0, 46.0}) {
    EXPECT_NEAR(units::linear_to_db(units::db_to_linear(db)), db, 1e-12);
  }
  EXPECT_NEAR(units::db_to_linear(30.0), 1000.0, 1e-10);
  EXPECT_NEAR(units::dbm_to_watts(46.0), 39.810717055349734, 1e-12);
  EXPECT_NEAR(units::dbm_to_watts(23.010299956639813), 0.2, 1e-14);
  EXPECT_NEAR(units::watts_to_dbm(1.0), 30.0, 1e-12);
}

TEST(Config, KtbNoise) {
  EXPECT_NEAR(default_noise_power(20e6, 0.0), 8.008e-14, 5e-18);
  EXPECT_NEAR(units::watts_to_dbm(default_noise_power(20e6, 0.0)), -100.97, 6e-3);
  EXPECT_NEAR(default_noise_power(1.0, 0.0), 4.004e-21, 1e-24);
  EXPECT_NEAR(default_noise_power(20e6, 7.0), 4.013e-13, 1e-16);
  EXPECT_THROW(default_noise_power(0.0, 7.0), DomainError);
  EXPECT_THROW(default_noise_power(-1.0, 7.0), DomainError);
}

TEST(Config, ClusterRadiusForIsd) {
  EXPECT_DOUBLE_EQ(cluster_radius_for_isd(750.0, 19), 1875.0);
  EXPECT_DOUBLE_EQ(cluster_radius_for_isd(750.0, 1), 375.0);
  EXPECT_DOUBLE_EQ(cluster_radius_for_isd(750.0, 7), 1125.0);
  EXPECT_DOUBLE_EQ(cluster_radius_for_isd(750.0, 8), 1875.0);
}

TEST(Config, UrbanDefaults) {
  const auto sc = from_db_domain(urban_preset());
  EXPECT_DOUBLE_EQ(sc.tn.cluster_radius, 1875.0);
  EXPECT_DOUBLE_EQ(sc.tn.ue_offset, 937.5);
  EXPECT_EQ(sc.tn.num_bs, 19);
  EXPECT_NEAR(sc.tn.bs_gain, 50.118723362727, 1e-9);
  EXPECT_NEAR(sc.ntn.sat_gain, 1000.0, 1e-9);
  EXPECT_DOUBLE_EQ(sc.ntn.altitude, 600e3);
  EXPECT_DOUBLE_EQ(sc.ntn.isolation, 750.0);
  EXPECT_DOUBLE_EQ(sc.ntn.outer_radius, 1875.0 + 750.0 + 25e3);
  EXPECT_EQ(sc.chan.serving_m, 1);
  EXPECT_EQ(sc.chan.tn_interf_fading, FadingModel::nakagami(1));
  EXPECT_EQ(sc.chan.ntn_interf_fading, FadingModel::nakagami(101));
  EXPECT_NEAR(sc.chan.noise_power, 4.013e-13, 1e-16);
  EXPECT_EQ(sc.coexistence, CoexistenceCase::CaseI_NtnDl);
}

TEST(Config, RuralPresetScalesCluster) {
  const auto sc = from_db_domain(rural_preset());
  EXPECT_DOUBLE_EQ(sc.tn.cluster_radius, 18750.0);
  EXPECT_DOUBLE_EQ(sc.ntn.isolation, 7500.0);
}

TEST(Config, EffectiveGains) {
  auto raw = urban_preset();
  raw.sat_gain_dbi = 30.0;
  raw.ue_gain_dbi = 0.0;
  raw.bs_gain_dbi = 0.0;
  auto sc = from_db_domain(raw);
  auto g = effective_gains(sc);
  EXPECT_NEAR(g.ntn, 1000.0, 1e-9);
  EXPECT_NEAR(g.tn, 1.0, 1e-12);

  raw.ue_gain_dbi = 3.0;
  raw.bs_gain_dbi = 17.0;
  sc = from_db_domain(raw);
  g = effective_gains(sc);
  EXPECT_NEAR(g.tn, units::db_to_linear(20.0), 1e-9);
  EXPECT_NEAR(g.ntn, units::db_to_linear(33.0), 1e-9);

  raw.coexistence = "II";
  sc = from_db_domain(raw);
  EXPECT_NEAR(effective_gains(sc).ntn, units::db_to_linear(4.0), 1e-12);
}

TEST(Config, SideLobeOnlyOnInterferers) {
  auto raw = urban_preset();
  raw.side_lobe_interferers = true;
  const auto sc = from_db_domain(raw);
  const auto g = effective_gains(sc);
  const auto gi = interferer_gains(sc);
  EXPECT_NEAR(gi.tn / g.tn, units::db_to_linear(-13.0), 1e-15);
  EXPECT_NEAR(gi.ntn / g.ntn, units::db_to_linear(-13.0), 1e-15);
}

TEST(Config, RoundTripThroughDbDomain) {
  for (auto raw : {urban_preset(), rural_preset()}) {
    raw.coexistence = "II";
    raw.load = 0.25;
    raw.altitude_km = 1200.0;
    const auto sc = from_db_domain(raw);
    const auto back = to_db_domain(sc);
    auto rel = [](double a, double b) { return std::abs(a - b) / std::max(1.0, std::abs(b)); };
    EXPECT_LT(rel(back.bs_power_dbm, raw.bs_power_dbm), 1e-9);
    EXPECT_LT(rel(back.bs_gain_dbi, raw.bs_gain_dbi), 1e-9);
    EXPECT_LT(rel(back.sat_power_dbm, raw.sat_power_dbm), 1e-9);
    EXPECT_LT(rel(back.sat_gain_dbi, raw.sat_gain_dbi), 1e-9);
    EXPECT_LT(rel(back.ntn_ue_power_dbm, raw.ntn_ue_power_dbm), 1e-9);
    EXPECT_LT(rel(back.ntn_ue_gain_dbi, raw.ntn_ue_gain_dbi), 1e-9);
    EXPECT_LT(rel(back.side_lobe_db, raw.side_lobe_db), 1e-9);
    EXPECT_LT(rel(back.altitude_km, raw.altitude_km), 1e-9);
    EXPECT_LT(rel(back.isd_km, raw.isd_km), 1e-9);
    EXPECT_EQ(back.coexistence, "II");

    // and the explicit form maps to the same scenario
    const auto again = from_db_domain(back);
    EXPECT_NEAR(again.chan.noise_power / sc.chan.noise_power, 1.0, 1e-12);
    EXPECT_NEAR(again.ntn.outer_radius / sc.ntn.outer_radius, 1.0, 1e-12);
    EXPECT_NEAR(again.tn.cluster_radius / sc.tn.cluster_radius, 1.0, 1e-12);
    EXPECT_EQ(again.chan.serving_m, sc.chan.serving_m);
  }
}

TEST(Config, RejectsBadGeometry) {
  auto raw = urban_preset();
  raw.outer_radius_km = 1.875 + 0.75;  // r_TN + d_iso == r_NTN
  EXPECT_THROW(from_db_domain(raw), GeometryError);
  raw.outer_radius_km = 1.875 + 0.75 + 1e-6;
  EXPECT_NO_THROW(from_db_domain(raw));
  raw.outer_radius_km = 1.0;
  EXPECT_THROW(from_db_domain(raw), GeometryError);
}

TEST(Config, RejectsOutOfDomainValues) {
  auto bad = [](auto mutate) {
    auto raw = urban_preset();
    mutate(raw);
    return raw;
  };
  EXPECT_THROW(from_db_domain(bad([](RawScenario& r) { r.num_bs = 0; })), DomainError);
  EXPECT_THROW(from_db_domain(bad([](RawScenario& r) { r.load = 1.5; })), DomainError);
  EXPECT_THROW(from_db_domain(bad([](RawScenario& r) { r.load = -0.1; })), DomainError);
  EXPECT_THROW(from_db_domain(bad([](RawScenario& r) { r.pathloss_exp_tn = 2.0; })), DomainError);
  EXPECT_THROW(from_db_domain(bad([](RawScenario& r) { r.ue_offset_frac = 1.1; })), DomainError);
  EXPECT_THROW(from_db_domain(bad([](RawScenario& r) { r.altitude_km = 0.0; })), DomainError);
  EXPECT_THROW(from_db_domain(bad([](RawScenario& r) { r.num_ntn_ues = -1; })), DomainError);
  EXPECT_THROW(from_db_domain(bad([](RawScenario& r) { r.serving_m = 0; })), DomainError);
  EXPECT_THROW(from_db_domain(bad([](RawScenario& r) { r.rician_k_ntn = -1.0; })), DomainError);
  EXPECT_THROW(from_db_domain(bad([](RawScenario& r) { r.bs_power_dbm = NAN; })), DomainError);
  EXPECT_THROW(from_db_domain(bad([](RawScenario& r) { r.coexistence = "III"; })), DomainError);
  EXPECT_THROW(from_db_domain(bad([](RawScenario& r) { r.satellite_model = "walker"; })), DomainError);
  EXPECT_THROW(from_db_domain(bad([](RawScenario& r) { r.isolation_km = -1.0; })), DomainError);
  // legal degenerate cases
  EXPECT_NO_THROW(from_db_domain(bad([](RawScenario& r) { r.num_bs = 1; })));
  EXPECT_NO_THROW(from_db_domain(bad([](RawScenario& r) { r.num_ntn_ues = 0; })));
  EXPECT_NO_THROW(from_db_domain(bad([](RawScenario& r) { r.load = 0.0; })));
  EXPECT_NO_THROW(from_db_domain(bad([](RawScenario& r) { r.ue_offset_frac = 0.0; })));
  EXPECT_NO_THROW(from_db_domain(bad([](RawScenario& r) { r.ue_offset_frac = 1.0; })));
}

TEST(Config, ParseCase) {
  EXPECT_EQ(parse_case("I"), CoexistenceCase::CaseI_NtnDl);
  EXPECT_EQ(parse_case("II"), CoexistenceCase::CaseII_NtnUl);
  EXPECT_EQ(parse_case("baseline"), CoexistenceCase::NoNtnBaseline);
  for (auto c : {CoexistenceCase::CaseI_NtnDl, CoexistenceCase::CaseII_NtnUl, CoexistenceCase::NoNtnBaseline})
    EXPECT_EQ(parse_case(to_string(c)), c);
}

TEST(Config, MatchedNakagamiOrders) {
  auto raw = urban_preset();
  raw.rician_k_tn = 3.0;  // (4^2)/7 = 2.29 -> 2
  const auto sc = from_db_domain(raw);
  EXPECT_EQ(sc.chan.serving_m, 2);
  EXPECT_EQ(sc.chan.tn_interf_fading.m, 2);
}
