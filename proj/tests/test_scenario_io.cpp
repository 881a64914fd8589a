#include <string>

#include <gtest/gtest.h>

#include "coexist/scenario_io.hpp"

using namespace coexist;

TEST(ScenarioIo, ShippedDefaultIsUrbanCaseI) {
  const auto raw = io::load_scenario(std::string(COEXIST_SCENARIO_DIR) + "/default.json");
  const auto sc = from_db_domain(raw);
  const auto ref = from_db_domain(urban_preset());
  EXPECT_EQ(sc.coexistence, CoexistenceCase::CaseI_NtnDl);
  EXPECT_DOUBLE_EQ(sc.tn.cluster_radius, ref.tn.cluster_radius);
  EXPECT_DOUBLE_EQ(sc.tn.bs_power, ref.tn.bs_power);
  EXPECT_DOUBLE_EQ(sc.ntn.sat_gain, ref.ntn.sat_gain);
  EXPECT_DOUBLE_EQ(sc.ntn.altitude, 600e3);
  EXPECT_DOUBLE_EQ(sc.chan.noise_power, ref.chan.noise_power);
  EXPECT_EQ(sc.chan.ntn_interf_fading, FadingModel::nakagami(101));
}

TEST(ScenarioIo, ShippedRuralPreset) {
  const auto sc = from_db_domain(io::load_scenario(std::string(COEXIST_SCENARIO_DIR) + "/rural.json"));
  EXPECT_DOUBLE_EQ(sc.tn.cluster_radius, 18750.0);
}

TEST(ScenarioIo, JsonRoundTrip) {
  auto raw = rural_preset();
  raw.coexistence = "II";
  raw.load = 0.25;
  raw.isolation_km = 15.0;
  raw.serving_m = 2;
  const auto back = io::from_json(io::to_json(raw));
  EXPECT_EQ(io::to_json(back), io::to_json(raw));
  EXPECT_EQ(back.isolation_km, 15.0);
  EXPECT_FALSE(back.outer_radius_km.has_value());
}

TEST(ScenarioIo, UnknownKeyIsRejected) {
  EXPECT_THROW(io::from_json(nlohmann::json{{"altitude", 600}}), DomainError);
  EXPECT_THROW(io::from_json(nlohmann::json{{"preset", "suburban"}}), DomainError);
  EXPECT_THROW(io::from_json(nlohmann::json::array()), DomainError);
}

TEST(ScenarioIo, WrongTypesAreRejected) {
  EXPECT_THROW(io::from_json(nlohmann::json{{"num_bs", 19.5}}), DomainError);
  EXPECT_THROW(io::from_json(nlohmann::json{{"altitude_km", "high"}}), DomainError);
}

TEST(ScenarioIo, Overrides) {
  auto raw = urban_preset();
  raw = io::apply_override(raw, "altitude_km=1200");
  raw = io::apply_override(raw, "coexistence=II");
  raw = io::apply_override(raw, "num_ntn_ues=1");
  raw = io::apply_override(raw, "side_lobe_interferers=true");
  raw = io::apply_override(raw, "cluster_radius_km=2");
  EXPECT_EQ(raw.altitude_km, 1200.0);
  EXPECT_EQ(raw.coexistence, "II");
  EXPECT_EQ(raw.num_ntn_ues, 1);
  EXPECT_TRUE(raw.side_lobe_interferers);
  EXPECT_EQ(raw.cluster_radius_km, 2.0);
  raw = io::apply_override(raw, "cluster_radius_km=null");
  EXPECT_FALSE(raw.cluster_radius_km.has_value());
  EXPECT_THROW(io::apply_override(raw, "no_such_key=1"), DomainError);
  EXPECT_THROW(io::apply_override(raw, "altitude_km"), DomainError);
  EXPECT_THROW(io::apply_override(raw, "=3"), DomainError);
}

TEST(ScenarioIo, MissingFile) {
  EXPECT_THROW(io::load_scenario("/nonexistent/scenario.json"), DomainError);
}
