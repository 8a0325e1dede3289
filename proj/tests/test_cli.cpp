#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "nlbc/scenario.hpp"

using namespace nlbc;
namespace fs = std::filesystem;

namespace {

const char* kMinimal = R"({
  "system": "iee",
  "grid": {"nodes": [11, 11]},
  "boundaries": {
    "west": {"preset": "iee-dirichlet-inflow"}, "south": {"preset": "iee-dirichlet-inflow"},
    "east": {"preset": "iee-pressure-outflow"}, "north": {"preset": "iee-pressure-outflow"}
  }
})";

nlohmann::json minimal() { return nlohmann::json::parse(kMinimal); }

std::string config_error_path(const nlohmann::json& j) {
  try {
    parse_config(j.dump());
  } catch (const ConfigError& e) {
    return e.path();
  }
  return "";
}

RunConfig load(const std::string& name) {
  std::ifstream in(fs::path(NLBC_SCENARIO_DIR) / name);
  std::stringstream ss;
  ss << in.rdbuf();
  RunConfig c = parse_config(ss.str());
  c.output_dir = (fs::temp_directory_path() / "nlbc-test-out").string();
  return c;
}

}  // namespace

TEST(Config, MinimalIsValid) {
  const RunConfig c = parse_config(kMinimal);
  EXPECT_EQ(c.system, System::IEE);
  EXPECT_EQ(c.order, 2);
  EXPECT_EQ(c.faces.size(), 4u);
}

TEST(Config, ErrorsNameTheOffendingKey) {
  auto j = minimal();
  j["order"] = 3;
  EXPECT_EQ(config_error_path(j), "order");
  try {
    parse_config(j.dump());
  } catch (const ConfigError& e) {
    EXPECT_NE(std::string(e.what()).find("unsupported order"), std::string::npos);
  }

  j = minimal();
  j["system"] = "cee";
  j["parameters"] = {{"gamma", 1.0}};
  EXPECT_EQ(config_error_path(j), "parameters.gamma");

  j = minimal();
  j["boundaries"].erase("north");
  EXPECT_EQ(config_error_path(j), "boundaries.north");

  j = minimal();
  j["boundaries"]["west"] = {{"preset", "swe-free-outflow"}};
  EXPECT_EQ(config_error_path(j), "boundaries.west");

  j = minimal();
  j["bogus"] = 1;
  EXPECT_EQ(config_error_path(j), "bogus");

  j = minimal();
  j["grid"]["nodes"] = {4, 4};
  j["order"] = 6;
  EXPECT_EQ(config_error_path(j), "grid.nodes");

  EXPECT_EQ(config_error_path(nlohmann::json("not an object")), "(root)");
}

TEST(Config, ExplicitRegimes) {
  auto j = minimal();
  j["boundaries"]["east"] = {{"variant", "iee-char"},
                             {"regimes", {{{"minus", {2}}, {"R", {{0.0, 0.0}}}, {"S", {{1.0}}}}}},
                             {"data", {{"kind", "constant"}, {"value", {0.3}}}}};
  const RunConfig c = parse_config(j.dump());
  const BoundarySpec b = boundary_from_config(c, FaceId::East, c.faces.at(FaceId::East));
  EXPECT_EQ(b.regimes.count(4u), 1u);
  EXPECT_EQ(b.data.kind, BoundaryData::Kind::Constant);

  j["boundaries"]["east"]["regimes"][0]["R"] = {{0.0}};
  EXPECT_EQ(config_error_path(j), "boundaries.east.regimes[0].R");
}

TEST(Scenario, ReferenceStateInPrimitiveVariables) {
  auto j = minimal();
  j["system"] = "cee";
  j["boundaries"] = {{"west", {{"preset", "cee-free-outflow"}}}, {"east", {{"preset", "cee-free-outflow"}}},
                     {"south", {{"preset", "cee-free-outflow"}}}, {"north", {{"preset", "cee-free-outflow"}}}};
  j["initial"] = {{"density", 4.0}, {"pressure", 9.0}, {"velocity", {0.5, -0.25}}};
  const RunConfig c = parse_config(j.dump());
  const PVec u = reference_state(c, 0.3, 0.3);
  EXPECT_NEAR(u(0), 2.0, 1e-15);
  EXPECT_NEAR(u(1), 1.0, 1e-15);
  EXPECT_NEAR(u(2), -0.5, 1e-15);
  EXPECT_NEAR(u(3), 3.0, 1e-15);
}

TEST(Scenario, ZeroEndTimeWritesHeaderOnly) {
  const RunConfig c = load("iee-initial-only.json");
  const ScenarioOutcome o = run_scenario(c);
  EXPECT_EQ(o.exit_code, exit_code::pass);
  std::ifstream csv(o.csv_path);
  std::string line;
  int lines = 0;
  while (std::getline(csv, line)) ++lines;
  EXPECT_EQ(lines, 1);
  std::ifstream js(o.json_path);
  const auto summary = nlohmann::json::parse(js);
  EXPECT_EQ(summary["exit_code"], 0);
  EXPECT_TRUE(summary["abort"].is_null());
}

TEST(Scenario, HomogeneousCeeInflowPasses) {
  const ScenarioOutcome o = run_scenario(load("cee-inflow-homogeneous.json"), false);
  EXPECT_EQ(o.exit_code, exit_code::pass) << (o.report.abort_message ? *o.report.abort_message : "");
  EXPECT_EQ(o.mode, BoundMode::Homogeneous);
}

TEST(Scenario, ViolatingPresetExitsTwo) {
  const ScenarioOutcome o = run_scenario(load("cee-converging-dirichlet.json"), false);
  EXPECT_EQ(o.exit_code, exit_code::bound_violation);
  EXPECT_GT(o.verdict.max_violation, 0.0);
}

TEST(Scenario, AdmissibleCounterpartPasses) {
  const ScenarioOutcome o = run_scenario(load("cee-converging-characteristic.json"), false);
  EXPECT_EQ(o.exit_code, exit_code::pass);
  EXPECT_EQ(o.mode, BoundMode::Inhomogeneous);
  EXPECT_LT(o.max_identity_residual, 1e-11);
}

TEST(Scenario, UnwritableOutputIsIoError) {
  RunConfig c = load("iee-initial-only.json");
  const fs::path blocker = fs::temp_directory_path() / "nlbc-test-blocker";
  std::ofstream(blocker) << "x";
  c.output_dir = (blocker / "sub").string();
  EXPECT_EQ(run_scenario(c).exit_code, exit_code::io_error);
  fs::remove(blocker);
}
