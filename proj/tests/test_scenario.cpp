#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>

#include "lamb/error.hpp"
#include "lamb/scenario.hpp"

using namespace lamb;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("lamb_scenario_" + name);
  fs::remove_all(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), {}};
}

int run_cli(const std::string& args) {
  const std::string cmd = std::string(LAMB_CLI) + " " + args + " > /dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string scenario(const std::string& name) { return std::string(LAMB_SCENARIOS) + "/" + name + ".json"; }

ErrorCode parse_error(const std::string& text) {
  try {
    (void)parse_scenario(Json::parse(text));
  } catch (const Error& e) {
    return e.code();
  }
  return ErrorCode::GridError;
}

}  // namespace

TEST(Scenario, ParsesTheShippedConfigs) {
  const Scenario s = load_scenario(scenario("double_well_saddle"));
  EXPECT_EQ(s.model_name, "double-well-2d");
  EXPECT_EQ(s.dim, 2u);
  EXPECT_EQ(s.psi0.size(), 1u);
  EXPECT_TRUE(s.balance);
  EXPECT_EQ(s.t_max, 40.0);
  EXPECT_EQ(s.window(), 41.0);
}

TEST(Scenario, MalformedConfigsAreConfigErrors) {
  EXPECT_EQ(parse_error("[]"), ErrorCode::ConfigError);
  EXPECT_EQ(parse_error(R"({"model": {"name": "nope"}})"), ErrorCode::ConfigError);
  EXPECT_EQ(parse_error(R"({"model": {"name": "linear", "n": 2}, "s_plus": [0]})"), ErrorCode::ConfigError);
  EXPECT_EQ(parse_error(R"({"psi": {"psi0": [{"shape": "box"}]}})"), ErrorCode::ConfigError);
  EXPECT_EQ(parse_error(R"({"psi": {"psi0": [{"shape": "blob", "amplitude": 1}]}})"), ErrorCode::ConfigError);
  EXPECT_EQ(parse_error(R"({"grid": {"h": -1}})"), ErrorCode::ConfigError);
  EXPECT_EQ(parse_error(R"({"grid": {"h": "small"}})"), ErrorCode::ConfigError);
}

TEST(Scenario, OverridesReplaceConfigFields) {
  Scenario s = load_scenario(scenario("linear_box"));
  Overrides o;
  o.grid_step = 2e-3;
  o.t_max = 10.0;
  o.tol = 1e-12;
  apply_overrides(s, o);
  EXPECT_EQ(s.h, 2e-3);
  EXPECT_EQ(s.t_max, 10.0);
  EXPECT_EQ(s.tol.picard, 1e-12);
}

TEST(Scenario, RoundtripLinearBoxSummary) {
  const fs::path out = scratch("linear");
  const RunResult r = run_scenario(Command::Roundtrip, load_scenario(scenario("linear_box")), out);
  ASSERT_EQ(r.exit_code, 0) << r.summary.dump(2);
  EXPECT_TRUE(r.summary["passed"].get<bool>());
  EXPECT_NEAR(r.summary["metrics"]["y0"][0].get<double>(), 0.78694, 1e-5);
  EXPECT_LE(r.summary["metrics"]["roundtrip_energy_error"].get<double>(), 1e-3);
  for (const char* f : {"incoming.csv", "report.json", "forward.csv", "profiles.csv", "scattering.json",
                        "initial_u0.csv", "initial_v0.csv", "initial_limits.json", "psi_plus_psi0.csv", "summary.json"}) {
    EXPECT_TRUE(fs::exists(out / f)) << f;
  }
}

TEST(Scenario, FlatCounterexampleSummary) {
  Scenario s;
  s.counterexample_kind = "flat";
  s.y0 = -0.4;
  const RunResult r = run_scenario(Command::Counterexample, s, scratch("flat"));
  ASSERT_EQ(r.exit_code, 0);
  const Json& m = r.summary["metrics"];
  EXPECT_NEAR(m["log_fit_constant"].get<double>(), -0.4, 1e-9);
  EXPECT_LE(m["log_fit_deviation"].get<double>(), 1e-9);
  EXPECT_NEAR(m["exit_time"].get<double>(), 3.0552, 1e-4);
}

TEST(Scenario, GridStepHalvingShrinksResiduals) {
  Scenario s = load_scenario(scenario("cubic_forward"));
  s.t_max = 10.0;
  s.h = 2e-3;
  const RunResult coarse = run_scenario(Command::Forward, s, scratch("coarse"));
  s.h = 1e-3;
  const RunResult fine = run_scenario(Command::Forward, s, scratch("fine"));
  ASSERT_EQ(coarse.exit_code, 0);
  ASSERT_EQ(fine.exit_code, 0);
  const double a = coarse.summary["metrics"]["coupling_balance_sup"].get<double>();
  const double b = fine.summary["metrics"]["coupling_balance_sup"].get<double>();
  EXPECT_GE(a / b, 2.0);
}

TEST(Cli, ExitCodes) {
  EXPECT_EQ(run_cli("counterexample --kind flat --y0 -0.4 --out-dir " + scratch("cli_flat").string()), 0);
  const fs::path nh = scratch("cli_nh");
  EXPECT_EQ(run_cli("construct -c " + scenario("nonhyperbolic") + " --out-dir " + nh.string()), 1);
  const Json summary = Json::parse(slurp(nh / "summary.json"));
  EXPECT_EQ(summary["error_code"], "NotHyperbolic");
  EXPECT_EQ(summary["status"], "error");

  const fs::path bad = scratch("cli_bad");
  fs::create_directories(bad);
  std::ofstream(bad / "bad.json") << R"({"model": {"name": "nope"}})";
  EXPECT_EQ(run_cli("construct -c " + (bad / "bad.json").string() + " --out-dir " + bad.string()), 2);
  EXPECT_EQ(run_cli("frobnicate"), 2);
  EXPECT_EQ(run_cli("counterexample --kind cubic --out-dir " + bad.string()), 2);
}

TEST(Cli, ReportsAreByteIdentical) {
  const fs::path a = scratch("det_a"), b = scratch("det_b");
  const std::string args = "roundtrip -c " + scenario("double_well_saddle") + " --t-max 10";
  ASSERT_EQ(run_cli(args + " --out-dir " + a.string()), 0);
  ASSERT_EQ(run_cli(args + " --out-dir " + b.string()), 0);
  for (const char* f : {"summary.json", "report.json", "scattering.json", "forward.csv", "incoming.csv"}) {
    EXPECT_EQ(slurp(a / f), slurp(b / f)) << f;
  }
}

TEST(Cli, JobsRunSeveralScenarios) {
  const fs::path out = scratch("jobs");
  const std::string args = "roundtrip -c " + scenario("linear_box") + " -c " + scenario("double_well_stable") +
                           " --t-max 10 --jobs 2 --out-dir " + out.string();
  ASSERT_EQ(run_cli(args), 0);
  EXPECT_TRUE(fs::exists(out / "linear_box" / "summary.json"));
  EXPECT_TRUE(fs::exists(out / "double_well_stable" / "summary.json"));
}
