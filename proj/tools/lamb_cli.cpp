// lamb_cli: scenario runner for the Lamb system pipelines.
#include <algorithm>
#include <atomic>
#include <cstdio>
#include <thread>
#include <utility>
#include <vector>

#include "CLI11.hpp"
#include "lamb/error.hpp"
#include "lamb/scenario.hpp"

namespace fs = std::filesystem;

int main(int argc, char** argv) {
  CLI::App app{"Lamb system: incoming trajectories, forward scattering and counterexamples"};
  app.require_subcommand(1, 1);

  std::vector<std::string> configs;
  std::string out_dir = "out";
  lamb::Overrides ov;
  double grid_step = 0.0, t_max = 0.0, tol = 0.0, y0 = 0.0;
  std::string kind;
  unsigned jobs = 1;

  std::vector<CLI::App*> subs;
  const std::pair<const char*, const char*> commands[] = {
      {"forward", "run initial data forward and extract the scattering state"},
      {"construct", "build the incoming trajectory and initial data for a prescribed state"},
      {"roundtrip", "construct, then run forward and compare"},
      {"counterexample", "nonhyperbolic counterexamples and the hyperbolic control"},
  };
  for (const auto& [name, help] : commands) {
    CLI::App* sub = app.add_subcommand(name, help);
    sub->add_option("-c,--config", configs, "scenario JSON file(s)")->check(CLI::ExistingFile);
    sub->add_option("--grid-step", grid_step, "grid step h")->check(CLI::PositiveNumber);
    sub->add_option("--t-max", t_max, "final time T_max")->check(CLI::PositiveNumber);
    sub->add_option("--tol", tol, "Picard tolerance")->check(CLI::PositiveNumber);
    sub->add_option("--out-dir", out_dir, "output directory");
    sub->add_option("--jobs", jobs, "scenarios run concurrently")->check(CLI::PositiveNumber);
    if (std::string(name) == "counterexample") {
      sub->add_option("--kind", kind, "flat | quadratic | hyperbolic-control");
      sub->add_option("--y0", y0, "initial value");
    } else {
      sub->get_option("--config")->required();
    }
    subs.push_back(sub);
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  std::string cmd_name;
  for (CLI::App* sub : subs) {
    if (sub->parsed()) {
      cmd_name = sub->get_name();
      if (sub->count("--grid-step")) ov.grid_step = grid_step;
      if (sub->count("--t-max")) ov.t_max = t_max;
      if (sub->count("--tol")) ov.tol = tol;
      if (auto* o = sub->get_option_no_throw("--kind"); o && o->count()) ov.kind = kind;
      if (auto* o = sub->get_option_no_throw("--y0"); o && o->count()) ov.y0 = y0;
    }
  }
  const lamb::Command cmd = lamb::parse_command(cmd_name);

  // A counterexample needs no config file.
  if (configs.empty()) configs.emplace_back();

  std::vector<lamb::Scenario> scenarios(configs.size());
  std::vector<fs::path> outs(configs.size());
  for (std::size_t i = 0; i < configs.size(); ++i) {
    try {
      if (!configs[i].empty()) scenarios[i] = lamb::load_scenario(configs[i]);
      lamb::apply_overrides(scenarios[i], ov);
    } catch (const lamb::Error& e) {
      std::fprintf(stderr, "%s\n", e.what());
      return 2;
    }
    outs[i] = configs.size() == 1 ? fs::path(out_dir) : fs::path(out_dir) / fs::path(configs[i]).stem();
  }

  std::vector<int> codes(configs.size(), 0);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < configs.size(); i = next++) {
      const lamb::RunResult r = lamb::run_scenario(cmd, scenarios[i], outs[i]);
      codes[i] = r.exit_code;
    }
  };
  const unsigned n = std::max(1u, std::min<unsigned>(jobs, static_cast<unsigned>(configs.size())));
  std::vector<std::thread> pool;
  for (unsigned t = 1; t < n; ++t) pool.emplace_back(worker);
  worker();
  for (std::thread& t : pool) t.join();

  int rc = 0;
  for (std::size_t i = 0; i < configs.size(); ++i) {
    std::printf("%s: %s\n", outs[i].string().c_str(), codes[i] == 0 ? "ok" : "error");
    rc = std::max(rc, codes[i]);
  }
  return rc;
}
