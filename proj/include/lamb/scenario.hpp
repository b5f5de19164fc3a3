#pragma once
// Scenario configs and the runners behind lamb_cli.
//
// Config (JSON):
//   {
//     "model":   {"name": "linear", "params": [1], "n": 1},
//     "s_plus":  [0],
//     "psi":     {"psi0": [primitive...], "psi1": [primitive...], "balance": false},
//     "initial": {"u0": [primitive...], "v0": [primitive...]},      forward only
//     "grid":    {"h": 1e-3, "T_max": 40, "L0": 2},
//     "tolerances": {...},
//     "counterexample": {"kind": "flat", "y0": -0.4}
//   }
// primitive: {"shape": "box", "center": 0, "width": 1, "amplitude": [..] or number}

#include <filesystem>
#include <optional>
#include <string>

#include "lamb/force.hpp"
#include "lamb/io.hpp"
#include "lamb/profiles.hpp"

namespace lamb {

struct Tolerances {
  double picard = 1e-10;          ///< Picard stopping tolerance
  double residual = 1e-4;         ///< inverse-equation residual accepted by reconstruction
  double roundtrip = 1e-3;        ///< energy-norm error of Psi after a roundtrip
  double s_plus = 1e-4;           ///< error of the recovered stationary state
  double identity = 1e-3;         ///< identity residual of an extracted state
  double energy_slack = 1e-4;     ///< a-priori estimate violation
  double trace = 1e-4;            ///< S(t) against the free field at x = 0
};

struct Scenario {
  std::string model_name = "linear";
  std::vector<double> model_params;
  std::size_t dim = 1;
  Vec s_plus;
  Composite psi0;
  Composite psi1;
  bool balance = false;
  Composite u0;
  Composite v0;
  double h = 1e-3;
  double t_max = 40.0;
  double L0 = 1.0;
  Tolerances tol;
  std::string counterexample_kind = "flat";
  double y0 = -0.4;

  ForceModel model() const;
  double window() const { return t_max + L0; }
};

/// Throws ConfigError on malformed input.
Scenario parse_scenario(const Json& j);
Scenario load_scenario(const std::filesystem::path& path);

struct Overrides {
  std::optional<double> grid_step;
  std::optional<double> t_max;
  std::optional<double> tol;  ///< Picard tolerance
  std::optional<std::string> kind;
  std::optional<double> y0;
};

void apply_overrides(Scenario& s, const Overrides& o);

enum class Command { Forward, Construct, Roundtrip, Counterexample };

Command parse_command(const std::string& name);
std::string command_name(Command c);

struct RunResult {
  int exit_code = 0;
  Json summary;
};

/// Runs one scenario, writes its CSV/JSON outputs and summary.json into
/// out_dir. Solver errors give exit code 1 and are recorded in the summary.
RunResult run_scenario(Command cmd, const Scenario& s, const std::filesystem::path& out_dir);

}  // namespace lamb
