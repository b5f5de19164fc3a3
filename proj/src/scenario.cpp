#include "lamb/scenario.hpp"

#include <algorithm>
#include <cmath>

#include "lamb/error.hpp"
#include "lamb/incoming.hpp"
#include "lamb/scattering.hpp"

namespace lamb {

namespace fs = std::filesystem;

namespace {

[[noreturn]] void config_error(const std::string& msg) { throw Error(ErrorCode::ConfigError, msg); }

double number_or(const Json& j, const char* key, double fallback) {
  if (!j.contains(key)) return fallback;
  if (!j[key].is_number()) config_error(std::string("'") + key + "' must be a number");
  return j[key].get<double>();
}

Vec amplitude_of(const Json& j, std::size_t dim) {
  if (j.is_number()) return Vec::Constant(static_cast<Eigen::Index>(dim), j.get<double>());
  Vec v = vec_from_json(j);
  if (static_cast<std::size_t>(v.size()) != dim) config_error("amplitude has the wrong number of components");
  return v;
}

Composite composite_of(const Json& j, std::size_t dim) {
  Composite c;
  if (j.is_null()) return c;
  if (!j.is_array()) config_error("primitive list must be an array");
  for (const Json& p : j) {
    if (!p.is_object() || !p.contains("shape") || !p["shape"].is_string()) config_error("primitive needs a shape");
    if (!p.contains("amplitude")) config_error("primitive needs an amplitude");
    Primitive prim;
    prim.shape = parse_shape(p["shape"].get<std::string>());
    prim.center = number_or(p, "center", 0.0);
    prim.width = number_or(p, "width", 1.0);
    if (!(prim.width > 0.0)) config_error("primitive width must be positive");
    prim.amplitude = amplitude_of(p["amplitude"], dim);
    c.push_back(std::move(prim));
  }
  return c;
}

Json field(const Json& j, const char* key) { return j.contains(key) ? j[key] : Json(); }

Json tolerances_json(const Tolerances& t) {
  Json j;
  j["picard"] = t.picard;
  j["residual"] = t.residual;
  j["roundtrip"] = t.roundtrip;
  j["s_plus"] = t.s_plus;
  j["identity"] = t.identity;
  j["energy_slack"] = t.energy_slack;
  j["trace"] = t.trace;
  return j;
}

Json optional_json(const std::optional<double>& v) { return v ? Json(*v) : Json(); }

// Cell values moved to nodes: mean of the neighbours, the end cells at the ends.
GridFunction cells_to_nodes(const GridFunction& c) {
  GridFunction out(c.t0(), c.h(), c.size() + 1, c.dim(), Centering::Node);
  for (std::size_t i = 0; i <= c.size(); ++i) {
    if (i == 0) out.set(i, c.value(0));
    else if (i == c.size()) out.set(i, c.value(i - 1));
    else out.set(i, 0.5 * (c.value(i - 1) + c.value(i)));
  }
  return out;
}

// Largest gap between S(t) and the free field at x = 0 over `samples` times.
double trace_error(const AsymptoticState& psi, double t_max, std::size_t samples = 17) {
  const FreeTrace tr = build_S(psi, t_max);
  const std::size_t K = tr.S.size() - 1;
  const std::size_t stride = std::max<std::size_t>(1, K / (samples - 1));
  double worst = 0.0;
  for (std::size_t i = 0; i <= K; i += stride) {
    const EnergyState w = free_field(psi, tr.S.time(i));
    worst = std::max(worst, (w.u0_at_origin() - tr.S.value(i)).norm());
  }
  return worst;
}

struct Summary {
  Json metrics = Json::object();
  Json checks = Json::object();
  void check(const std::string& name, bool ok) { checks[name] = ok; }
};

void forward_part(const ForceModel& model, const Scenario& s, const EnergyState& state, const fs::path& out,
                  Summary& sum, const AsymptoticState* expected) {
  const ForwardRun run = forward_solve(model, state, s.t_max);
  const GridFunction w_nodes = cells_to_nodes(run.w_in);
  write_table(out / "forward.csv", "t", {{"y", &run.y.y()}, {"ydot", &run.y.ydot()}, {"w_in", &w_nodes}});
  write_table(out / "profiles.csv", "s", {{"f_plus_out", &run.f_plus_out}, {"f_minus_out", &run.f_minus_out}});
  const GridFunction& y = run.y.y();
  sum.metrics["y_T_max"] = to_json(y.value(y.size() - 1));
  sum.metrics["coupling_balance_sup"] = coupling_balance(run).sup_norm();

  const ScatteringData data = extract_scattering(run);
  const double identity = data.psi_plus.identity_residual().norm();
  Json sc;
  sc["s_plus"] = to_json(data.s_plus.s);
  sc["identity_residual"] = identity;
  sc["left_limit_mismatch"] = data.left_limit_mismatch;
  Json samples = Json::array();
  for (std::size_t i = 0; i < data.remainder_curve.size(); ++i) {
    Json r;
    r["t"] = data.remainder_curve.time(i);
    r["remainder"] = data.remainder_curve(i);
    samples.push_back(r);
  }
  sc["remainder"] = samples;
  write_json(out / "scattering.json", sc);
  write_asymptotic_state(out, "psi_plus", data.psi_plus);

  sum.metrics["extracted_s_plus"] = to_json(data.s_plus.s);
  sum.metrics["identity_residual"] = identity;
  sum.metrics["left_limit_mismatch"] = data.left_limit_mismatch;
  sum.metrics["remainder_final"] = data.remainder_curve(data.remainder_curve.size() - 1);
  const double trace = trace_error(data.psi_plus, s.t_max);
  sum.metrics["extracted_trace_error"] = trace;
  sum.check("identity", identity <= s.tol.identity);
  sum.check("extracted_trace", trace <= s.tol.trace);

  if (expected != nullptr) {
    const double s_err = (data.s_plus.s - s.s_plus).norm();
    const double psi_err = energy_distance(expected->as_energy_state(), data.psi_plus.as_energy_state());
    sum.metrics["s_plus_error"] = s_err;
    sum.metrics["roundtrip_energy_error"] = psi_err;
    sum.check("s_plus", s_err <= s.tol.s_plus);
    sum.check("roundtrip", psi_err <= s.tol.roundtrip);
  }
}

EnergyState construct_part(const ForceModel& model, const Scenario& s, const fs::path& out, Summary& sum) {
  const double L = s.window();
  const AsymptoticState psi = make_asymptotic_state(s.psi0, s.psi1, L, s.h, s.dim, s.balance);
  sum.metrics["psi_identity_residual"] = psi.identity_residual().norm();
  sum.metrics["psi_energy_norm"] = energy_norm(psi);
  const double trace = trace_error(psi, L);
  sum.metrics["trace_error"] = trace;
  sum.check("trace", trace <= s.tol.trace);

  IncomingOptions opts;
  opts.tail.tolerance = s.tol.picard;
  const IncomingSolution sol = construct_incoming(model, StationaryState{s.s_plus}, psi, L, opts);
  const Trajectory& tr = sol.trajectory;
  write_table(out / "incoming.csv", "t", {{"y", &tr.y()}, {"ydot", &tr.ydot()}});

  Json rep;
  rep["T"] = sol.T;
  rep["eps"] = sol.eps;
  rep["C"] = sol.C;
  rep["iterations"] = sol.picard_iterations;
  rep["residual_l2"] = sol.residual_l2;
  rep["terminal_gap"] = sol.terminal_gap;
  rep["energy_slack"] = optional_json(sol.energy_slack);
  rep["contraction_ratio"] = sol.contraction_ratio;
  rep["uniqueness_gap"] = optional_json(sol.uniqueness_gap);
  rep["tail_threshold"] = sol.tail_threshold;
  rep["retries"] = sol.retries;
  write_json(out / "report.json", rep);

  sum.metrics["y0"] = to_json(tr.y().value(0));
  sum.metrics["incoming"] = rep;
  if (sol.energy_slack) sum.check("energy_slack", *sol.energy_slack <= s.tol.energy_slack);
  sum.check("contraction", sol.contraction_ratio < 1.0);

  ReconstructOptions ro;
  ro.residual_tolerance = s.tol.residual;
  EnergyState state = reconstruct_initial(model, tr, psi, s.s_plus, ro);
  write_energy_state(out, "initial", state);
  sum.metrics["initial_energy_norm"] = energy_norm(state);
  return state;
}

void counterexample_part(const Scenario& s, const fs::path& out, Summary& sum) {
  const CounterexampleKind kind = parse_counterexample_kind(s.counterexample_kind);
  const CounterexampleReport rep = run_counterexample(kind, s.y0, s.t_max, s.h);
  write_table(out / "counterexample.csv", "t", {{"y", &rep.y}});
  sum.metrics["kind"] = counterexample_kind_name(kind);
  sum.metrics["y0"] = s.y0;
  sum.metrics["exit_time"] = optional_json(rep.exit_time);
  sum.metrics["log_fit_constant"] = rep.log_fit_constant;
  sum.metrics["log_fit_deviation"] = rep.log_fit_deviation;
  sum.metrics["log_fit_minimum"] = rep.log_fit_minimum;
  sum.metrics["sup_norm"] = rep.sup_norm;
  sum.metrics["tail_max"] = rep.tail_max;
  switch (kind) {
    case CounterexampleKind::Flat:
      sum.check("log_fit", rep.log_fit_deviation <= 1e-9 && std::fabs(rep.log_fit_constant - s.y0) <= 1e-9);
      sum.check("exit_time", rep.exit_time && std::fabs(*rep.exit_time - (std::exp(1.0 - s.y0) - 1.0)) <= 1e-6);
      break;
    case CounterexampleKind::Quadratic:
      sum.check("log_lower_bound", rep.log_fit_minimum >= s.y0 - 1e-12);
      break;
    case CounterexampleKind::HyperbolicControl:
      sum.check("bounded", std::isfinite(rep.sup_norm));
      sum.check("decays", rep.tail_max <= 3.0 / (1.0 + 0.9 * s.t_max));
      break;
  }
}

}  // namespace

ForceModel Scenario::model() const { return ForceModel::from_name(model_name, model_params, dim); }

Scenario parse_scenario(const Json& j) {
  if (!j.is_object()) config_error("config must be a JSON object");
  Scenario s;
  const Json model = field(j, "model");
  if (!model.is_null()) {
    if (!model.is_object() || !model.contains("name") || !model["name"].is_string()) config_error("model needs a name");
    s.model_name = model["name"].get<std::string>();
    if (model.contains("params")) {
      const Vec p = vec_from_json(model["params"]);
      s.model_params.assign(p.data(), p.data() + p.size());
    }
    if (model.contains("n")) {
      if (!model["n"].is_number_unsigned() || model["n"].get<std::size_t>() == 0) config_error("n must be a positive integer");
      s.dim = model["n"].get<std::size_t>();
    }
  }
  s.dim = s.model().dim();
  s.s_plus = j.contains("s_plus") ? vec_from_json(j["s_plus"]) : Vec::Zero(static_cast<Eigen::Index>(s.dim));
  if (static_cast<std::size_t>(s.s_plus.size()) != s.dim) config_error("s_plus has the wrong number of components");

  const Json psi = field(j, "psi");
  if (!psi.is_null()) {
    s.psi0 = composite_of(field(psi, "psi0"), s.dim);
    s.psi1 = composite_of(field(psi, "psi1"), s.dim);
    if (psi.contains("balance")) {
      if (!psi["balance"].is_boolean()) config_error("balance must be a boolean");
      s.balance = psi["balance"].get<bool>();
    }
  }
  const Json init = field(j, "initial");
  if (!init.is_null()) {
    s.u0 = composite_of(field(init, "u0"), s.dim);
    s.v0 = composite_of(field(init, "v0"), s.dim);
  }
  const Json grid = field(j, "grid");
  if (!grid.is_null()) {
    s.h = number_or(grid, "h", s.h);
    s.t_max = number_or(grid, "T_max", s.t_max);
    s.L0 = number_or(grid, "L0", s.L0);
  }
  const Json tol = field(j, "tolerances");
  if (!tol.is_null()) {
    s.tol.picard = number_or(tol, "picard", s.tol.picard);
    s.tol.residual = number_or(tol, "residual", s.tol.residual);
    s.tol.roundtrip = number_or(tol, "roundtrip", s.tol.roundtrip);
    s.tol.s_plus = number_or(tol, "s_plus", s.tol.s_plus);
    s.tol.identity = number_or(tol, "identity", s.tol.identity);
    s.tol.energy_slack = number_or(tol, "energy_slack", s.tol.energy_slack);
    s.tol.trace = number_or(tol, "trace", s.tol.trace);
  }
  const Json ce = field(j, "counterexample");
  if (!ce.is_null()) {
    if (ce.contains("kind")) {
      if (!ce["kind"].is_string()) config_error("counterexample kind must be a string");
      s.counterexample_kind = ce["kind"].get<std::string>();
    }
    s.y0 = number_or(ce, "y0", s.y0);
  }
  if (!(s.h > 0.0) || !(s.t_max > 0.0) || !(s.L0 >= 0.0)) config_error("grid needs h > 0, T_max > 0, L0 >= 0");
  return s;
}

Scenario load_scenario(const fs::path& path) { return parse_scenario(read_json(path)); }

void apply_overrides(Scenario& s, const Overrides& o) {
  if (o.grid_step) s.h = *o.grid_step;
  if (o.t_max) s.t_max = *o.t_max;
  if (o.tol) s.tol.picard = *o.tol;
  if (o.kind) s.counterexample_kind = *o.kind;
  if (o.y0) s.y0 = *o.y0;
  if (!(s.h > 0.0) || !(s.t_max > 0.0)) config_error("grid step and T_max must be positive");
}

Command parse_command(const std::string& name) {
  if (name == "forward") return Command::Forward;
  if (name == "construct") return Command::Construct;
  if (name == "roundtrip") return Command::Roundtrip;
  if (name == "counterexample") return Command::Counterexample;
  config_error("unknown command '" + name + "'");
}

std::string command_name(Command c) {
  switch (c) {
    case Command::Forward: return "forward";
    case Command::Construct: return "construct";
    case Command::Roundtrip: return "roundtrip";
    case Command::Counterexample: return "counterexample";
  }
  return "?";
}

RunResult run_scenario(Command cmd, const Scenario& s, const fs::path& out_dir) {
  Summary sum;
  Json head;
  head["command"] = command_name(cmd);
  head["model"] = s.model_name;
  Json grid;
  grid["h"] = s.h;
  grid["T_max"] = s.t_max;
  grid["L0"] = s.L0;
  head["grid"] = grid;
  head["tolerances"] = tolerances_json(s.tol);

  RunResult result;
  std::string status = "ok";
  Json code;
  std::string message;
  try {
    fs::create_directories(out_dir);
    switch (cmd) {
      case Command::Forward: {
        const ForceModel model = s.model();
        const EnergyState state = make_energy_state(s.u0, s.v0, s.window(), s.h, s.dim);
        forward_part(model, s, state, out_dir, sum, nullptr);
        break;
      }
      case Command::Construct:
        construct_part(s.model(), s, out_dir, sum);
        break;
      case Command::Roundtrip: {
        const ForceModel model = s.model();
        const EnergyState state = construct_part(model, s, out_dir, sum);
        const AsymptoticState expected = make_asymptotic_state(s.psi0, s.psi1, s.t_max, s.h, s.dim, s.balance);
        forward_part(model, s, state, out_dir, sum, &expected);
        break;
      }
      case Command::Counterexample:
        counterexample_part(s, out_dir, sum);
        break;
    }
  } catch (const Error& e) {
    status = "error";
    code = std::string(to_string(e.code()));
    message = e.what();
    result.exit_code = e.code() == ErrorCode::ConfigError ? 2 : 1;
  } catch (const std::exception& e) {
    status = "error";
    code = "InternalError";
    message = e.what();
    result.exit_code = 1;
  }

  bool passed = status == "ok";
  for (const auto& [name, ok] : sum.checks.items()) passed = passed && ok.get<bool>();

  Json& out = result.summary;
  out["command"] = head["command"];
  out["model"] = head["model"];
  out["status"] = status;
  out["error_code"] = code;
  out["message"] = message;
  out["grid"] = head["grid"];
  out["tolerances"] = head["tolerances"];
  out["metrics"] = sum.metrics;
  out["checks"] = sum.checks;
  out["passed"] = passed;
  try {
    write_json(out_dir / "summary.json", out);
  } catch (const std::exception&) {
    if (result.exit_code == 0) result.exit_code = 2;
  }
  return result;
}

}  // namespace lamb
