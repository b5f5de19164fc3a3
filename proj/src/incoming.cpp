#include "lamb/incoming.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "lamb/error.hpp"

namespace lamb {

Decomposition::Decomposition(const ForceModel& model, Vec s_plus)
    : model_(model), s_plus_(std::move(s_plus)), A_(model_.jacobian(s_plus_)) {}

Vec Decomposition::remainder(const Vec& w) const {
  return model_.force(s_plus_ + w) - A_ * w;
}

Mat Decomposition::remainder_jacobian(const Vec& w) const {
  return model_.jacobian(s_plus_ + w) - A_;
}

Decomposition decompose_force(const ForceModel& model, const StationaryState& s_plus, double tol) {
  if (static_cast<std::size_t>(s_plus.s.size()) != model.dim()) {
    throw Error(ErrorCode::NotStationary, "stationary state has the wrong dimension");
  }
  const double r = model.force(s_plus.s).norm();
  if (!(r <= tol)) {
    throw Error(ErrorCode::NotStationary, "|F(s_plus)| = " + std::to_string(r));
  }
  return {model, s_plus.s};
}

GridFunction nemytskii(const Decomposition& d, const GridFunction& w) {
  GridFunction out(w.t0(), w.h(), w.size(), w.dim(), w.centering());
  for (std::size_t i = 0; i < w.size(); ++i) out.set(i, d.remainder(w.value(i)));
  return out;
}

GridFunction nemytskii_derivative(const Decomposition& d, const GridFunction& w,
                                  const GridFunction& dir) {
  require_same_grid(w, dir, "nemytskii_derivative");
  GridFunction out(w.t0(), w.h(), w.size(), w.dim(), w.centering());
  for (std::size_t i = 0; i < w.size(); ++i) {
    out.set(i, d.remainder_jacobian(w.value(i)) * dir.value(i));
  }
  return out;
}

double choose_T(const GridFunction& f, double eps) {
  const std::size_t m = f.size();
  const double h = f.h();
  const bool nodal = f.centering() == Centering::Node;
  auto sq = [&](std::size_t i) {
    double s = 0.0;
    for (double v : f[i]) s += v * v;
    return s;
  };
  // tail[i]: squared L2 norm of f over [t_i, end], i indexing nodes or cell
  // starts; i = m (cells) or i = m-1 (nodes) is the empty tail.
  std::vector<double> tail(m + 1, 0.0);
  double running = 0.0;
  for (std::size_t i = m; i-- > 0;) {
    running += sq(i);
    if (nodal) {
      tail[i] = i + 1 == m ? 0.0 : h * (running - 0.5 * sq(i) - 0.5 * sq(m - 1));
    } else {
      tail[i] = h * running;
    }
  }
  const double target = eps * eps * (1.0 + 1e-12);
  const std::size_t last = nodal ? m - 1 : m;
  std::size_t first = last;
  for (std::size_t i = 0; i <= last; ++i) {
    if (tail[i] <= target) {
      first = i;
      break;
    }
  }
  const double T = f.t0() + static_cast<double>(first) * h;
  const double half = f.t0() + 0.5 * (f.t_end() - f.t0());
  if (T > half + 1e-12 * (1.0 + std::fabs(half))) {
    throw Error(ErrorCode::CannotLocalize,
                "tail L2 norm at T_max/2 is still above " + std::to_string(eps));
  }
  return T;
}

namespace {

// f restricted to [T, end] as its own grid function (the cutoff f1).
GridFunction restrict_from(const GridFunction& f, std::size_t first) {
  std::vector<double> data(f.data().begin() + static_cast<std::ptrdiff_t>(first * f.dim()),
                           f.data().end());
  return GridFunction(f.t0() + static_cast<double>(first) * f.h(), f.h(), f.dim(), std::move(data),
                      f.centering());
}

double contraction_of(const std::vector<double>& diffs, double tolerance) {
  double ratio = 0.0;
  bool any = false;
  for (std::size_t k = 1; k < diffs.size(); ++k) {
    if (diffs[k] > 10.0 * tolerance && diffs[k - 1] > 0.0) {
      ratio = std::max(ratio, diffs[k] / diffs[k - 1]);
      any = true;
    }
  }
  if (!any && diffs.size() >= 2 && diffs[0] > 0.0) ratio = diffs[1] / diffs[0];
  return ratio;
}

}  // namespace

TailSolution solve_tail(const GreenOperator& green, const Decomposition& d, const GridFunction& f,
                        double T, const TailOptions& options) {
  if (std::fabs(green.h() - f.h()) > 1e-12 * f.h()) {
    throw Error(ErrorCode::GridError, "Green operator built for a different grid step");
  }
  const std::size_t first = steps_in(T - f.t0(), f.h());
  const GridFunction f1 = restrict_from(f, first);
  const bool cells = f1.centering() == Centering::Cell;
  const std::size_t nodes = cells ? f1.size() + 1 : f1.size();

  auto apply = [&](const GridFunction& nonlinear) {
    if (cells) return green.apply(&nonlinear, &f1);
    GridFunction total = nonlinear;
    total += f1;
    return green.apply(&total, nullptr);
  };
  auto check = [&](const GridFunction& y) {
    if (!y.all_finite() || y.sup_norm() > options.radius) {
      throw Error(ErrorCode::Diverged, "Picard iterate left the validity radius " +
                                           std::to_string(options.radius));
    }
  };

  TailSolution out;
  const GridFunction zero(f1.t0(), f1.h(), nodes, f1.dim(), Centering::Node);
  GridFunction y = options.start == PicardStart::Zero ? zero : apply(zero);
  if (options.start == PicardStart::Perturbed) {
    const double a = 0.25 * options.radius / std::sqrt(static_cast<double>(f1.dim()));
    for (std::size_t i = 0; i < y.size(); ++i) {
      y.set(i, y.value(i).array() + a * std::exp(-(y.time(i) - y.t0())));
    }
  }
  check(y);
  for (int it = 1; it <= options.max_iterations; ++it) {
    GridFunction forcing = nemytskii(d, y);
    forcing *= -0.5;
    GridFunction next = apply(forcing);
    check(next);
    const double diff = (next - y).y_norm();
    out.differences.push_back(diff);
    y = std::move(next);
    out.iterations = it;
    if (diff <= options.tolerance) {
      out.converged = true;
      break;
    }
  }
  out.contraction_ratio = contraction_of(out.differences, options.tolerance);
  out.y = std::move(y);
  return out;
}

BackwardContinuation backward_continue(const ForceModel& model, const GridFunction& forcing,
                                       const Vec& y_T, double T) {
  if (!(T >= 0.0)) throw Error(ErrorCode::GridError, "T must be non-negative");
  if (forcing.centering() != Centering::Cell) throw Error(ErrorCode::GridError, "forcing must be cell-centred");
  const double h = forcing.h();
  const std::size_t steps = steps_in(T - forcing.t0(), h);
  if (steps > forcing.size()) throw Error(ErrorCode::WindowError, "forcing does not cover [0, T]");

  GridFunction y(forcing.t0(), h, steps + 1, model.dim(), Centering::Node);
  y.set(steps, y_T);
  Vec cur = y_T;
  for (std::size_t i = steps; i-- > 0;) {
    const Vec c = forcing.value(i);
    auto rhs = [&](const Vec& v) -> Vec { return -0.5 * model.force(v) + c; };
    const Vec k1 = rhs(cur);
    const Vec k2 = rhs(cur - 0.5 * h * k1);
    const Vec k3 = rhs(cur - 0.5 * h * k2);
    const Vec k4 = rhs(cur - h * k3);
    cur -= (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    if (!cur.allFinite() || cur.norm() > 1e6) {
      throw Error(ErrorCode::BlowUp, "backward continuation exceeded 1e6 at t = " +
                                         std::to_string(y.time(i)));
    }
    y.set(i, cur);
  }
  BackwardContinuation out{std::move(y), std::nullopt};
  if (model.has_potential() && steps > 0) out.energy_slack = energy_estimate_slack(model, out.y, forcing);
  return out;
}

double energy_estimate_slack(const ForceModel& model, const GridFunction& y, const GridFunction& forcing) {
  const std::size_t cells = y.size() - 1;
  const double h = y.h();
  const double v_end = model.potential(y.value(cells));
  double int_ydot = 0.0;
  double int_f = 0.0;
  double slack = 0.0;
  for (std::size_t i = cells; i-- > 0;) {
    const Vec ydot = (y.value(i + 1) - y.value(i)) / h;
    int_ydot += h * ydot.squaredNorm();
    int_f += h * forcing.value(i).squaredNorm();
    slack = std::max(slack, model.potential(y.value(i)) + int_ydot - v_end - int_f);
  }
  return slack;
}

GridFunction inverse_residual(const ForceModel& model, const GridFunction& y, const GridFunction& forcing) {
  const std::size_t cells = y.size() - 1;
  GridFunction r(y.t0(), y.h(), cells, y.dim(), Centering::Cell);
  Vec f_lo = model.force(y.value(0));
  for (std::size_t i = 0; i < cells; ++i) {
    const Vec f_hi = model.force(y.value(i + 1));
    r.set(i, (y.value(i + 1) - y.value(i)) / y.h() + 0.25 * (f_lo + f_hi) - forcing.value(i));
    f_lo = f_hi;
  }
  return r;
}

IncomingSolution construct_incoming_from_forcing(const ForceModel& model, const StationaryState& s_plus,
                                                 const GridFunction& forcing,
                                                 const IncomingOptions& options) {
  if (forcing.centering() != Centering::Cell) throw Error(ErrorCode::GridError, "forcing must be cell-centred");
  const Decomposition d = decompose_force(model, s_plus);
  const HyperbolicSplit split = hyperbolic_split(-0.5 * d.A());
  const GreenOperator green(split, forcing.h());
  const double h = forcing.h();

  TailOptions tail = options.tail;
  tail.radius = model.validity_radius(s_plus.s);
  double threshold = options.tail_threshold.value_or(
      0.25 * tail.radius /
      (split.C() * (1.0 / std::sqrt(split.eps()) + 2.0 / split.eps())));

  int retries = 0;
  double T = 0.0;
  TailSolution y1;
  for (;;) {
    T = choose_T(forcing, threshold);
    try {
      y1 = solve_tail(green, d, forcing, T, tail);
      if (y1.converged) break;
    } catch (const Error& e) {
      if (e.code() != ErrorCode::Diverged) throw;
    }
    if (++retries > options.max_retries) {
      throw Error(ErrorCode::Diverged, "Picard iteration failed after " + std::to_string(retries - 1) + " retries");
    }
    threshold *= 0.5;
  }

  std::optional<double> uniqueness;
  if (options.check_uniqueness) {
    TailOptions other_start = tail;
    other_start.start = PicardStart::Perturbed;
    try {
      const TailSolution other = solve_tail(green, d, forcing, T, other_start);
      uniqueness = (other.y - y1.y).y_norm();
    } catch (const Error& e) {
      if (e.code() != ErrorCode::Diverged) throw;
      uniqueness = std::numeric_limits<double>::infinity();
    }
  }

  const std::size_t iT = steps_in(T - forcing.t0(), h);
  const std::size_t nodes = forcing.size() + 1;
  const Vec y_T = y1.y.value(0) + s_plus.s;
  const BackwardContinuation y2 = backward_continue(model, forcing, y_T, T);

  GridFunction y(forcing.t0(), h, nodes, model.dim(), Centering::Node);
  for (std::size_t i = 0; i <= iT; ++i) y.set(i, y2.y.value(i));
  for (std::size_t i = iT; i < nodes; ++i) y.set(i, y1.y.value(i - iT) + s_plus.s);

  IncomingSolution out{Trajectory(y), s_plus.s, T, split.eps(), split.C(), threshold,
                       y1.iterations, y1.contraction_ratio, uniqueness, 0.0, 0.0, 0.0,
                       y2.energy_slack, 0.0, retries, forcing};
  const GridFunction r = inverse_residual(model, y, forcing);
  out.residual_l2 = r.l2_norm();
  out.residual_sup = r.sup_norm();
  out.terminal_gap = (y.value(nodes - 1) - s_plus.s).norm();
  if (iT >= 2 && iT + 2 < nodes) {
    const Vec left = (3.0 * y.value(iT) - 4.0 * y.value(iT - 1) + y.value(iT - 2)) / (2.0 * h);
    const Vec right = (-3.0 * y.value(iT) + 4.0 * y.value(iT + 1) - y.value(iT + 2)) / (2.0 * h);
    out.glue_derivative_jump = (left - right).norm();
  }
  return out;
}

IncomingSolution construct_incoming(const ForceModel& model, const StationaryState& s_plus,
                                    const AsymptoticState& psi, double t_max,
                                    const IncomingOptions& options) {
  const MembershipVerdict verdict = validate_asymptotic_state(psi);
  if (!verdict.member) {
    throw Error(ErrorCode::InconsistentInput,
                "asymptotic state violates the limit identity (residual " +
                    std::to_string(verdict.residual_norm) + ")");
  }
  const FreeTrace trace = build_S(psi, t_max);
  return construct_incoming_from_forcing(model, s_plus, cell_forcing(trace.S), options);
}

// ---------------------------------------------------------------------------

CounterexampleKind parse_counterexample_kind(const std::string& name) {
  if (name == "flat") return CounterexampleKind::Flat;
  if (name == "quadratic") return CounterexampleKind::Quadratic;
  if (name == "hyperbolic-control") return CounterexampleKind::HyperbolicControl;
  throw Error(ErrorCode::ConfigError, "unknown counterexample kind '" + name + "'");
}

std::string counterexample_kind_name(CounterexampleKind k) {
  switch (k) {
    case CounterexampleKind::Flat: return "flat";
    case CounterexampleKind::Quadratic: return "quadratic";
    case CounterexampleKind::HyperbolicControl: return "hyperbolic-control";
  }
  return "flat";
}

namespace {

double decaying_forcing(double t) { return 1.0 / (1.0 + std::fabs(t)); }

// First tau in [0, h] with |p(tau)| = 1 for the cubic Hermite interpolant.
double hermite_exit(double y0, double d0, double y1, double d1, double h) {
  auto p = [&](double tau) {
    const double s = tau / h;
    const double h00 = 2 * s * s * s - 3 * s * s + 1;
    const double h10 = s * s * s - 2 * s * s + s;
    const double h01 = -2 * s * s * s + 3 * s * s;
    const double h11 = s * s * s - s * s;
    return h00 * y0 + h10 * h * d0 + h01 * y1 + h11 * h * d1;
  };
  double lo = 0.0, hi = h;
  for (int it = 0; it < 200 && hi - lo > 1e-16 * h; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (std::fabs(p(mid)) >= 1.0) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  return 0.5 * (lo + hi);
}

void fit_logarithm(CounterexampleReport& r) {
  const std::size_t m = r.y.size();
  if (m == 0) return;
  std::vector<double> d(m);
  for (std::size_t i = 0; i < m; ++i) d[i] = r.y(i) - std::log1p(r.y.time(i));
  r.log_fit_constant = std::accumulate(d.begin(), d.end(), 0.0) / static_cast<double>(m);
  r.log_fit_minimum = *std::min_element(d.begin(), d.end());
  r.log_fit_deviation = 0.0;
  for (double v : d) r.log_fit_deviation = std::max(r.log_fit_deviation, std::fabs(v - r.log_fit_constant));
  r.sup_norm = r.y.sup_norm();
  const auto from = static_cast<std::size_t>(0.9 * static_cast<double>(m));
  r.tail_max = 0.0;
  for (std::size_t i = from; i < m; ++i) r.tail_max = std::max(r.tail_max, std::fabs(r.y(i)));
}

}  // namespace

CounterexampleReport run_counterexample(CounterexampleKind kind, double y0, double t_max, double h) {
  const std::size_t steps = steps_in(t_max, h);
  CounterexampleReport report{kind, GridFunction(0.0, h, 1, 1), std::nullopt};

  if (kind == CounterexampleKind::HyperbolicControl) {
    const GridFunction f = GridFunction::sample(0.0, h, steps + 1, 1, [](double t) {
      return Vec::Constant(1, decaying_forcing(t));
    });
    const HyperbolicSplit split = hyperbolic_split(Mat::Constant(1, 1, 0.5));
    report.y = apply_R(split, f);
    for (std::size_t i = 0; i < report.y.size(); ++i) {
      if (std::fabs(report.y(i)) >= 1.0) {
        report.exit_time = report.y.time(i);
        break;
      }
    }
    fit_logarithm(report);
    return report;
  }

  if (std::fabs(y0) >= 0.5) throw Error(ErrorCode::ConfigError, "counterexamples need |y0| < 1/2");
  // core branch only: the last step's stages can land past |y| = 1, where the
  // quadratic-core force jumps
  const bool quadratic = kind == CounterexampleKind::Quadratic;
  auto rhs = [&](double t, double y) { return (quadratic ? y * y : 0.0) + decaying_forcing(t); };
  std::vector<double> ys{y0};
  double y = y0;
  for (std::size_t i = 0; i < steps; ++i) {
    const double t = static_cast<double>(i) * h;
    const double k1 = rhs(t, y);
    const double k2 = rhs(t + 0.5 * h, y + 0.5 * h * k1);
    const double k3 = rhs(t + 0.5 * h, y + 0.5 * h * k2);
    const double k4 = rhs(t + h, y + h * k3);
    const double next = y + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    if (std::fabs(next) >= 1.0) {
      const double tau = hermite_exit(y, k1, next, rhs(t + h, next), h);
      report.exit_time = t + tau;
      break;
    }
    y = next;
    ys.push_back(y);
  }
  report.y = GridFunction(0.0, h, 1, std::move(ys));
  fit_logarithm(report);
  return report;
}

}  // namespace lamb
