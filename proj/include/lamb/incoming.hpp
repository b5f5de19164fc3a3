#pragma once
// Incoming trajectories of the inverse reduced equation
//
//   y' = -F(y)/2 + S'(t),   y(t) -> s_plus as t -> infinity,
//
// at a hyperbolic zero s_plus of F: a Picard fixed point on the tail
// [T, T_max] where the forcing is small, continued backward to t = 0 with
// RK4, and the nonhyperbolic counterexamples.

#include <optional>
#include <string>
#include <vector>

#include "lamb/force.hpp"
#include "lamb/function_spaces.hpp"
#include "lamb/greenop.hpp"

namespace lamb {

/// F(s + w) = A w + N(w) around a zero s.
class Decomposition {
 public:
  Decomposition(const ForceModel& model, Vec s_plus);

  const ForceModel& model() const { return model_; }
  const Vec& s_plus() const { return s_plus_; }
  const Mat& A() const { return A_; }
  std::size_t dim() const { return model_.dim(); }

  /// N(w) = F(s + w) - A w.
  Vec remainder(const Vec& w) const;
  /// N'(w) = F'(s + w) - A.
  Mat remainder_jacobian(const Vec& w) const;

 private:
  ForceModel model_;
  Vec s_plus_;
  Mat A_;
};

/// Throws NotStationary when |F(s_plus)| > tol.
Decomposition decompose_force(const ForceModel& model, const StationaryState& s_plus,
                              double tol = 1e-10);

/// Pointwise N(w(t)) and its derivative N'(w(t)) dir(t) on a nodal trajectory.
GridFunction nemytskii(const Decomposition& d, const GridFunction& w);
GridFunction nemytskii_derivative(const Decomposition& d, const GridFunction& w,
                                  const GridFunction& dir);

/// Smallest grid time T whose tail L2 norm is <= eps. Nodal forcing restarts
/// the trapezoid rule at T; cell forcing counts whole cells from T.
/// Throws CannotLocalize when T would exceed half the window.
double choose_T(const GridFunction& f, double eps);

/// Perturbed adds radius/4 * exp(-(t - T)) (1, ..., 1)/sqrt(n) to the linear
/// response, so it does not collapse onto the same iterates.
enum class PicardStart { Zero, LinearResponse, Perturbed };

struct TailOptions {
  double tolerance = 1e-10;
  int max_iterations = 200;
  /// Iterates with sup norm above this are rejected (Diverged).
  double radius = 1.0;
  PicardStart start = PicardStart::LinearResponse;
};

struct TailSolution {
  GridFunction y;  ///< shifted coordinates, nodes on [T, T_max]
  int iterations = 0;
  std::vector<double> differences;  ///< Y-norm of successive differences
  double contraction_ratio = 0.0;   ///< largest ratio of successive differences
  bool converged = false;
};

/// Fixed point of y = R(f1 + Ntilde(y)), Ntilde = -N/2, f1 = f on [T, T_max].
/// `green` must be built for the split of B = -A/2 on f's grid step.
TailSolution solve_tail(const GreenOperator& green, const Decomposition& d, const GridFunction& f,
                        double T, const TailOptions& options = {});

struct BackwardContinuation {
  GridFunction y;                      ///< nodes on [0, T]
  std::optional<double> energy_slack;  ///< max of lhs - rhs of the a-priori bound
};

/// RK4 for y' = -F(y)/2 + f from t = T down to 0, f constant on each cell.
/// Throws BlowUp if |y| exceeds 1e6.
BackwardContinuation backward_continue(const ForceModel& model, const GridFunction& forcing,
                                       const Vec& y_T, double T);

/// Largest violation of V(y(t)) + int_t^T |y'|^2 <= V(y(T)) + int_t^T |f|^2
/// along a nodal y with cell forcing on the same window.
double energy_estimate_slack(const ForceModel& model, const GridFunction& y,
                             const GridFunction& forcing);

struct IncomingOptions {
  TailOptions tail;
  /// Tail L2 threshold for choose_T; computed from the dichotomy constants
  /// when unset.
  std::optional<double> tail_threshold;
  int max_retries = 30;
  bool check_uniqueness = true;
};

struct IncomingSolution {
  Trajectory trajectory;
  Vec s_plus;
  double T = 0.0;
  double eps = 0.0;
  double C = 0.0;
  double tail_threshold = 0.0;
  int picard_iterations = 0;
  double contraction_ratio = 0.0;
  std::optional<double> uniqueness_gap;
  double residual_l2 = 0.0;
  double residual_sup = 0.0;
  double terminal_gap = 0.0;
  std::optional<double> energy_slack;
  double glue_derivative_jump = 0.0;
  int retries = 0;
  GridFunction forcing;  ///< cell forcing S' on [0, T_max]
};

/// Cell residual of the trapezoid form of y' = -F(y)/2 + f.
GridFunction inverse_residual(const ForceModel& model, const GridFunction& y,
                              const GridFunction& forcing);

IncomingSolution construct_incoming(const ForceModel& model, const StationaryState& s_plus,
                                    const AsymptoticState& psi, double t_max,
                                    const IncomingOptions& options = {});

/// Same pipeline for a prescribed cell forcing on [0, T_max].
IncomingSolution construct_incoming_from_forcing(const ForceModel& model,
                                                 const StationaryState& s_plus,
                                                 const GridFunction& forcing,
                                                 const IncomingOptions& options = {});

enum class CounterexampleKind { Flat, Quadratic, HyperbolicControl };

CounterexampleKind parse_counterexample_kind(const std::string& name);
std::string counterexample_kind_name(CounterexampleKind k);

struct CounterexampleReport {
  CounterexampleKind kind;
  GridFunction y;  ///< up to the exit time (or T_max)
  std::optional<double> exit_time;
  /// Mean of y(t) - ln(1+t) over the computed range.
  double log_fit_constant = 0.0;
  /// Largest |y(t) - ln(1+t) - log_fit_constant|.
  double log_fit_deviation = 0.0;
  /// Smallest y(t) - ln(1+t).
  double log_fit_minimum = 0.0;
  double sup_norm = 0.0;
  /// Largest |y| over the last tenth of the range.
  double tail_max = 0.0;
};

/// f(t) = 1/(1+t). flat: y' = f; quadratic: y' = y^2 + f; both integrated
/// from y0 until |y| reaches 1. hyperbolic-control: the incoming solution of
/// y' = y/2 + f, which ignores y0 (it is the only bounded solution).
CounterexampleReport run_counterexample(CounterexampleKind kind, double y0, double t_max,
                                        double h = 1e-3);

}  // namespace lamb
