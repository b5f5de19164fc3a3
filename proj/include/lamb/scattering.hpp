#pragma once
// Forward evolution of the string-oscillator system through the d'Alembert
// decomposition, the free-wave group, extraction of scattering data and the
// reconstruction of initial data realizing a prescribed incoming trajectory.
//
// On x > 0 the field is f+(t - x) + g+(t + x), on x < 0 it is
// f-(t + x) + g-(t - x); g+- are incoming, f+- outgoing. With y(t) = u(0, t)
// the coupling at the origin reduces to y' = F(y)/2 + g+'(t) + g-'(t).

#include <optional>

#include "lamb/force.hpp"
#include "lamb/function_spaces.hpp"

namespace lamb {

/// Sum of the incoming derivatives g+'(t) + g-'(t) at the origin, on the
/// cells of [0, t_max]. Throws WindowError if t_max exceeds the window.
GridFunction incoming_wave(const EnergyState& state, double t_max);

struct ForwardRun {
  ForceModel model;
  EnergyState source;
  double t_max = 0.0;
  Trajectory y;          ///< nodes on [0, t_max]
  GridFunction w_in;     ///< cells on [0, t_max]
  /// Outgoing profile derivatives f+', f-' on the cells of [-L, t_max].
  GridFunction f_plus_out;
  GridFunction f_minus_out;
};

/// RK4 for y' = F(y)/2 + w_in with y(0) = u0(0); outgoing profiles from the
/// trace identities. Throws BlowUp if |y| exceeds 1e6.
ForwardRun forward_solve(const ForceModel& model, const EnergyState& state, double t_max);

/// F(y) + u'(0+, t) - u'(0-, t) on each cell (trapezoid in F).
GridFunction coupling_balance(const ForwardRun& run);

/// Free wave W(t) psi on the grid of psi. t must be a multiple of h with
/// |t| <= L.
EnergyState free_field(const AsymptoticState& psi, double t);

struct ScatteringData {
  StationaryState s_plus;
  AsymptoticState psi_plus;
  GridFunction remainder_curve;  ///< nodes: t -> ||r+(t)||_E
  /// |Psi0(-W) - (u0_minus - s_plus)|, consistency of the left limit.
  double left_limit_mismatch = 0.0;
};

/// Convergence detector: y(T_max) within this distance of a zero.
inline constexpr double kConvergenceTolerance = 1e-3;

/// Nearest zero of the model, Psi+ on [-T_max, T_max] from the outgoing
/// profiles, and the remainder norm at `curve_points` equally spaced times.
/// Throws NoConvergence if y(T_max) is not near any zero.
ScatteringData extract_scattering(const ForwardRun& run, std::size_t curve_points = 17);

/// Energy norm of u(t) - s_plus - W(t) psi_plus over the whole line.
double remainder_norm(const ForwardRun& run, const ScatteringData& data, double t);

struct ReconstructOptions {
  /// Largest accepted L2 residual of the inverse reduced equation.
  double residual_tolerance = 1e-4;
};

/// Initial data on [-L, L] (L = end of y's window) whose forward run follows
/// y and radiates psi. Outgoing profiles are the free ones of psi; the
/// incoming ones are matched so that y' = F(y)/2 + w_in holds on the grid.
/// Throws InconsistentInput if y does not solve the inverse reduced
/// equation driven by S' of psi.
EnergyState reconstruct_initial(const ForceModel& model, const Trajectory& y,
                                const AsymptoticState& psi, const Vec& s_plus,
                                const ReconstructOptions& options = {});

/// Per-cell drive w with RK4(y_i; F/2 + w, h) = y_{i+1}.
GridFunction matching_drive(const ForceModel& model, const GridFunction& y);

}  // namespace lamb
