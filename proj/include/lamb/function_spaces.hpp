#pragma once
// Phase-space states, the global energy norm, asymptotic states and the
// trace S(t) of the free wave at the origin.
//
// Spatial data lives on a window [-L, L] symmetric about the origin with
// L/h integral, so x = 0 is a node. Outside the window positions are
// extended by their stored limits and densities by zero.

#include <cstddef>
#include <optional>

#include "lamb/grid.hpp"

namespace lamb {

/// Signed-offset reads on a window symmetric about 0.
class SymmetricWindow {
 public:
  /// Window of a nodal function on [-L, L]; throws GridError if it is not
  /// symmetric about a node at 0.
  static SymmetricWindow of_nodes(const GridFunction& u);
  static SymmetricWindow of_cells(const GridFunction& c);
  SymmetricWindow(std::size_t half, double h) : half_(half), h_(h) {}

  std::size_t half() const { return half_; }
  double h() const { return h_; }
  double length() const { return static_cast<double>(half_) * h_; }
  std::size_t node_count() const { return 2 * half_ + 1; }
  std::size_t cell_count() const { return 2 * half_; }
  double origin() const { return -length(); }

  /// Value at x = k*h, extended by the limits.
  Vec node(const GridFunction& u, long k, const Vec& minus, const Vec& plus) const;
  /// Value on the cell (k*h, (k+1)*h), zero outside the window.
  Vec cell(const GridFunction& c, long k) const;
  double cell1(const GridFunction& c, long k, std::size_t comp) const;

 private:
  std::size_t half_;
  double h_;
};

/// Initial datum (u0, v0) with its spatial limits. u0 on nodes, v0 on cells.
class EnergyState {
 public:
  EnergyState(GridFunction u0, GridFunction v0, Vec u0_plus, Vec u0_minus, Vec v0_mean);
  /// Limits read off the window ends, v0_mean from quadrature.
  static EnergyState from_samples(GridFunction u0, GridFunction v0);
  /// The stationary state (s, 0) on the given window.
  static EnergyState stationary(const Vec& s, double L, double h);

  const GridFunction& u0() const { return u0_; }
  const GridFunction& v0() const { return v0_; }
  const Vec& u0_plus() const { return u0_plus_; }
  const Vec& u0_minus() const { return u0_minus_; }
  const Vec& v0_mean() const { return v0_mean_; }
  std::size_t dim() const { return u0_.dim(); }
  SymmetricWindow window() const { return SymmetricWindow::of_nodes(u0_); }
  Vec u0_at_origin() const;

  /// Largest mismatch between stored limits and the window data.
  double limit_mismatch() const;

 private:
  GridFunction u0_;
  GridFunction v0_;
  Vec u0_plus_;
  Vec u0_minus_;
  Vec v0_mean_;
};

/// Asymptotic free-wave state (Psi0 on nodes, Psi1 on cells).
class AsymptoticState {
 public:
  AsymptoticState(GridFunction psi0, GridFunction psi1, Vec psi0_plus, Vec psi0_minus);
  static AsymptoticState from_samples(GridFunction psi0, GridFunction psi1);
  static AsymptoticState zero(std::size_t dim, double L, double h);

  const GridFunction& psi0() const { return psi0_; }
  const GridFunction& psi1() const { return psi1_; }
  const Vec& psi0_plus() const { return psi0_plus_; }
  const Vec& psi0_minus() const { return psi0_minus_; }
  /// psi0_plus + psi0_minus + integral of psi1.
  const Vec& identity_residual() const { return identity_residual_; }
  std::size_t dim() const { return psi0_.dim(); }
  SymmetricWindow window() const { return SymmetricWindow::of_nodes(psi0_); }

  Vec psi0_at(long k) const { return window().node(psi0_, k, psi0_minus_, psi0_plus_); }
  Vec psi1_cell(long k) const { return window().cell(psi1_, k); }
  /// Cell derivative of Psi0 on (k*h, (k+1)*h); zero outside the window.
  Vec psi0_slope(long k) const;

  /// Same data viewed as a phase-space state.
  EnergyState as_energy_state() const;

 private:
  GridFunction psi0_;
  GridFunction psi1_;
  Vec psi0_plus_;
  Vec psi0_minus_;
  Vec identity_residual_;
};

struct StationaryState {
  Vec s;
};

/// y and its derivative on [0, T_max].
class Trajectory {
 public:
  /// ydot from central differences (one-sided at the ends); the L2 norm of
  /// ydot is taken from the cell differences, which is exact for the
  /// piecewise-linear interpolant of y.
  explicit Trajectory(GridFunction y);

  const GridFunction& y() const { return y_; }
  const GridFunction& ydot() const { return ydot_; }
  double l2_norm_ydot() const { return l2_norm_ydot_; }
  double y_norm() const { return y_.y_norm(); }

 private:
  GridFunction y_;
  GridFunction ydot_;
  double l2_norm_ydot_;
};

/// ||u0'||_L2 + |u0(0)| + ||v0||_L2.
double energy_norm(const EnergyState& state);
double energy_norm(const AsymptoticState& psi);
/// Energy norm of the difference of two states on the same grid.
double energy_distance(const EnergyState& a, const EnergyState& b);

struct MembershipVerdict {
  bool member = false;
  Vec residual;
  double residual_norm = 0.0;
  double tolerance = 0.0;
  double energy_norm = 0.0;
};

/// Checks Psi0(+inf) + Psi0(-inf) + int Psi1 = 0 at tolerance
/// `relative_tol * (1 + energy norm)`.
MembershipVerdict validate_asymptotic_state(const AsymptoticState& psi,
                                            double relative_tol = 1e-6);

struct FreeTrace {
  GridFunction S;     ///< nodes on [0, t_max]
  GridFunction Sdot;  ///< nodes on [0, t_max], pointwise formula
};

/// S(t) = (Psi0(t) + Psi0(-t))/2 + 1/2 int_{-t}^{t} Psi1 and its derivative.
/// Throws WindowError if t_max exceeds the window of psi.
FreeTrace build_S(const AsymptoticState& psi, double t_max);

/// Cell forcing (S(t_{i+1}) - S(t_i))/h: the exact cell average of Sdot.
GridFunction cell_forcing(const GridFunction& S);

}  // namespace lamb
