#include "lamb/function_spaces.hpp"

#include <cmath>

#include "lamb/error.hpp"

namespace lamb {

namespace {

std::size_t half_width_of(double t0, double h, std::size_t expected_cells) {
  const double m = -t0 / h;
  const double r = std::round(m);
  if (std::fabs(m - r) > 1e-9 * std::max(1.0, m) || r < 0.0 ||
      static_cast<std::size_t>(r) * 2 != expected_cells) {
    throw Error(ErrorCode::GridError, "spatial window is not symmetric about a node at 0");
  }
  return static_cast<std::size_t>(r);
}

void require_dim(const Vec& v, std::size_t n, const char* what) {
  if (static_cast<std::size_t>(v.size()) != n) {
    throw Error(ErrorCode::GridError, std::string("dimension mismatch for ") + what);
  }
}

void require_pair(const GridFunction& pos, const GridFunction& dens) {
  if (pos.centering() != Centering::Node || dens.centering() != Centering::Cell) {
    throw Error(ErrorCode::GridError, "positions must be nodal and densities cell-centred");
  }
  if (pos.dim() != dens.dim() || pos.size() != dens.size() + 1 ||
      std::fabs(pos.t0() - dens.t0()) > 1e-12 * (1.0 + std::fabs(pos.t0())) ||
      std::fabs(pos.h() - dens.h()) > 1e-14 * pos.h()) {
    throw Error(ErrorCode::GridError, "position and density grids differ");
  }
}

}  // namespace

SymmetricWindow SymmetricWindow::of_nodes(const GridFunction& u) {
  if (u.centering() != Centering::Node || u.size() % 2 == 0) {
    throw Error(ErrorCode::GridError, "expected an odd number of nodes");
  }
  return {half_width_of(u.t0(), u.h(), u.size() - 1), u.h()};
}

SymmetricWindow SymmetricWindow::of_cells(const GridFunction& c) {
  if (c.centering() != Centering::Cell || c.size() % 2 == 1) {
    throw Error(ErrorCode::GridError, "expected an even number of cells");
  }
  return {half_width_of(c.t0(), c.h(), c.size()), c.h()};
}

Vec SymmetricWindow::node(const GridFunction& u, long k, const Vec& minus, const Vec& plus) const {
  const long m = static_cast<long>(half_);
  if (k > m) return plus;
  if (k < -m) return minus;
  return u.value(static_cast<std::size_t>(m + k));
}

Vec SymmetricWindow::cell(const GridFunction& c, long k) const {
  const long j = static_cast<long>(half_) + k;
  if (j < 0 || j >= static_cast<long>(2 * half_)) return Vec::Zero(static_cast<Eigen::Index>(c.dim()));
  return c.value(static_cast<std::size_t>(j));
}

double SymmetricWindow::cell1(const GridFunction& c, long k, std::size_t comp) const {
  const long j = static_cast<long>(half_) + k;
  if (j < 0 || j >= static_cast<long>(2 * half_)) return 0.0;
  return c[static_cast<std::size_t>(j)][comp];
}

// ---------------------------------------------------------------------------

EnergyState::EnergyState(GridFunction u0, GridFunction v0, Vec u0_plus, Vec u0_minus, Vec v0_mean)
    : u0_(std::move(u0)),
      v0_(std::move(v0)),
      u0_plus_(std::move(u0_plus)),
      u0_minus_(std::move(u0_minus)),
      v0_mean_(std::move(v0_mean)) {
  require_pair(u0_, v0_);
  SymmetricWindow::of_nodes(u0_);
  require_dim(u0_plus_, dim(), "u0_plus");
  require_dim(u0_minus_, dim(), "u0_minus");
  require_dim(v0_mean_, dim(), "v0_mean");
}

EnergyState EnergyState::from_samples(GridFunction u0, GridFunction v0) {
  Vec plus = u0.value(u0.size() - 1);
  Vec minus = u0.value(0);
  Vec mean = v0.integral();
  return {std::move(u0), std::move(v0), std::move(plus), std::move(minus), std::move(mean)};
}

EnergyState EnergyState::stationary(const Vec& s, double L, double h) {
  const std::size_t m = steps_in(L, h);
  const auto n = static_cast<std::size_t>(s.size());
  GridFunction u0 = GridFunction::sample(-L, h, 2 * m + 1, n, [&](double) { return s; });
  GridFunction v0(-L, h, 2 * m, n, Centering::Cell);
  return {std::move(u0), std::move(v0), s, s, Vec::Zero(s.size())};
}

Vec EnergyState::u0_at_origin() const { return u0_.value(window().half()); }

double EnergyState::limit_mismatch() const {
  double m = (u0_.value(u0_.size() - 1) - u0_plus_).norm();
  m = std::max(m, (u0_.value(0) - u0_minus_).norm());
  m = std::max(m, (v0_.integral() - v0_mean_).norm());
  return m;
}

// ---------------------------------------------------------------------------

AsymptoticState::AsymptoticState(GridFunction psi0, GridFunction psi1, Vec psi0_plus, Vec psi0_minus)
    : psi0_(std::move(psi0)),
      psi1_(std::move(psi1)),
      psi0_plus_(std::move(psi0_plus)),
      psi0_minus_(std::move(psi0_minus)) {
  require_pair(psi0_, psi1_);
  SymmetricWindow::of_nodes(psi0_);
  require_dim(psi0_plus_, dim(), "psi0_plus");
  require_dim(psi0_minus_, dim(), "psi0_minus");
  identity_residual_ = psi0_plus_ + psi0_minus_ + psi1_.integral();
}

AsymptoticState AsymptoticState::from_samples(GridFunction psi0, GridFunction psi1) {
  Vec plus = psi0.value(psi0.size() - 1);
  Vec minus = psi0.value(0);
  return {std::move(psi0), std::move(psi1), std::move(plus), std::move(minus)};
}

AsymptoticState AsymptoticState::zero(std::size_t dim, double L, double h) {
  const std::size_t m = steps_in(L, h);
  const auto n = static_cast<Eigen::Index>(dim);
  return {GridFunction(-L, h, 2 * m + 1, dim, Centering::Node),
          GridFunction(-L, h, 2 * m, dim, Centering::Cell), Vec::Zero(n), Vec::Zero(n)};
}

Vec AsymptoticState::psi0_slope(long k) const {
  const long m = static_cast<long>(window().half());
  if (k < -m || k >= m) return Vec::Zero(static_cast<Eigen::Index>(dim()));
  const auto i = static_cast<std::size_t>(m + k);
  return (psi0_.value(i + 1) - psi0_.value(i)) / psi0_.h();
}

EnergyState AsymptoticState::as_energy_state() const {
  return {psi0_, psi1_, psi0_plus_, psi0_minus_, psi1_.integral()};
}

// ---------------------------------------------------------------------------

Trajectory::Trajectory(GridFunction y)
    : y_(std::move(y)), ydot_(nodal_derivative(y_)), l2_norm_ydot_(0.0) {
  if (y_.size() >= 2) l2_norm_ydot_ = cell_derivative(y_).l2_norm();
}

// ---------------------------------------------------------------------------

double energy_norm(const EnergyState& s) {
  return cell_derivative(s.u0()).l2_norm() + s.u0_at_origin().norm() + s.v0().l2_norm();
}

double energy_norm(const AsymptoticState& psi) { return energy_norm(psi.as_energy_state()); }

double energy_distance(const EnergyState& a, const EnergyState& b) {
  require_same_grid(a.u0(), b.u0(), "energy_distance");
  require_same_grid(a.v0(), b.v0(), "energy_distance");
  EnergyState d(a.u0() - b.u0(), a.v0() - b.v0(), a.u0_plus() - b.u0_plus(),
                a.u0_minus() - b.u0_minus(), a.v0_mean() - b.v0_mean());
  return energy_norm(d);
}

MembershipVerdict validate_asymptotic_state(const AsymptoticState& psi, double relative_tol) {
  MembershipVerdict v;
  v.residual = psi.identity_residual();
  v.residual_norm = v.residual.norm();
  v.energy_norm = energy_norm(psi);
  v.tolerance = relative_tol * (1.0 + v.energy_norm);
  v.member = std::isfinite(v.energy_norm) && v.residual_norm <= v.tolerance;
  return v;
}

FreeTrace build_S(const AsymptoticState& psi, double t_max) {
  const SymmetricWindow w = psi.window();
  const double h = w.h();
  if (t_max > w.length() * (1.0 + 1e-12)) {
    throw Error(ErrorCode::WindowError, "t_max exceeds the asymptotic-state window");
  }
  const std::size_t steps = steps_in(t_max, h);
  const std::size_t n = psi.dim();
  const long m = static_cast<long>(w.half());

  const GridFunction dpsi0 = nodal_derivative(psi.psi0());
  auto psi0_prime = [&](long k) -> Vec {
    if (k > m || k < -m) return Vec::Zero(static_cast<Eigen::Index>(n));
    return dpsi0.value(static_cast<std::size_t>(m + k));
  };
  auto psi1_node = [&](long k) -> Vec { return 0.5 * (psi.psi1_cell(k - 1) + psi.psi1_cell(k)); };

  GridFunction S(0.0, h, steps + 1, n, Centering::Node);
  GridFunction Sdot(0.0, h, steps + 1, n, Centering::Node);
  Vec running = Vec::Zero(static_cast<Eigen::Index>(n));
  for (long k = 0; k <= static_cast<long>(steps); ++k) {
    if (k > 0) running += h * (psi.psi1_cell(k - 1) + psi.psi1_cell(-k));
    S.set(static_cast<std::size_t>(k), 0.5 * (psi.psi0_at(k) + psi.psi0_at(-k)) + 0.5 * running);
    Sdot.set(static_cast<std::size_t>(k),
             0.5 * (psi0_prime(k) - psi0_prime(-k)) + 0.5 * (psi1_node(k) + psi1_node(-k)));
  }
  return {std::move(S), std::move(Sdot)};
}

GridFunction cell_forcing(const GridFunction& S) { return cell_derivative(S); }

}  // namespace lamb
