#include "lamb/scattering.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "lamb/error.hpp"
#include "lamb/incoming.hpp"

namespace lamb {

namespace {

// Cell values addressed by the signed index k of the cell (k h, (k+1) h);
// zero outside the stored range.
class CellLookup {
 public:
  explicit CellLookup(const GridFunction& g)
      : g_(g), offset_(std::lround(g.t0() / g.h())), zero_(Vec::Zero(static_cast<Eigen::Index>(g.dim()))) {}
  Vec operator()(long k) const {
    const long j = k - offset_;
    if (j < 0 || j >= static_cast<long>(g_.size())) return zero_;
    return g_.value(static_cast<std::size_t>(j));
  }

 private:
  const GridFunction& g_;
  long offset_;
  Vec zero_;
};

// Cell slopes of a nodal function on a symmetric window, zero outside.
GridFunction slopes(const GridFunction& u) { return cell_derivative(u); }

Vec rk4_forward(const ForceModel& model, const Vec& y, const Vec& w, double h) {
  auto rhs = [&](const Vec& v) -> Vec { return 0.5 * model.force(v) + w; };
  const Vec k1 = rhs(y);
  const Vec k2 = rhs(y + 0.5 * h * k1);
  const Vec k3 = rhs(y + 0.5 * h * k2);
  const Vec k4 = rhs(y + h * k3);
  return y + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

// g+' and g-' on the cells of [0, t) addressed by signed index, from
// initial data (u0', v0 on cells of [-L, L]).
struct IncomingProfiles {
  CellLookup du0;
  CellLookup v0;
  Vec g_plus(long k) const { return 0.5 * (du0(k) + v0(k)); }
  Vec g_minus(long k) const { return 0.5 * (v0(-k - 1) - du0(-k - 1)); }
};

}  // namespace

GridFunction incoming_wave(const EnergyState& state, double t_max) {
  const SymmetricWindow w = state.window();
  if (t_max > w.length() * (1.0 + 1e-12)) throw Error(ErrorCode::WindowError, "t_max exceeds the spatial window");
  const std::size_t K = steps_in(t_max, w.h());
  const GridFunction du0 = slopes(state.u0());
  const IncomingProfiles in{CellLookup(du0), CellLookup(state.v0())};
  GridFunction out(0.0, w.h(), K, state.dim(), Centering::Cell);
  for (std::size_t k = 0; k < K; ++k) {
    const long s = static_cast<long>(k);
    out.set(k, in.g_plus(s) + in.g_minus(s));
  }
  return out;
}

ForwardRun forward_solve(const ForceModel& model, const EnergyState& state, double t_max) {
  if (state.dim() != model.dim()) throw Error(ErrorCode::GridError, "state and model dimensions differ");
  const SymmetricWindow win = state.window();
  const double h = win.h();
  GridFunction w_in = incoming_wave(state, t_max);
  const std::size_t K = w_in.size();
  const std::size_t n = state.dim();

  GridFunction y(0.0, h, K + 1, n, Centering::Node);
  Vec cur = state.u0_at_origin();
  y.set(0, cur);
  for (std::size_t i = 0; i < K; ++i) {
    cur = rk4_forward(model, cur, w_in.value(i), h);
    if (!cur.allFinite() || cur.norm() > 1e6) {
      throw Error(ErrorCode::BlowUp, "forward solve exceeded 1e6 at t = " + std::to_string(y.time(i + 1)));
    }
    y.set(i + 1, cur);
  }

  const GridFunction du0 = slopes(state.u0());
  const IncomingProfiles in{CellLookup(du0), CellLookup(state.v0())};
  const GridFunction ydot = cell_derivative(y);
  const long M = static_cast<long>(win.half());
  GridFunction fp(-win.length(), h, static_cast<std::size_t>(M) + K, n, Centering::Cell);
  GridFunction fm(-win.length(), h, static_cast<std::size_t>(M) + K, n, Centering::Cell);
  for (long k = -M; k < static_cast<long>(K); ++k) {
    const auto j = static_cast<std::size_t>(k + M);
    if (k >= 0) {
      const Vec yd = ydot.value(static_cast<std::size_t>(k));
      fp.set(j, yd - in.g_plus(k));
      fm.set(j, yd - in.g_minus(k));
    } else {
      fp.set(j, 0.5 * (in.v0(-k - 1) - in.du0(-k - 1)));
      fm.set(j, 0.5 * (in.v0(k) + in.du0(k)));
    }
  }
  return ForwardRun{model, state, static_cast<double>(K) * h, Trajectory(std::move(y)), std::move(w_in),
                    std::move(fp), std::move(fm)};
}

GridFunction coupling_balance(const ForwardRun& run) {
  const GridFunction& y = run.y.y();
  const GridFunction du0 = slopes(run.source.u0());
  const IncomingProfiles in{CellLookup(du0), CellLookup(run.source.v0())};
  const CellLookup fp(run.f_plus_out);
  const CellLookup fm(run.f_minus_out);
  GridFunction out(0.0, y.h(), y.size() - 1, y.dim(), Centering::Cell);
  for (std::size_t i = 0; i + 1 < y.size(); ++i) {
    const long k = static_cast<long>(i);
    const Vec F = 0.5 * (run.model.force(y.value(i)) + run.model.force(y.value(i + 1)));
    const Vec du_right = -fp(k) + in.g_plus(k);
    const Vec du_left = fm(k) - in.g_minus(k);
    out.set(i, F + du_right - du_left);
  }
  return out;
}

EnergyState free_field(const AsymptoticState& psi, double t) {
  const SymmetricWindow w = psi.window();
  if (std::fabs(t) > w.length() * (1.0 + 1e-12)) throw Error(ErrorCode::WindowError, "|t| exceeds the window");
  const long shift = static_cast<long>(steps_in(std::fabs(t), w.h())) * (t < 0.0 ? -1 : 1);
  const long M = static_cast<long>(w.half());
  const std::size_t n = psi.dim();
  const double h = w.h();

  // Running integral of Psi1 from -L to node j, extended by 0 and the total.
  const GridFunction P = cumulative_integral(psi.psi1(), Vec::Zero(static_cast<Eigen::Index>(n)));
  auto running = [&](long j) -> Vec {
    if (j <= -M) return P.value(0);
    if (j >= M) return P.value(P.size() - 1);
    return P.value(static_cast<std::size_t>(j + M));
  };

  GridFunction u(-w.length(), h, 2 * static_cast<std::size_t>(M) + 1, n, Centering::Node);
  GridFunction v(-w.length(), h, 2 * static_cast<std::size_t>(M), n, Centering::Cell);
  for (long k = -M; k <= M; ++k) {
    const Vec pos = 0.5 * (psi.psi0_at(k - shift) + psi.psi0_at(k + shift)) +
                    0.5 * (running(k + shift) - running(k - shift));
    u.set(static_cast<std::size_t>(k + M), pos);
  }
  for (long k = -M; k < M; ++k) {
    const Vec vel = 0.5 * (psi.psi0_slope(k + shift) - psi.psi0_slope(k - shift)) +
                    0.5 * (psi.psi1_cell(k + shift) + psi.psi1_cell(k - shift));
    v.set(static_cast<std::size_t>(k + M), vel);
  }
  Vec mean = v.integral();
  return {std::move(u), std::move(v), psi.psi0_plus(), psi.psi0_minus(), std::move(mean)};
}

ScatteringData extract_scattering(const ForwardRun& run, std::size_t curve_points) {
  const GridFunction& y = run.y.y();
  const Vec y_end = y.value(y.size() - 1);
  auto [zero, dist] = run.model.nearest_zero(y_end);
  if (!(dist <= kConvergenceTolerance)) {
    throw Error(ErrorCode::NoConvergence, "y(T_max) is " + std::to_string(dist) + " from the nearest zero");
  }
  const double h = y.h();
  const auto K = static_cast<long>(y.size() - 1);
  const std::size_t n = y.dim();
  const CellLookup fp(run.f_plus_out);
  const CellLookup fm(run.f_minus_out);

  GridFunction psi1(-run.t_max, h, 2 * static_cast<std::size_t>(K), n, Centering::Cell);
  GridFunction slope(-run.t_max, h, 2 * static_cast<std::size_t>(K), n, Centering::Cell);
  for (long k = -K; k < K; ++k) {
    const auto j = static_cast<std::size_t>(k + K);
    psi1.set(j, fm(k) + fp(-k - 1));
    slope.set(j, fm(k) - fp(-k - 1));
  }
  GridFunction psi0(-run.t_max, h, 2 * static_cast<std::size_t>(K) + 1, n, Centering::Node);
  Vec cur = run.source.u0_plus() - zero;
  psi0.set(psi0.size() - 1, cur);
  for (std::size_t i = slope.size(); i-- > 0;) {
    cur -= h * slope.value(i);
    psi0.set(i, cur);
  }
  Vec plus = psi0.value(psi0.size() - 1);
  Vec minus = psi0.value(0);
  const double mismatch = (minus - (run.source.u0_minus() - zero)).norm();

  ScatteringData data{StationaryState{zero},
                      AsymptoticState(std::move(psi0), std::move(psi1), std::move(plus), std::move(minus)),
                      GridFunction(0.0, h, 1, 1), mismatch};

  if (curve_points >= 2) {
    const std::size_t stride = std::max<std::size_t>(1, static_cast<std::size_t>(K) / (curve_points - 1));
    const std::size_t count = static_cast<std::size_t>(K) / stride + 1;
    GridFunction curve(0.0, static_cast<double>(stride) * h, count, 1, Centering::Node);
    for (std::size_t i = 0; i < count; ++i) {
      curve[i][0] = remainder_norm(run, data, static_cast<double>(i * stride) * h);
    }
    data.remainder_curve = std::move(curve);
  }
  return data;
}

double remainder_norm(const ForwardRun& run, const ScatteringData& data, double t) {
  const GridFunction& y = run.y.y();
  const double h = y.h();
  if (t < 0.0 || t > run.t_max * (1.0 + 1e-12)) throw Error(ErrorCode::WindowError, "t outside [0, T_max]");
  const auto n_t = static_cast<long>(steps_in(t, h));
  const SymmetricWindow win = run.source.window();
  const long M = static_cast<long>(win.half());
  const std::size_t n = y.dim();

  const GridFunction du0 = slopes(run.source.u0());
  const IncomingProfiles in{CellLookup(du0), CellLookup(run.source.v0())};
  const CellLookup fp(run.f_plus_out);
  const CellLookup fm(run.f_minus_out);
  const AsymptoticState& psi = data.psi_plus;
  const CellLookup psi1(psi.psi1());
  const GridFunction psi_slope = slopes(psi.psi0());
  const CellLookup dpsi0(psi_slope);

  // Incoming profiles vanish beyond the initial window.
  auto g_plus = [&](long s) -> Vec { return s < M ? in.g_plus(s) : Vec::Zero(static_cast<Eigen::Index>(n)); };
  auto g_minus = [&](long s) -> Vec { return s < M ? in.g_minus(s) : Vec::Zero(static_cast<Eigen::Index>(n)); };

  double du2 = 0.0;
  double dv2 = 0.0;
  const long reach = M + n_t;
  for (long k = -reach; k < reach; ++k) {
    Vec ut, ux;
    if (k >= 0) {
      const Vec out = fp(n_t - k - 1);
      const Vec inc = g_plus(n_t + k);
      ut = out + inc;
      ux = -out + inc;
    } else {
      const Vec out = fm(n_t + k);
      const Vec inc = g_minus(n_t - k - 1);
      ut = out + inc;
      ux = out - inc;
    }
    const Vec a = dpsi0(k - n_t);
    const Vec b = dpsi0(k + n_t);
    const Vec p = psi1(k + n_t);
    const Vec q = psi1(k - n_t);
    ut -= 0.5 * (-a + b) + 0.5 * (p + q);
    ux -= 0.5 * (a + b) + 0.5 * (p - q);
    du2 += ux.squaredNorm();
    dv2 += ut.squaredNorm();
  }
  const SymmetricWindow pw = psi.window();
  Vec running = Vec::Zero(static_cast<Eigen::Index>(n));
  for (long j = 0; j < n_t; ++j) running += h * (psi1(j) + psi1(-j - 1));
  const Vec S = 0.5 * (pw.node(psi.psi0(), n_t, psi.psi0_minus(), psi.psi0_plus()) +
                       pw.node(psi.psi0(), -n_t, psi.psi0_minus(), psi.psi0_plus())) +
                0.5 * running;
  const double d0 = (y.value(static_cast<std::size_t>(n_t)) - data.s_plus.s - S).norm();
  return std::sqrt(h * du2) + d0 + std::sqrt(h * dv2);
}

GridFunction matching_drive(const ForceModel& model, const GridFunction& y) {
  const double h = y.h();
  GridFunction w(y.t0(), h, y.size() - 1, y.dim(), Centering::Cell);
  for (std::size_t i = 0; i + 1 < y.size(); ++i) {
    const Vec lo = y.value(i);
    const Vec hi = y.value(i + 1);
    Vec drive = (hi - lo) / h - 0.25 * (model.force(lo) + model.force(hi));
    double last = std::numeric_limits<double>::infinity();
    for (int it = 0; it < 50; ++it) {
      const Vec miss = rk4_forward(model, lo, drive, h) - hi;
      const double size = miss.norm();
      if (size == 0.0 || size >= last) break;
      last = size;
      drive -= miss / h;
    }
    w.set(i, drive);
  }
  return w;
}

EnergyState reconstruct_initial(const ForceModel& model, const Trajectory& traj, const AsymptoticState& psi,
                                const Vec& s_plus, const ReconstructOptions& options) {
  const GridFunction& y = traj.y();
  const double h = y.h();
  if (std::fabs(y.t0()) > 1e-12 || std::fabs(psi.psi0().h() - h) > 1e-14 * h) {
    throw Error(ErrorCode::GridError, "trajectory must start at 0 on the grid of psi");
  }
  const double L = y.t_end();
  const GridFunction forcing = cell_forcing(build_S(psi, L).S);
  const double residual = inverse_residual(model, y, forcing).l2_norm();
  if (!(residual <= options.residual_tolerance)) {
    throw Error(ErrorCode::InconsistentInput,
                "trajectory does not solve the inverse reduced equation (residual " + std::to_string(residual) + ")");
  }
  (void)s_plus;

  const GridFunction w = matching_drive(model, y);
  const auto M = static_cast<long>(y.size() - 1);
  const std::size_t n = y.dim();
  auto ydot = [&](long k) -> Vec { return 0.5 * (w.value(static_cast<std::size_t>(k)) + forcing.value(static_cast<std::size_t>(k))); };
  // Free outgoing profile derivatives of psi on cell k.
  auto f_plus = [&](long k) -> Vec { return 0.5 * (-psi.psi0_slope(-k - 1) + psi.psi1_cell(-k - 1)); };
  auto f_minus = [&](long k) -> Vec { return 0.5 * (psi.psi0_slope(k) + psi.psi1_cell(k)); };

  GridFunction du(-L, h, 2 * static_cast<std::size_t>(M), n, Centering::Cell);
  GridFunction v(-L, h, 2 * static_cast<std::size_t>(M), n, Centering::Cell);
  for (long k = 0; k < M; ++k) {
    const Vec yd = ydot(k);
    const Vec out_here = f_plus(k);
    const Vec out_mirror = f_plus(-k - 1);
    const auto right = static_cast<std::size_t>(M + k);
    v.set(right, out_mirror + yd - out_here);
    du.set(right, -out_mirror + yd - out_here);
    const long j = -k - 1;
    const auto left = static_cast<std::size_t>(M + j);
    v.set(left, f_minus(j) + yd - f_minus(k));
    du.set(left, f_minus(j) - yd + f_minus(k));
  }
  GridFunction u(-L, h, 2 * static_cast<std::size_t>(M) + 1, n, Centering::Node);
  u.set(static_cast<std::size_t>(M), y.value(0));
  for (long k = 0; k < M; ++k) {
    const auto i = static_cast<std::size_t>(M + k);
    u.set(i + 1, u.value(i) + h * du.value(i));
    const auto l = static_cast<std::size_t>(M - k);
    u.set(l - 1, u.value(l) - h * du.value(l - 1));
  }
  return EnergyState::from_samples(std::move(u), std::move(v));
}

}  // namespace lamb
