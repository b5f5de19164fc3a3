#include <gtest/gtest.h>

#include <cmath>

#include "lamb/error.hpp"
#include "lamb/incoming.hpp"
#include "lamb/profiles.hpp"
#include "oracles.hpp"

using namespace lamb;

namespace {

template <class Fn>
ErrorCode code_of(Fn fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no error thrown";
  return ErrorCode::ConfigError;
}

GridFunction box_cells(double t_max, double h, double a, double b, const Vec& amp) {
  const std::size_t n = steps_in(t_max, h);
  return GridFunction::sample(0.0, h, n, static_cast<std::size_t>(amp.size()), [&](double t) -> Vec {
    return (t > a && t < b) ? amp : Vec::Zero(amp.size());
  }, Centering::Cell);
}

Vec v1(double x) { return Vec::Constant(1, x); }
Vec v2(double x, double y) { return (Vec(2) << x, y).finished(); }

}  // namespace

TEST(Decompose, Examples) {
  const Decomposition lin = decompose_force(ForceModel(ForceKind::Linear), {v1(0)});
  EXPECT_EQ(lin.A()(0, 0), -1.0);
  EXPECT_EQ(lin.remainder(v1(0.7))[0], 0.0);

  const Decomposition cub = decompose_force(ForceModel(ForceKind::Cubic1d, {1.0, 1.0}), {v1(0)});
  EXPECT_EQ(cub.A()(0, 0), -1.0);
  EXPECT_NEAR(cub.remainder(v1(0.5))[0], -0.125, 1e-15);

  const Decomposition dw = decompose_force(ForceModel(ForceKind::DoubleWell2d), {v2(0, 0)});
  EXPECT_LT((dw.A() - v2(1, -1).asDiagonal().toDenseMatrix()).norm(), 1e-15);
  EXPECT_LT((dw.remainder(v2(0.3, 0.2)) - v2(-0.027, 0)).norm(), 1e-15);
  EXPECT_EQ(dw.remainder(Vec::Zero(2)).norm(), 0.0);
  EXPECT_EQ(dw.remainder_jacobian(Vec::Zero(2)).norm(), 0.0);
}

TEST(Decompose, NotStationary) {
  EXPECT_EQ(code_of([] { (void)decompose_force(ForceModel(ForceKind::DoubleWell2d), {v2(0.5, 0)}); }),
            ErrorCode::NotStationary);
}

TEST(Nemytskii, DerivativeVanishesAtZeroAndIsFrechet) {
  const Decomposition d = decompose_force(ForceModel(ForceKind::DoubleWell2d), {v2(1, 0)});
  const double h = 1e-2;
  const GridFunction zero(0.0, h, 1001, 2);
  const GridFunction dir = GridFunction::sample(0.0, h, 1001, 2, [](double t) {
    return v2(std::exp(-t) * std::cos(t), 0.5 * std::exp(-0.5 * t));
  });
  EXPECT_LE(nemytskii_derivative(d, zero, dir).y_norm(), 1e-10);

  const GridFunction y = GridFunction::sample(0.0, h, 1001, 2, [](double t) {
    return v2(0.2 * std::exp(-t), 0.1 * std::sin(t) * std::exp(-t));
  });
  std::vector<double> ratios;
  for (double delta : {1e-1, 1e-2, 1e-3, 1e-4}) {
    GridFunction step = delta * dir;
    GridFunction rem = nemytskii(d, y + step) - nemytskii(d, y) - nemytskii_derivative(d, y, step);
    ratios.push_back(rem.y_norm() / step.y_norm());
  }
  for (std::size_t i = 1; i < ratios.size(); ++i) {
    EXPECT_NEAR(std::log10(ratios[i - 1] / ratios[i]), 1.0, 0.1);
  }
}

TEST(ChooseT, Examples) {
  EXPECT_EQ(choose_T(GridFunction(0.0, 1e-3, 10000, 1, Centering::Cell), 0.5), 0.0);
  EXPECT_NEAR(choose_T(box_cells(10.0, 1e-3, 0.0, 1.0, v1(1.0)), 0.5), 0.75, 1e-12);
  // tail of 1/(1+t) on [T, 4000]: 1/(1+T) - 1/4001
  const GridFunction f = GridFunction::sample(0.0, 1e-2, 400001, 1, [](double t) { return v1(1.0 / (1.0 + t)); });
  const double want = 1.0 / (0.25 + 1.0 / 4001.0) - 1.0;
  EXPECT_NEAR(choose_T(f, 0.5), want, 0.011);
  EXPECT_NEAR(want, 3.0, 0.02);
}

TEST(ChooseT, CannotLocalize) {
  EXPECT_EQ(code_of([] { (void)choose_T(box_cells(2.0, 1e-3, 0.0, 2.0, v1(1.0)), 0.5); }),
            ErrorCode::CannotLocalize);
}

TEST(SolveTail, ZeroForcingAndLinearModel) {
  const double h = 1e-3;
  {
    const Decomposition d = decompose_force(ForceModel(ForceKind::Cubic1d), {v1(0)});
    const GreenOperator R(hyperbolic_split(-0.5 * d.A()), h);
    const TailSolution t = solve_tail(R, d, GridFunction(0.0, h, 5000, 1, Centering::Cell), 0.0);
    EXPECT_EQ(t.y.sup_norm(), 0.0);
    EXPECT_TRUE(t.converged);
  }
  {
    const Decomposition d = decompose_force(ForceModel(ForceKind::Linear), {v1(0)});
    const HyperbolicSplit s = hyperbolic_split(-0.5 * d.A());
    const GridFunction f = box_cells(5.0, h, 1.0, 2.0, v1(0.3));
    const TailSolution t = solve_tail(GreenOperator(s, h), d, f, 0.0);
    EXPECT_EQ(t.iterations, 1);
    EXPECT_EQ((t.y - apply_R(s, f)).sup_norm(), 0.0);
  }
}

TEST(SolveTail, CubicAgreesWithShooting) {
  const double h = 1e-3;
  const ForceModel m(ForceKind::Cubic1d, {1.0, 1.0});
  const Decomposition d = decompose_force(m, {v1(0)});
  const GreenOperator R(hyperbolic_split(-0.5 * d.A()), h);
  const double amp = 0.2;
  const TailSolution t = solve_tail(R, d, box_cells(6.0, h, 1.0, 2.0, v1(amp)), 0.0);
  ASSERT_TRUE(t.converged);
  EXPECT_LT(t.contraction_ratio, 1.0);
  // w' = w/2 + w^3/2 + f, w = 0 after the forcing stops
  using State = std::array<double, 1>;
  auto rhs = [](double c) {
    return [c](double, const State& w) { return State{0.5 * w[0] + 0.5 * w[0] * w[0] * w[0] + c}; };
  };
  const State at1 = oracle::integrate_ode(rhs(amp), State{0.0}, 2.0, 1.0);
  const State at0 = oracle::integrate_ode(rhs(0.0), at1, 1.0, 0.0);
  const State at15 = oracle::integrate_ode(rhs(amp), State{0.0}, 2.0, 1.5);
  EXPECT_NEAR(t.y(1000), at1[0], 1e-6);
  EXPECT_NEAR(t.y(0), at0[0], 1e-6);
  EXPECT_NEAR(t.y(1500), at15[0], 1e-6);
  EXPECT_EQ(t.y(2500), 0.0);
}

TEST(SolveTail, StartsReachTheSameFixedPoint) {
  const double h = 1e-3;
  const Decomposition d = decompose_force(ForceModel(ForceKind::Cubic1d), {v1(0)});
  const GreenOperator R(hyperbolic_split(-0.5 * d.A()), h);
  const GridFunction f = box_cells(6.0, h, 1.0, 2.0, v1(0.2));
  TailOptions o;
  o.start = PicardStart::LinearResponse;
  const TailSolution a = solve_tail(R, d, f, 0.0, o);
  o.start = PicardStart::Perturbed;
  const TailSolution b = solve_tail(R, d, f, 0.0, o);
  o.start = PicardStart::Zero;
  const TailSolution c = solve_tail(R, d, f, 0.0, o);
  ASSERT_TRUE(a.converged && b.converged && c.converged);
  EXPECT_GT(b.differences.front(), a.differences.front());
  EXPECT_LE((a.y - b.y).y_norm(), 1e-9);
  EXPECT_LE((a.y - c.y).y_norm(), 1e-9);
}

TEST(SolveTail, DivergesOutsideTheRadius) {
  const double h = 1e-3;
  const Decomposition d = decompose_force(ForceModel(ForceKind::DoubleWell2d), {v2(0, 0)});
  const GreenOperator R(hyperbolic_split(-0.5 * d.A()), h);
  TailOptions o;
  o.radius = 0.5;
  EXPECT_EQ(code_of([&] { (void)solve_tail(R, d, box_cells(6.0, h, 0.0, 2.0, v2(3.0, 0)), 0.0, o); }),
            ErrorCode::Diverged);
}

TEST(BackwardContinue, Examples) {
  const double h = 1e-3;
  const ForceModel lin(ForceKind::Linear);
  const GridFunction none(0.0, h, 1000, 1, Centering::Cell);
  const BackwardContinuation s = backward_continue(lin, none, v1(0.0), 1.0);
  EXPECT_EQ(s.y.sup_norm(), 0.0);
  const BackwardContinuation b = backward_continue(lin, none, v1(0.1), 1.0);
  for (std::size_t i = 0; i < b.y.size(); i += 100) EXPECT_NEAR(b.y(i), 0.1 * std::exp((b.y.time(i) - 1.0) / 2.0), 1e-13);
  EXPECT_NEAR(b.y(0), 0.060653, 1e-6);
}

TEST(BackwardContinue, EnergyEstimateForDoubleWell) {
  const double h = 1e-3;
  const ForceModel dw(ForceKind::DoubleWell2d);
  const GridFunction f = box_cells(3.0, h, 0.5, 2.0, v2(0.3, -0.2));
  const BackwardContinuation b = backward_continue(dw, f, v2(0.1, 0.05), 3.0);
  ASSERT_TRUE(b.energy_slack.has_value());
  EXPECT_LE(*b.energy_slack, 1e-4);
}

TEST(BackwardContinue, BlowUp) {
  // F = y^2: y' = -y^2/2 from y(10) = 1 gives y = 2/(t - 8).
  const ForceModel p(ForceKind::Polynomial, {0.0, 0.0, 1.0});
  const GridFunction none(0.0, 1e-3, 10000, 1, Centering::Cell);
  EXPECT_EQ(code_of([&] { (void)backward_continue(p, none, v1(1.0), 10.0); }), ErrorCode::BlowUp);
}

TEST(ConstructIncoming, ZeroState) {
  const IncomingSolution s =
      construct_incoming(ForceModel(ForceKind::DoubleWell2d), {v2(1, 0)}, AsymptoticState::zero(2, 5.0, 1e-3), 5.0);
  EXPECT_EQ((s.trajectory.y() - GridFunction::sample(0.0, 1e-3, 5001, 2, [](double) { return v2(1, 0); })).sup_norm(), 0.0);
  EXPECT_EQ(s.residual_l2, 0.0);
}

TEST(ConstructIncoming, LinearClosedForm) {
  const Composite p0{{Shape::Constant, 0, 1, v1(1.0)}};
  const Composite p1{{Shape::Box, 0, 1, v1(-1.0)}};
  const AsymptoticState psi = make_asymptotic_state(p0, p1, 4.0, 1e-3, 1);
  const IncomingSolution s = construct_incoming(ForceModel(ForceKind::Linear), {v1(0)}, psi, 4.0);
  EXPECT_NEAR(s.trajectory.y()(0), 2.0 * (1.0 - std::exp(-0.5)), 1e-12);
  EXPECT_NEAR(s.trajectory.y()(0), 0.78694, 1e-5);
  EXPECT_EQ(s.trajectory.y()(2000), 0.0);
}

TEST(ConstructIncoming, DoubleWellSaddle) {
  const Composite p0{{Shape::Box, 0.3, 0.5, v2(0.05, -0.025)}};
  const Composite p1{{Shape::Box, -0.2, 0.6, v2(-0.035, 0.02)}};
  const AsymptoticState psi = make_asymptotic_state(p0, p1, 20.0, 1e-3, 2, true);
  const IncomingSolution s = construct_incoming(ForceModel(ForceKind::DoubleWell2d), {v2(0, 0)}, psi, 20.0);
  EXPECT_LE(s.residual_l2, 1e-6);
  EXPECT_LE(s.terminal_gap, 1e-6);
  ASSERT_TRUE(s.uniqueness_gap.has_value());
  EXPECT_LE(*s.uniqueness_gap, 1e-8);
}

TEST(ConstructIncoming, SmoothDataGluesSmoothly) {
  const Composite p0{{Shape::Gaussian, 0, 0.5, v2(0.04, 0.03)}};
  const Composite p1{{Shape::Gaussian, 0.5, 0.7, v2(-0.03, 0.05)}};
  double ydot_norm[2];
  for (int level = 0; level < 2; ++level) {
    const double h = 1e-3 / (1 + level);
    const AsymptoticState psi = make_asymptotic_state(p0, p1, 12.0, h, 2, true);
    const IncomingSolution s = construct_incoming(ForceModel(ForceKind::DoubleWell2d), {v2(1, 0)}, psi, 12.0);
    EXPECT_GT(s.T, 0.0);
    EXPECT_LE(s.glue_derivative_jump, 10.0 * h * h);
    EXPECT_LT(s.contraction_ratio, 1.0);
    EXPECT_GT(s.picard_iterations, 1);
    ydot_norm[level] = s.trajectory.l2_norm_ydot();
  }
  EXPECT_TRUE(std::isfinite(ydot_norm[0]));
  EXPECT_NEAR(ydot_norm[0], ydot_norm[1], 1e-5 * ydot_norm[0]);
}

TEST(ConstructIncoming, Errors) {
  const AsymptoticState psi = make_asymptotic_state({{Shape::Box, 0, 0.5, v1(0.1)}}, {}, 5.0, 1e-3, 1, true);
  EXPECT_EQ(code_of([&] { (void)construct_incoming(ForceModel(ForceKind::FlatCore), {v1(0)}, psi, 5.0); }),
            ErrorCode::NotHyperbolic);
  const AsymptoticState bad = make_asymptotic_state({{Shape::Constant, 0, 1, v1(1.0)}}, {}, 5.0, 1e-3, 1);
  EXPECT_EQ(code_of([&] { (void)construct_incoming(ForceModel(ForceKind::Linear), {v1(0)}, bad, 5.0); }),
            ErrorCode::InconsistentInput);
}

TEST(Counterexample, Flat) {
  const CounterexampleReport r = run_counterexample(CounterexampleKind::Flat, -0.4, 10.0);
  ASSERT_TRUE(r.exit_time.has_value());
  EXPECT_NEAR(*r.exit_time, std::exp(1.4) - 1.0, 1e-6);
  EXPECT_LE(r.log_fit_deviation, 1e-9);
  EXPECT_NEAR(r.log_fit_constant, -0.4, 1e-9);
}

TEST(Counterexample, QuadraticLeavesBeforeTheFlatCase) {
  const CounterexampleReport r = run_counterexample(CounterexampleKind::Quadratic, 0.0, 10.0);
  ASSERT_TRUE(r.exit_time.has_value());
  EXPECT_LT(*r.exit_time, std::exp(1.0) - 1.0);
  for (std::size_t i = 0; i < r.y.size(); ++i) EXPECT_GE(r.y(i), std::log1p(r.y.time(i)) - 1e-12);
  // y' = y^2 + 1/(1+t) from an adaptive integrator, stopped at the reported time
  using State = std::array<double, 1>;
  auto rhs = [](double t, const State& y) { return State{y[0] * y[0] + 1.0 / (1.0 + t)}; };
  const State at_exit = oracle::integrate_ode(rhs, State{0.0}, 0.0, *r.exit_time);
  EXPECT_NEAR(at_exit[0], 1.0, 1e-6);
}

TEST(Counterexample, HyperbolicControlMatchesTheExponentialIntegral) {
  const double T = 40.0;
  const CounterexampleReport r = run_counterexample(CounterexampleKind::HyperbolicControl, 0.3, T);
  EXPECT_FALSE(r.exit_time.has_value());
  for (double t : {0.0, 1.0, 5.0, 20.0, 39.0}) {
    EXPECT_NEAR(r.y(static_cast<std::size_t>(std::lround(t / 1e-3))), oracle::unstable_log_response(t, T), 1e-7) << t;
  }
  EXPECT_LT(r.tail_max, 0.06);
}

TEST(Counterexample, Names) {
  EXPECT_EQ(parse_counterexample_kind("hyperbolic-control"), CounterexampleKind::HyperbolicControl);
  EXPECT_EQ(counterexample_kind_name(CounterexampleKind::Quadratic), "quadratic");
  EXPECT_THROW((void)parse_counterexample_kind("cubic"), Error);
}
