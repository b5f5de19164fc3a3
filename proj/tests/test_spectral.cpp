#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "lamb/error.hpp"
#include "lamb/spectral.hpp"

using namespace lamb;

namespace {

Mat diag(std::initializer_list<double> d) {
  Vec v(static_cast<Eigen::Index>(d.size()));
  Eigen::Index i = 0;
  for (double x : d) v[i++] = x;
  return v.asDiagonal();
}

// Taylor series in long double, summed until the terms vanish; only used on
// small matrices with moderate norm.
Mat taylor_exp(const Mat& M) {
  using LMat = Eigen::Matrix<long double, Eigen::Dynamic, Eigen::Dynamic>;
  const LMat A = M.cast<long double>();
  LMat term = LMat::Identity(A.rows(), A.cols());
  LMat sum = term;
  for (int k = 1; k < 200; ++k) {
    term = term * A / static_cast<long double>(k);
    sum += term;
  }
  return sum.cast<double>();
}

}  // namespace

TEST(Matexp, Examples) {
  EXPECT_LT((matexp(Mat::Zero(3, 3)) - Mat::Identity(3, 3)).norm(), 1e-15);
  const Mat e = matexp(diag({0.3, -2.0}));
  EXPECT_NEAR(e(0, 0), std::exp(0.3), 1e-15);
  EXPECT_NEAR(e(1, 1), std::exp(-2.0), 1e-16);
  Mat n(2, 2);
  n << 0, 1, 0, 0;
  const Mat en = matexp(n);
  EXPECT_LT((en - (Mat(2, 2) << 1, 1, 0, 1).finished()).norm(), 1e-15);
}

TEST(Matexp, RelativeErrorOnRandomMatrices) {
  std::mt19937_64 rng(11);
  std::normal_distribution<double> d;
  for (double scale : {1e-3, 0.1, 1.0, 3.0}) {
    for (int trial = 0; trial < 5; ++trial) {
      Mat M(4, 4);
      for (Eigen::Index i = 0; i < M.size(); ++i) M.data()[i] = scale * d(rng);
      const Mat ref = taylor_exp(M);
      EXPECT_LT((matexp(M) - ref).norm() / ref.norm(), 1e-12) << scale;
    }
  }
}

TEST(Split, DiagonalExample) {
  const HyperbolicSplit s = hyperbolic_split(diag({2.0, -1.0}));
  EXPECT_LT((s.P_plus() - diag({1, 0})).norm(), 1e-14);
  EXPECT_LT((s.P_minus() - diag({0, 1})).norm(), 1e-14);
  EXPECT_NEAR(s.eps(), 0.9, 1e-15);
  EXPECT_EQ(s.stable_dim(), 1u);
}

TEST(Split, NonNormalExample) {
  Mat B(2, 2);
  B << 0, 1, 2, 1;
  const HyperbolicSplit s = hyperbolic_split(B);
  const Mat I = Mat::Identity(2, 2);
  EXPECT_LT((s.P_plus() - (B + I) / 3.0).norm(), 1e-13);
  EXPECT_LT((s.P_minus() - (2.0 * I - B) / 3.0).norm(), 1e-13);
  EXPECT_LT(s.projector_defect(), 1e-12);
}

TEST(Split, NotHyperbolic) {
  try {
    (void)hyperbolic_split(diag({0.0, 1.0}));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::NotHyperbolic);
  }
  Mat rot(2, 2);
  rot << 0, -1, 1, 0;  // eigenvalues +-i
  EXPECT_THROW((void)hyperbolic_split(rot), Error);
}

TEST(Split, RandomHyperbolicMatrices) {
  std::mt19937_64 rng(3);
  std::normal_distribution<double> d;
  std::uniform_real_distribution<double> mag(0.2, 2.0);
  for (int trial = 0; trial < 25; ++trial) {
    const int n = 2 + trial % 5;
    Vec lam(n);
    for (int i = 0; i < n; ++i) lam[i] = (i % 2 == 0 ? -1.0 : 1.0) * mag(rng);
    Mat X(n, n);
    for (Eigen::Index i = 0; i < X.size(); ++i) X.data()[i] = d(rng);
    X += 3.0 * Mat::Identity(n, n);
    const Mat B = X * lam.asDiagonal() * X.inverse();
    const HyperbolicSplit s = hyperbolic_split(B);
    const double scale = 1.0 + op_norm(X) * op_norm(X.inverse());
    EXPECT_LT(s.projector_defect(), 1e-10 * scale) << trial;
    EXPECT_EQ(s.stable_dim(), static_cast<std::size_t>((n + 1) / 2));
    for (Eigen::Index i = 0; i < s.eigenvalues().size(); ++i) EXPECT_GT(std::fabs(s.eigenvalues()[i].real()), s.eps());
    // projector from eigenvectors
    Vec keep = Vec::Zero(n);
    for (int i = 0; i < n; ++i) keep[i] = lam[i] < 0 ? 1.0 : 0.0;
    const Mat Pm = X * keep.asDiagonal() * X.inverse();
    EXPECT_LT((s.P_minus() - Pm).norm(), 1e-9 * scale) << trial;
  }
}

TEST(FundamentalSolution, DiagonalExamples) {
  const HyperbolicSplit s = hyperbolic_split(diag({2.0, -1.0}));
  EXPECT_LT((fundamental_solution(s, 1.0) - diag({0.0, std::exp(-1.0)})).norm(), 1e-15);
  EXPECT_LT((fundamental_solution(s, -1.0) + diag({std::exp(-2.0), 0.0})).norm(), 1e-15);
  EXPECT_LT((fundamental_solution(s, 0.0) - fundamental_solution(s, -1e-300) - Mat::Identity(2, 2)).norm(), 1e-14);
}

TEST(FundamentalSolution, DecayBoundOnDenseSamples) {
  Mat B(3, 3);
  B << -1, 5, 0, 0, -0.5, 2, 0, 0, 0.7;
  const HyperbolicSplit s = hyperbolic_split(B);
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(-50.0 / s.eps(), 50.0 / s.eps());
  for (int i = 0; i < 2000; ++i) {
    const double t = u(rng);
    EXPECT_LE(op_norm(fundamental_solution(s, t)), s.C() * std::exp(-s.eps() * std::fabs(t)) * (1 + 1e-12)) << t;
  }
}

TEST(FundamentalSolution, SatisfiesTheLinearOde) {
  Mat B(2, 2);
  B << 0, 1, 2, 1;
  const HyperbolicSplit s = hyperbolic_split(B);
  const double d = 1e-4;
  for (double t : {-3.0, -0.5, 0.25, 2.0}) {
    const Mat fd = (fundamental_solution(s, t + d) - fundamental_solution(s, t - d)) / (2 * d);
    EXPECT_LT((fd - B * fundamental_solution(s, t)).norm(), 1e-7) << t;
  }
}

TEST(FundamentalSolution, LargeTimesStayFinite) {
  const HyperbolicSplit s = hyperbolic_split(diag({30.0, -30.0}));
  EXPECT_TRUE(fundamental_solution(s, 100.0).allFinite());
  EXPECT_TRUE(fundamental_solution(s, -100.0).allFinite());
}
