#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <vector>

#include "lamb/kernels.hpp"

namespace k = lamb::kernels;

namespace {

std::vector<double> random_vector(std::size_t n, unsigned seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> d(0.0, 3.0);
  std::vector<double> v(n);
  for (double& x : v) x = d(rng);
  return v;
}

class KernelEquivalence : public ::testing::TestWithParam<std::size_t> {
 protected:
  void SetUp() override {
    if (!k::avx2_available()) GTEST_SKIP() << "no AVX2 on this CPU";
  }
};

}  // namespace

TEST_P(KernelEquivalence, SumSquares) {
  const auto x = random_vector(GetParam(), 1);
  const double a = k::scalar::sum_squares(x);
  EXPECT_NEAR(k::avx2::sum_squares(x), a, 1e-13 * (1.0 + a));
}

TEST_P(KernelEquivalence, Dot) {
  const auto x = random_vector(GetParam(), 2);
  const auto y = random_vector(GetParam(), 3);
  const double a = k::scalar::dot(x, y);
  EXPECT_NEAR(k::avx2::dot(x, y), a, 1e-13 * (1.0 + k::scalar::sum_squares(x) + k::scalar::sum_squares(y)));
}

TEST_P(KernelEquivalence, MaxAbsIsExact) {
  const auto x = random_vector(GetParam(), 4);
  EXPECT_EQ(k::avx2::max_abs(x), k::scalar::max_abs(x));
}

TEST_P(KernelEquivalence, AxpyIsExact) {
  const auto x = random_vector(GetParam(), 5);
  auto y1 = random_vector(GetParam(), 6);
  auto y2 = y1;
  k::scalar::axpy(-0.37, x, y1);
  k::avx2::axpy(-0.37, x, y2);
  for (std::size_t i = 0; i < y1.size(); ++i) EXPECT_NEAR(y1[i], y2[i], 1e-15 * (1.0 + std::fabs(y1[i])));
}

INSTANTIATE_TEST_SUITE_P(Lengths, KernelEquivalence, ::testing::Values(0, 1, 3, 4, 7, 8, 17, 1000, 4099));

TEST(KernelDispatch, ForcedScalarMatchesReference) {
  const auto x = random_vector(513, 9);
  k::force_isa(k::Isa::Scalar);
  EXPECT_EQ(k::active_isa(), k::Isa::Scalar);
  EXPECT_EQ(k::sum_squares(x), k::scalar::sum_squares(x));
  k::force_isa(k::avx2_available() ? k::Isa::Avx2 : k::Isa::Scalar);
  EXPECT_NEAR(k::sum_squares(x), k::scalar::sum_squares(x), 1e-12 * k::scalar::sum_squares(x));
}

TEST(KernelDispatch, MaxAbsHandlesNegativeZeroAndSign) {
  std::vector<double> x{-0.0, -5.0, 2.0, 4.999};
  EXPECT_EQ(k::max_abs(x), 5.0);
  EXPECT_EQ(k::scalar::max_abs(std::vector<double>{}), 0.0);
}
