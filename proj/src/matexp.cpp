#include <array>
#include <cmath>

#include "lamb/spectral.hpp"

namespace lamb {

namespace {

constexpr std::array<double, 4> kPade3 = {120.0, 60.0, 12.0, 1.0};
constexpr std::array<double, 6> kPade5 = {30240.0, 15120.0, 3360.0, 420.0, 30.0, 1.0};
constexpr std::array<double, 8> kPade7 = {17297280.0, 8648640.0, 1995840.0, 277200.0,
                                          25200.0,    1512.0,    56.0,      1.0};
constexpr std::array<double, 10> kPade9 = {17643225600.0, 8821612800.0, 2075673600.0,
                                           302702400.0,   30270240.0,   2162160.0,
                                           110880.0,      3960.0,       90.0,
                                           1.0};
constexpr std::array<double, 14> kPade13 = {
    64764752532480000.0, 32382376266240000.0, 7771770303897600.0, 1187353796428800.0,
    129060195264000.0,   10559470521600.0,    670442572800.0,     33522128640.0,
    1323241920.0,        40840800.0,          960960.0,           16380.0,
    182.0,               1.0};

// Largest 1-norms for which the degree-m approximant is accurate to unit
// roundoff without scaling.
constexpr double kTheta3 = 1.495585217958292e-2;
constexpr double kTheta5 = 2.539398330063230e-1;
constexpr double kTheta7 = 9.504178996162932e-1;
constexpr double kTheta9 = 2.097847961257068e0;
constexpr double kTheta13 = 5.371920351148152e0;

template <std::size_t N>
Mat pade_low(const Mat& A, const std::array<double, N>& b) {
  const Eigen::Index n = A.rows();
  const Mat I = Mat::Identity(n, n);
  const Mat A2 = A * A;
  Mat even = b[0] * I;
  Mat odd = b[1] * I;
  Mat power = I;
  for (std::size_t k = 2; k + 1 < N + 1; k += 2) {
    power = power * A2;
    even += b[k] * power;
    if (k + 1 < N) odd += b[k + 1] * power;
  }
  const Mat U = A * odd;
  return (even - U).partialPivLu().solve(even + U);
}

Mat pade13(const Mat& A) {
  const auto& b = kPade13;
  const Eigen::Index n = A.rows();
  const Mat I = Mat::Identity(n, n);
  const Mat A2 = A * A;
  const Mat A4 = A2 * A2;
  const Mat A6 = A4 * A2;
  const Mat U = A * (A6 * (b[13] * A6 + b[11] * A4 + b[9] * A2) + b[7] * A6 + b[5] * A4 +
                     b[3] * A2 + b[1] * I);
  const Mat V = A6 * (b[12] * A6 + b[10] * A4 + b[8] * A2) + b[6] * A6 + b[4] * A4 +
                b[2] * A2 + b[0] * I;
  return (V - U).partialPivLu().solve(V + U);
}

}  // namespace

Mat matexp(const Mat& M) {
  const Eigen::Index n = M.rows();
  if (n == 0) return M;
  const double norm1 = M.cwiseAbs().colwise().sum().maxCoeff();
  if (norm1 == 0.0) return Mat::Identity(n, n);
  if (norm1 <= kTheta3) return pade_low(M, kPade3);
  if (norm1 <= kTheta5) return pade_low(M, kPade5);
  if (norm1 <= kTheta7) return pade_low(M, kPade7);
  if (norm1 <= kTheta9) return pade_low(M, kPade9);
  int s = 0;
  if (norm1 > kTheta13) s = static_cast<int>(std::ceil(std::log2(norm1 / kTheta13)));
  Mat R = pade13(M / std::ldexp(1.0, s));
  for (int i = 0; i < s; ++i) R = R * R;
  return R;
}

double op_norm(const Mat& M) {
  if (M.size() == 0) return 0.0;
  Eigen::JacobiSVD<Mat> svd(M);
  return svd.singularValues()(0);
}

}  // namespace lamb
