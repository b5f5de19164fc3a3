#include "lamb/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include <lapacke.h>

#include "lamb/error.hpp"

namespace lamb {

namespace {

lapack_logical select_stable(const double* re, const double* /*im*/) { return *re < 0.0 ? 1 : 0; }

DichotomyBasis ordered_basis(const Mat& B, Eigen::VectorXcd& eigenvalues) {
  const auto n = static_cast<lapack_int>(B.rows());
  Mat T = B;
  Mat Q(n, n);
  std::vector<double> wr(static_cast<std::size_t>(n)), wi(static_cast<std::size_t>(n));
  lapack_int sdim = 0;
  const lapack_int info = LAPACKE_dgees(LAPACK_COL_MAJOR, 'V', 'S', select_stable, n, T.data(), n,
                                        &sdim, wr.data(), wi.data(), Q.data(), n);
  if (info != 0) {
    throw Error(ErrorCode::NotHyperbolic,
                "ordered real Schur decomposition failed (info " + std::to_string(info) + ")");
  }
  eigenvalues.resize(n);
  for (lapack_int i = 0; i < n; ++i) eigenvalues[i] = {wr[static_cast<std::size_t>(i)], wi[static_cast<std::size_t>(i)]};

  const lapack_int k = sdim;
  const lapack_int m = n - k;
  DichotomyBasis basis;
  basis.stable_dim = static_cast<std::size_t>(k);
  basis.stable_block = T.topLeftCorner(k, k);
  basis.unstable_block = T.bottomRightCorner(m, m);

  // Decouple the blocks: T11 X - X T22 = -T12, then
  // diag(T11, T22) = S^{-1} T S with S = [[I, X], [0, I]].
  Mat X = Mat::Zero(k, m);
  if (k > 0 && m > 0) {
    Mat T11 = basis.stable_block;
    Mat T22 = basis.unstable_block;
    X = -T.topRightCorner(k, m);
    double scale = 1.0;
    const lapack_int sinfo = LAPACKE_dtrsyl(LAPACK_COL_MAJOR, 'N', 'N', -1, k, m, T11.data(), k,
                                            T22.data(), m, X.data(), k, &scale);
    if (sinfo < 0) throw Error(ErrorCode::NotHyperbolic, "Sylvester solve failed");
    X /= scale;
  }
  Mat S = Mat::Identity(n, n);
  Mat S_inv = Mat::Identity(n, n);
  S.topRightCorner(k, m) = X;
  S_inv.topRightCorner(k, m) = -X;
  basis.V = Q * S;
  basis.V_inv = S_inv * Q.transpose();
  return basis;
}

Mat block_flow(const DichotomyBasis& b, double t, bool stable) {
  const auto n = b.V.rows();
  const auto k = static_cast<Eigen::Index>(b.stable_dim);
  if (stable) {
    if (k == 0) return Mat::Zero(n, n);
    return b.V.leftCols(k) * matexp(b.stable_block * t) * b.V_inv.topRows(k);
  }
  const auto m = n - k;
  if (m == 0) return Mat::Zero(n, n);
  return b.V.rightCols(m) * matexp(b.unstable_block * t) * b.V_inv.bottomRows(m);
}

}  // namespace

Mat HyperbolicSplit::stable_flow(double t) const { return block_flow(basis_, t, true); }
Mat HyperbolicSplit::unstable_flow(double t) const { return block_flow(basis_, t, false); }

double HyperbolicSplit::projector_defect() const {
  const auto n = B_.rows();
  const Mat I = Mat::Identity(n, n);
  double d = (P_plus_ + P_minus_ - I).cwiseAbs().maxCoeff();
  d = std::max(d, (P_plus_ * P_minus_).cwiseAbs().maxCoeff());
  d = std::max(d, (P_plus_ * P_plus_ - P_plus_).cwiseAbs().maxCoeff());
  d = std::max(d, (P_minus_ * P_minus_ - P_minus_).cwiseAbs().maxCoeff());
  d = std::max(d, (B_ * P_plus_ - P_plus_ * B_).cwiseAbs().maxCoeff());
  return d;
}

std::vector<double> decay_sample_times(double eps, std::size_t per_side) {
  std::vector<double> ts;
  ts.reserve(2 * per_side + 1);
  const double lo = std::log(1e-6 / eps);
  const double hi = std::log(50.0 / eps);
  for (std::size_t i = 0; i < per_side; ++i) {
    const double t = std::exp(lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(per_side - 1));
    ts.push_back(-t);
    ts.push_back(t);
  }
  ts.push_back(0.0);
  std::sort(ts.begin(), ts.end());
  return ts;
}

HyperbolicSplit hyperbolic_split(const Mat& B) {
  if (B.rows() != B.cols() || B.rows() == 0) throw Error(ErrorCode::GridError, "matrix must be square");
  if (!B.allFinite()) throw Error(ErrorCode::GridError, "matrix has non-finite entries");

  HyperbolicSplit s;
  s.B_ = B;
  s.basis_ = ordered_basis(B, s.eigenvalues_);
  double gap = std::numeric_limits<double>::infinity();
  for (const auto& lambda : s.eigenvalues_) gap = std::min(gap, std::fabs(lambda.real()));
  if (gap <= kHyperbolicityThreshold) {
    throw Error(ErrorCode::NotHyperbolic, "eigenvalue on the imaginary axis (|Re| = " +
                                              std::to_string(gap) + ")");
  }
  const auto n = B.rows();
  const auto k = static_cast<Eigen::Index>(s.basis_.stable_dim);
  s.P_minus_ = s.basis_.V.leftCols(k) * s.basis_.V_inv.topRows(k);
  s.P_plus_ = Mat::Identity(n, n) - s.P_minus_;
  s.eps_ = 0.9 * gap;

  double worst = 0.0;
  for (double t : decay_sample_times(s.eps_)) {
    worst = std::max(worst, op_norm(fundamental_solution(s, t)) * std::exp(s.eps_ * std::fabs(t)));
  }
  s.C_ = 1.1 * worst;
  return s;
}

Mat fundamental_solution(const HyperbolicSplit& split, double t) {
  if (t >= 0.0) return split.stable_flow(t);
  return -split.unstable_flow(t);
}

}  // namespace lamb
