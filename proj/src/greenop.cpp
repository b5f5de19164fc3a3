#include "lamb/greenop.hpp"

#include <cmath>

#include "lamb/error.hpp"

namespace lamb {

namespace {

struct CellIntegrals {
  Mat step;  // exp(T h)
  Mat phi1;  // int_0^h exp(T (h - s)) ds
  Mat phi2;  // int_0^h exp(T (h - s)) s ds
};

CellIntegrals cell_integrals(const Mat& T, double h) {
  const auto k = T.rows();
  Mat M = Mat::Zero(3 * k, 3 * k);
  M.topLeftCorner(k, k) = T * h;
  M.block(0, k, k, k) = Mat::Identity(k, k) * h;
  M.block(k, 2 * k, k, k) = Mat::Identity(k, k) * h;
  const Mat E = matexp(M);
  return {E.topLeftCorner(k, k), E.block(0, k, k, k), E.block(0, 2 * k, k, k)};
}

}  // namespace

GreenOperator::GreenOperator(const HyperbolicSplit& split, double h) : split_(split), h_(h) {
  if (!(h > 0.0)) throw Error(ErrorCode::GridError, "grid step must be positive");
  const auto& basis = split_.basis();
  if (basis.stable_dim > 0) {
    const CellIntegrals c = cell_integrals(basis.stable_block, h);
    step_s_ = c.step;
    int_s1_ = c.phi1;
    int_s2_ = c.phi2;
  }
  if (split_.unstable_dim() > 0) {
    // Backward in time: int_0^h exp(-T s) (a + b s) ds, from the augmented
    // exponential of -T (phi1 gives the first moment, h*phi1 - phi2 the second).
    const CellIntegrals c = cell_integrals(-basis.unstable_block, h);
    step_u_ = c.step;
    int_u1_ = c.phi1;
    int_u2_ = h * c.phi1 - c.phi2;
  }
}

GridFunction GreenOperator::apply(const GridFunction& f) const {
  if (f.centering() == Centering::Node) return apply(&f, nullptr);
  return apply(nullptr, &f);
}

GridFunction GreenOperator::apply(const GridFunction* nodal, const GridFunction* cells) const {
  const GridFunction* ref = nodal ? nodal : cells;
  if (ref == nullptr) throw Error(ErrorCode::GridError, "apply needs a forcing");
  const std::size_t n = split_.dim();
  const std::size_t ncells = nodal ? nodal->size() - 1 : cells->size();
  const double t0 = ref->t0();
  for (const GridFunction* g : {nodal, cells}) {
    if (g == nullptr) continue;
    if (g->dim() != n) throw Error(ErrorCode::GridError, "forcing dimension differs from the operator");
    if (std::fabs(g->h() - h_) > 1e-12 * h_ || std::fabs(g->t0() - t0) > 1e-12 * (1.0 + std::fabs(t0))) {
      throw Error(ErrorCode::GridError, "forcing grid differs from the operator grid");
    }
  }
  if (nodal && nodal->centering() != Centering::Node) throw Error(ErrorCode::GridError, "expected nodal forcing");
  if (cells && (cells->centering() != Centering::Cell || cells->size() != ncells)) {
    throw Error(ErrorCode::GridError, "cell forcing does not match the nodal window");
  }

  const auto& basis = split_.basis();
  const auto k = static_cast<Eigen::Index>(basis.stable_dim);
  const auto m = static_cast<Eigen::Index>(n) - k;

  // Forcing coefficients in dichotomy coordinates, per cell.
  Mat a(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(ncells));
  Mat b = Mat::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(ncells));
  for (std::size_t i = 0; i < ncells; ++i) {
    Vec ai = Vec::Zero(static_cast<Eigen::Index>(n));
    Vec bi = Vec::Zero(static_cast<Eigen::Index>(n));
    if (nodal) {
      const Vec lo = nodal->value(i);
      ai += lo;
      bi += (nodal->value(i + 1) - lo) / h_;
    }
    if (cells) ai += cells->value(i);
    a.col(static_cast<Eigen::Index>(i)) = basis.V_inv * ai;
    b.col(static_cast<Eigen::Index>(i)) = basis.V_inv * bi;
  }

  GridFunction y(t0, h_, ncells + 1, n, Centering::Node);
  Mat z = Mat::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(ncells + 1));
  if (k > 0) {
    Vec zs = Vec::Zero(k);
    for (std::size_t i = 0; i < ncells; ++i) {
      const auto c = static_cast<Eigen::Index>(i);
      zs = step_s_ * zs + int_s1_ * a.col(c).head(k) + int_s2_ * b.col(c).head(k);
      z.col(c + 1).head(k) = zs;
    }
  }
  if (m > 0) {
    Vec zu = Vec::Zero(m);
    for (std::size_t i = ncells; i-- > 0;) {
      const auto c = static_cast<Eigen::Index>(i);
      zu = step_u_ * zu - (int_u1_ * a.col(c).tail(m) + int_u2_ * b.col(c).tail(m));
      z.col(c).tail(m) = zu;
    }
  }
  const Mat out = basis.V * z;
  for (std::size_t i = 0; i <= ncells; ++i) y.set(i, out.col(static_cast<Eigen::Index>(i)));
  return y;
}

GridFunction apply_R(const HyperbolicSplit& split, const GridFunction& f) {
  return GreenOperator(split, f.h()).apply(f);
}

double forcing_tail_l2(const GridFunction& f, double fraction) {
  const auto first = static_cast<std::size_t>(std::floor((1.0 - fraction) * static_cast<double>(f.size())));
  return f.tail_l2_norm(first);
}

}  // namespace lamb
