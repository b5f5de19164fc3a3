#pragma once
// Hyperbolic splitting of a real matrix and the Green kernel of the
// exponential dichotomy,
//
//   E(t) =  exp(B t) P_minus   for t > 0,
//   E(t) = -exp(B t) P_plus    for t < 0,
//
// so that |E(t)| <= C exp(-eps |t|).

#include <cstddef>

#include "lamb/grid.hpp"

namespace lamb {

/// Scaling-and-squaring with degree-3..13 Pade approximants.
Mat matexp(const Mat& M);

/// Spectral (2-)norm.
double op_norm(const Mat& M);

/// Block-diagonal form B = V diag(T_s, T_u) V^{-1} with spec(T_s) in the open
/// left half-plane and spec(T_u) in the open right half-plane. T_s and T_u are
/// upper quasi-triangular blocks of the ordered real Schur form.
struct DichotomyBasis {
  Mat V;
  Mat V_inv;
  Mat stable_block;
  Mat unstable_block;
  std::size_t stable_dim = 0;
};

class HyperbolicSplit {
 public:
  const Mat& B() const { return B_; }
  const Mat& P_plus() const { return P_plus_; }
  const Mat& P_minus() const { return P_minus_; }
  double eps() const { return eps_; }
  double C() const { return C_; }
  const Eigen::VectorXcd& eigenvalues() const { return eigenvalues_; }
  const DichotomyBasis& basis() const { return basis_; }
  std::size_t dim() const { return static_cast<std::size_t>(B_.rows()); }
  std::size_t stable_dim() const { return basis_.stable_dim; }
  std::size_t unstable_dim() const { return dim() - basis_.stable_dim; }

  /// exp(B t) P_minus, evaluated on the stable block only.
  Mat stable_flow(double t) const;
  /// exp(B t) P_plus, evaluated on the unstable block only.
  Mat unstable_flow(double t) const;

  /// Largest violation of P+ + P- = I, P+P- = 0, P^2 = P, BP = PB.
  double projector_defect() const;

  friend HyperbolicSplit hyperbolic_split(const Mat& B);

 private:
  Mat B_;
  Mat P_plus_;
  Mat P_minus_;
  double eps_ = 0.0;
  double C_ = 0.0;
  Eigen::VectorXcd eigenvalues_;
  DichotomyBasis basis_;
};

/// Eigenvalues with |Re| below this are treated as lying on the imaginary axis.
inline constexpr double kHyperbolicityThreshold = 1e-9;

/// Splits B into stable and unstable parts. eps = 0.9 min |Re lambda|; C is
/// 1.1 times the largest sampled |E(t)| exp(eps |t|).
/// Throws NotHyperbolic when some |Re lambda| <= 1e-9.
HyperbolicSplit hyperbolic_split(const Mat& B);

/// Green kernel E(t); E(0) is the right limit P_minus.
Mat fundamental_solution(const HyperbolicSplit& split, double t);

/// Sample times used to calibrate C: 0 and +/- a log-spaced grid on
/// [1e-6/eps, 50/eps].
std::vector<double> decay_sample_times(double eps, std::size_t per_side = 400);

}  // namespace lamb
