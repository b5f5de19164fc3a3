#pragma once
// The bounded-solution operator R f = E * f of y' = B y + f.
//
// Forcing is read cell by cell as a + b (t - t_i): nodal samples give the
// piecewise-linear interpolant, cell samples a piecewise constant. On each
// cell the convolution with exp(B t) is integrated exactly through the
// exponential of the augmented matrix [[B, I, 0], [0, 0, I], [0, 0, 0]].
// The stable part runs forward from zero at the left end, the unstable part
// backward from zero at the right end; forcing vanishes outside the window.

#include "lamb/spectral.hpp"

namespace lamb {

class GreenOperator {
 public:
  GreenOperator(const HyperbolicSplit& split, double h);

  /// R applied to nodal (piecewise-linear) or cell (piecewise-constant)
  /// forcing; the result is nodal on the same window.
  GridFunction apply(const GridFunction& f) const;
  /// R(nodal + cells) in one pass; either may be empty.
  GridFunction apply(const GridFunction* nodal, const GridFunction* cells) const;

  const HyperbolicSplit& split() const { return split_; }
  double h() const { return h_; }

 private:
  HyperbolicSplit split_;
  double h_;
  // Stable coordinates: z <- step_s z + int_s1 a + int_s2 b.
  Mat step_s_, int_s1_, int_s2_;
  // Unstable coordinates: z <- step_u z - (int_u1 a + int_u2 b).
  Mat step_u_, int_u1_, int_u2_;
};

/// One-shot R f.
GridFunction apply_R(const HyperbolicSplit& split, const GridFunction& f);

/// ||f||_L2 over the last `fraction` of the window; the unstable recursion
/// is exact only if this is negligible.
double forcing_tail_l2(const GridFunction& f, double fraction = 0.1);

}  // namespace lamb
