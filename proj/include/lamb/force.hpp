#pragma once

#include <optional>
#include <string>
#include <vector>

#include "lamb/grid.hpp"

namespace lamb {

enum class ForceKind { Linear, Cubic1d, DoubleWell2d, FlatCore, QuadraticCore, Polynomial };

ForceKind parse_force_kind(const std::string& name);
std::string force_kind_name(ForceKind k);

/// Oscillator force F: R^n -> R^n, its Jacobian, and the potential V with
/// F = -grad V where one exists.
///
///   linear          F(y) = -c y                          params [c = 1], any n
///   cubic-1d        F(y) = -a y - b y^3                  params [a = 1, b = 1]
///   double-well-2d  F(y) = (y1 - y1^3, -y2)
///   flat-core       F(y) = 0 on |y| <= 1, -(y - sign y) outside
///   quadratic-core  F(y) = -2 y^2 on |y| <= 1, -(y - sign y) outside
///   polynomial      F(y) = sum_k c_k y^k                 params [c_0, c_1, ...]
class ForceModel {
 public:
  ForceModel(ForceKind kind, std::vector<double> params = {}, std::size_t dim = 0);
  static ForceModel from_name(const std::string& name, std::vector<double> params = {},
                              std::size_t dim = 0);

  ForceKind kind() const { return kind_; }
  std::string name() const { return force_kind_name(kind_); }
  const std::vector<double>& params() const { return params_; }
  std::size_t dim() const { return dim_; }
  /// Zero set Z (a representative for flat-core, whose zero set is [-1, 1]).
  const std::vector<Vec>& zeros() const { return zeros_; }
  bool has_potential() const { return has_potential_; }

  Vec force(const Vec& y) const;
  Mat jacobian(const Vec& y) const;
  /// Throws InconsistentInput when the model has no potential.
  double potential(const Vec& y) const;

  /// Half the distance from z to the nearest other listed zero, or 1.
  double validity_radius(const Vec& z) const;
  /// Nearest listed zero and its distance.
  std::pair<Vec, double> nearest_zero(const Vec& y) const;

 private:
  ForceKind kind_;
  std::vector<double> params_;
  std::size_t dim_;
  std::vector<Vec> zeros_;
  bool has_potential_ = false;
};

}  // namespace lamb
