#pragma once
// Closed-form building blocks for asymptotic states and initial data.
// Cell samples are exact cell averages, so a box lands on the grid without
// smearing even when its edges fall between nodes.

#include <string>
#include <vector>

#include "lamb/function_spaces.hpp"

namespace lamb {

enum class Shape { Constant, Box, Hat, Gaussian };

Shape parse_shape(const std::string& name);
std::string shape_name(Shape s);

/// amplitude * profile((x - center) / width) per component.
///   constant: 1
///   box:      1 on [-1, 1] (1/2 on the edges)
///   hat:      max(0, 1 - |s|)
///   gaussian: exp(-s^2)
struct Primitive {
  Shape shape = Shape::Constant;
  double center = 0.0;
  double width = 1.0;
  Vec amplitude;

  double profile(double x) const;
  /// Integral of the unit profile from center to x.
  double profile_integral(double x) const;
};

using Composite = std::vector<Primitive>;

Vec evaluate(const Composite& c, double x, std::size_t dim);
/// Average of the composite over [a, b].
Vec average(const Composite& c, double a, double b, std::size_t dim);

GridFunction sample_nodes(const Composite& c, double L, double h, std::size_t dim);
GridFunction sample_cells(const Composite& c, double L, double h, std::size_t dim);

/// Limits of a composite at +/- infinity (only constants survive).
Vec limit_of(const Composite& c, std::size_t dim);

/// Psi0 from nodes, Psi1 from cell averages, limits from the constant parts.
/// With `balance`, a constant is added to Psi0 so the identity residual
/// vanishes.
AsymptoticState make_asymptotic_state(const Composite& psi0, const Composite& psi1, double L,
                                      double h, std::size_t dim, bool balance = false);

EnergyState make_energy_state(const Composite& u0, const Composite& v0, double L, double h,
                              std::size_t dim);

}  // namespace lamb
