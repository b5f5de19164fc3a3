#include "lamb/profiles.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "lamb/error.hpp"

namespace lamb {

Shape parse_shape(const std::string& name) {
  if (name == "constant") return Shape::Constant;
  if (name == "box") return Shape::Box;
  if (name == "hat") return Shape::Hat;
  if (name == "gaussian") return Shape::Gaussian;
  throw Error(ErrorCode::ConfigError, "unknown primitive shape '" + name + "'");
}

std::string shape_name(Shape s) {
  switch (s) {
    case Shape::Constant: return "constant";
    case Shape::Box: return "box";
    case Shape::Hat: return "hat";
    case Shape::Gaussian: return "gaussian";
  }
  return "constant";
}

double Primitive::profile(double x) const {
  const double s = (x - center) / width;
  switch (shape) {
    case Shape::Constant: return 1.0;
    case Shape::Box: {
      const double a = std::fabs(s);
      if (a < 1.0) return 1.0;
      return a == 1.0 ? 0.5 : 0.0;
    }
    case Shape::Hat: return std::max(0.0, 1.0 - std::fabs(s));
    case Shape::Gaussian: return std::exp(-s * s);
  }
  return 0.0;
}

double Primitive::profile_integral(double x) const {
  const double s = (x - center) / width;
  switch (shape) {
    case Shape::Constant: return x - center;
    case Shape::Box: return width * std::clamp(s, -1.0, 1.0);
    case Shape::Hat: {
      const double c = std::clamp(s, -1.0, 1.0);
      const double v = c >= 0.0 ? c - 0.5 * c * c : c + 0.5 * c * c;
      return width * v;
    }
    case Shape::Gaussian: return width * 0.5 * std::sqrt(std::numbers::pi) * std::erf(s);
  }
  return 0.0;
}

namespace {

Vec amplitude_of(const Primitive& p, std::size_t dim) {
  if (static_cast<std::size_t>(p.amplitude.size()) != dim) {
    throw Error(ErrorCode::ConfigError, "primitive amplitude has wrong dimension");
  }
  return p.amplitude;
}

}  // namespace

Vec evaluate(const Composite& c, double x, std::size_t dim) {
  Vec v = Vec::Zero(static_cast<Eigen::Index>(dim));
  for (const auto& p : c) v += p.profile(x) * amplitude_of(p, dim);
  return v;
}

Vec average(const Composite& c, double a, double b, std::size_t dim) {
  Vec v = Vec::Zero(static_cast<Eigen::Index>(dim));
  for (const auto& p : c) {
    const double mean = p.shape == Shape::Constant
                            ? 1.0
                            : (p.profile_integral(b) - p.profile_integral(a)) / (b - a);
    v += mean * amplitude_of(p, dim);
  }
  return v;
}

GridFunction sample_nodes(const Composite& c, double L, double h, std::size_t dim) {
  const std::size_t m = steps_in(L, h);
  return GridFunction::sample(-L, h, 2 * m + 1, dim, [&](double x) { return evaluate(c, x, dim); });
}

GridFunction sample_cells(const Composite& c, double L, double h, std::size_t dim) {
  const std::size_t m = steps_in(L, h);
  GridFunction g(-L, h, 2 * m, dim, Centering::Cell);
  for (std::size_t i = 0; i < g.size(); ++i) {
    const double a = -L + static_cast<double>(i) * h;
    g.set(i, average(c, a, a + h, dim));
  }
  return g;
}

Vec limit_of(const Composite& c, std::size_t dim) {
  Vec v = Vec::Zero(static_cast<Eigen::Index>(dim));
  for (const auto& p : c) {
    if (p.shape == Shape::Constant) v += amplitude_of(p, dim);
  }
  return v;
}

AsymptoticState make_asymptotic_state(const Composite& psi0, const Composite& psi1, double L,
                                      double h, std::size_t dim, bool balance) {
  GridFunction p0 = sample_nodes(psi0, L, h, dim);
  GridFunction p1 = sample_cells(psi1, L, h, dim);
  Vec limit = limit_of(psi0, dim);
  if (balance) {
    const Vec shift = -0.5 * (2.0 * limit + p1.integral());
    for (std::size_t i = 0; i < p0.size(); ++i) p0.set(i, p0.value(i) + shift);
    limit += shift;
  }
  return {std::move(p0), std::move(p1), limit, limit};
}

EnergyState make_energy_state(const Composite& u0, const Composite& v0, double L, double h,
                              std::size_t dim) {
  GridFunction a = sample_nodes(u0, L, h, dim);
  GridFunction b = sample_cells(v0, L, h, dim);
  Vec limit = limit_of(u0, dim);
  Vec mean = b.integral();
  return {std::move(a), std::move(b), limit, limit, std::move(mean)};
}

}  // namespace lamb
