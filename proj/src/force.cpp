#include "lamb/force.hpp"

#include <cmath>
#include <limits>

#include <Eigen/Eigenvalues>

#include "lamb/error.hpp"

namespace lamb {

ForceKind parse_force_kind(const std::string& name) {
  if (name == "linear") return ForceKind::Linear;
  if (name == "cubic-1d") return ForceKind::Cubic1d;
  if (name == "double-well-2d") return ForceKind::DoubleWell2d;
  if (name == "flat-core") return ForceKind::FlatCore;
  if (name == "quadratic-core") return ForceKind::QuadraticCore;
  if (name == "polynomial") return ForceKind::Polynomial;
  throw Error(ErrorCode::ConfigError, "unknown force model '" + name + "'");
}

std::string force_kind_name(ForceKind k) {
  switch (k) {
    case ForceKind::Linear: return "linear";
    case ForceKind::Cubic1d: return "cubic-1d";
    case ForceKind::DoubleWell2d: return "double-well-2d";
    case ForceKind::FlatCore: return "flat-core";
    case ForceKind::QuadraticCore: return "quadratic-core";
    case ForceKind::Polynomial: return "polynomial";
  }
  return "linear";
}

namespace {

double param(const std::vector<double>& p, std::size_t i, double fallback) {
  return i < p.size() ? p[i] : fallback;
}

Vec scalar(double v) { return Vec::Constant(1, v); }

std::vector<double> real_roots(const std::vector<double>& c) {
  std::size_t deg = c.size();
  while (deg > 0 && c[deg - 1] == 0.0) --deg;
  if (deg <= 1) return {};
  const auto d = static_cast<Eigen::Index>(deg - 1);
  if (d == 1) return {-c[0] / c[1]};
  Mat companion = Mat::Zero(d, d);
  for (Eigen::Index i = 1; i < d; ++i) companion(i, i - 1) = 1.0;
  for (Eigen::Index i = 0; i < d; ++i) companion(i, d - 1) = -c[static_cast<std::size_t>(i)] / c[deg - 1];
  Eigen::EigenSolver<Mat> es(companion, false);
  std::vector<double> roots;
  for (const auto& z : es.eigenvalues()) {
    if (std::fabs(z.imag()) > 1e-8 * (1.0 + std::abs(z))) continue;
    double x = z.real();
    for (int it = 0; it < 20; ++it) {
      double f = 0.0, df = 0.0;
      for (std::size_t k = deg; k-- > 0;) {
        df = df * x + f;
        f = f * x + c[k];
      }
      if (df == 0.0) break;
      const double dx = f / df;
      x -= dx;
      if (std::fabs(dx) < 1e-16 * (1.0 + std::fabs(x))) break;
    }
    roots.push_back(x);
  }
  return roots;
}

}  // namespace

ForceModel::ForceModel(ForceKind kind, std::vector<double> params, std::size_t dim)
    : kind_(kind), params_(std::move(params)), dim_(dim) {
  switch (kind_) {
    case ForceKind::Linear: {
      if (dim_ == 0) dim_ = 1;
      // c = 0 makes every point a zero; 0 stands for the set.
      zeros_ = {Vec::Zero(static_cast<Eigen::Index>(dim_))};
      has_potential_ = true;
      break;
    }
    case ForceKind::Cubic1d: {
      dim_ = 1;
      const double a = param(params_, 0, 1.0);
      const double b = param(params_, 1, 1.0);
      zeros_ = {scalar(0.0)};
      if (b != 0.0 && -a / b > 0.0) {
        zeros_.push_back(scalar(std::sqrt(-a / b)));
        zeros_.push_back(scalar(-std::sqrt(-a / b)));
      }
      has_potential_ = true;
      break;
    }
    case ForceKind::DoubleWell2d:
      dim_ = 2;
      zeros_ = {Vec::Zero(2), (Vec(2) << 1.0, 0.0).finished(), (Vec(2) << -1.0, 0.0).finished()};
      has_potential_ = true;
      break;
    case ForceKind::FlatCore:
    case ForceKind::QuadraticCore:
      dim_ = 1;
      zeros_ = {scalar(0.0)};
      has_potential_ = true;
      break;
    case ForceKind::Polynomial:
      dim_ = 1;
      if (params_.empty()) throw Error(ErrorCode::ConfigError, "polynomial model needs coefficients");
      for (double r : real_roots(params_)) zeros_.push_back(scalar(r));
      has_potential_ = true;
      break;
  }
}

ForceModel ForceModel::from_name(const std::string& name, std::vector<double> params, std::size_t dim) {
  return ForceModel(parse_force_kind(name), std::move(params), dim);
}

Vec ForceModel::force(const Vec& y) const {
  if (static_cast<std::size_t>(y.size()) != dim_) throw Error(ErrorCode::GridError, "force: dimension mismatch");
  switch (kind_) {
    case ForceKind::Linear: return -param(params_, 0, 1.0) * y;
    case ForceKind::Cubic1d: {
      const double x = y[0];
      return scalar(-param(params_, 0, 1.0) * x - param(params_, 1, 1.0) * x * x * x);
    }
    case ForceKind::DoubleWell2d: return (Vec(2) << y[0] - y[0] * y[0] * y[0], -y[1]).finished();
    case ForceKind::FlatCore: {
      const double x = y[0];
      return scalar(std::fabs(x) <= 1.0 ? 0.0 : -(x - std::copysign(1.0, x)));
    }
    case ForceKind::QuadraticCore: {
      const double x = y[0];
      return scalar(std::fabs(x) <= 1.0 ? -2.0 * x * x : -(x - std::copysign(1.0, x)));
    }
    case ForceKind::Polynomial: {
      double f = 0.0;
      for (std::size_t k = params_.size(); k-- > 0;) f = f * y[0] + params_[k];
      return scalar(f);
    }
  }
  return y;
}

Mat ForceModel::jacobian(const Vec& y) const {
  if (static_cast<std::size_t>(y.size()) != dim_) throw Error(ErrorCode::GridError, "jacobian: dimension mismatch");
  const auto n = static_cast<Eigen::Index>(dim_);
  switch (kind_) {
    case ForceKind::Linear: return -param(params_, 0, 1.0) * Mat::Identity(n, n);
    case ForceKind::Cubic1d:
      return Mat::Constant(1, 1, -param(params_, 0, 1.0) - 3.0 * param(params_, 1, 1.0) * y[0] * y[0]);
    case ForceKind::DoubleWell2d: {
      Mat J = Mat::Zero(2, 2);
      J(0, 0) = 1.0 - 3.0 * y[0] * y[0];
      J(1, 1) = -1.0;
      return J;
    }
    case ForceKind::FlatCore: return Mat::Constant(1, 1, std::fabs(y[0]) <= 1.0 ? 0.0 : -1.0);
    case ForceKind::QuadraticCore: return Mat::Constant(1, 1, std::fabs(y[0]) <= 1.0 ? -4.0 * y[0] : -1.0);
    case ForceKind::Polynomial: {
      double d = 0.0;
      for (std::size_t k = params_.size(); k-- > 1;) d = d * y[0] + static_cast<double>(k) * params_[k];
      return Mat::Constant(1, 1, d);
    }
  }
  return Mat::Zero(n, n);
}

double ForceModel::potential(const Vec& y) const {
  if (!has_potential_) throw Error(ErrorCode::InconsistentInput, name() + " has no potential");
  switch (kind_) {
    case ForceKind::Linear: return 0.5 * param(params_, 0, 1.0) * y.squaredNorm();
    case ForceKind::Cubic1d: {
      const double x2 = y[0] * y[0];
      return 0.5 * param(params_, 0, 1.0) * x2 + 0.25 * param(params_, 1, 1.0) * x2 * x2;
    }
    case ForceKind::DoubleWell2d: {
      const double x2 = y[0] * y[0];
      return -0.5 * x2 + 0.25 * x2 * x2 + 0.5 * y[1] * y[1];
    }
    case ForceKind::FlatCore: {
      const double a = std::fabs(y[0]);
      return a <= 1.0 ? 0.0 : 0.5 * (a - 1.0) * (a - 1.0);
    }
    case ForceKind::QuadraticCore: {
      const double x = y[0];
      const double a = std::fabs(x);
      if (a <= 1.0) return 2.0 * x * x * x / 3.0;
      return std::copysign(2.0 / 3.0, x) + 0.5 * (a - 1.0) * (a - 1.0);
    }
    case ForceKind::Polynomial: {
      double v = 0.0;
      for (std::size_t k = params_.size(); k-- > 0;) v = v * y[0] - params_[k] / static_cast<double>(k + 1);
      return v * y[0];
    }
  }
  return 0.0;
}

double ForceModel::validity_radius(const Vec& z) const {
  double nearest = std::numeric_limits<double>::infinity();
  for (const Vec& w : zeros_) {
    const double d = (w - z).norm();
    if (d > 1e-12) nearest = std::min(nearest, d);
  }
  return std::isfinite(nearest) ? 0.5 * nearest : 1.0;
}

std::pair<Vec, double> ForceModel::nearest_zero(const Vec& y) const {
  Vec best;
  double dist = std::numeric_limits<double>::infinity();
  for (const Vec& z : zeros_) {
    const double d = (z - y).norm();
    if (d < dist) {
      dist = d;
      best = z;
    }
  }
  return {best, dist};
}

}  // namespace lamb
