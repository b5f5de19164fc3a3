#include "lamb/grid.hpp"

#include <cmath>
#include <string>

#include "lamb/error.hpp"
#include "lamb/kernels.hpp"

namespace lamb {

namespace {

void validate(double h, std::size_t dim) {
  if (!(h > 0.0) || !std::isfinite(h)) throw Error(ErrorCode::GridError, "grid step must be positive");
  if (dim == 0) throw Error(ErrorCode::GridError, "dimension must be at least 1");
}

double sample_sq(std::span<const double> s) {
  double r = 0.0;
  for (double v : s) r += v * v;
  return r;
}

}  // namespace

GridFunction::GridFunction(double t0, double h, std::size_t size, std::size_t dim,
                           Centering centering)
    : t0_(t0), h_(h), size_(size), dim_(dim), centering_(centering), data_(size * dim, 0.0) {
  validate(h, dim);
}

GridFunction::GridFunction(double t0, double h, std::size_t dim, std::vector<double> samples,
                           Centering centering)
    : t0_(t0), h_(h), dim_(dim), centering_(centering), data_(std::move(samples)) {
  validate(h, dim);
  if (data_.size() % dim != 0) throw Error(ErrorCode::GridError, "sample count not a multiple of dim");
  size_ = data_.size() / dim;
  if (!all_finite()) throw Error(ErrorCode::GridError, "non-finite sample");
}

GridFunction GridFunction::sample(double t0, double h, std::size_t size, std::size_t dim,
                                  const std::function<Vec(double)>& fn, Centering centering) {
  GridFunction g(t0, h, size, dim, centering);
  for (std::size_t i = 0; i < size; ++i) g.set(i, fn(g.time(i)));
  return g;
}

double GridFunction::time(std::size_t i) const {
  const double offset = centering_ == Centering::Cell ? 0.5 : 0.0;
  return t0_ + (static_cast<double>(i) + offset) * h_;
}

double GridFunction::t_end() const {
  if (size_ == 0) return t0_;
  const double cells = centering_ == Centering::Cell ? static_cast<double>(size_)
                                                     : static_cast<double>(size_ - 1);
  return t0_ + cells * h_;
}

Vec GridFunction::value(std::size_t i) const {
  return Eigen::Map<const Vec>(data_.data() + i * dim_, static_cast<Eigen::Index>(dim_));
}

void GridFunction::set(std::size_t i, const Vec& v) {
  if (static_cast<std::size_t>(v.size()) != dim_) throw Error(ErrorCode::GridError, "dimension mismatch in set");
  for (std::size_t k = 0; k < dim_; ++k) data_[i * dim_ + k] = v[static_cast<Eigen::Index>(k)];
}

bool GridFunction::same_grid(const GridFunction& o) const {
  return size_ == o.size_ && dim_ == o.dim_ && centering_ == o.centering_ &&
         std::fabs(t0_ - o.t0_) <= 1e-12 * (1.0 + std::fabs(t0_)) &&
         std::fabs(h_ - o.h_) <= 1e-14 * h_;
}

double GridFunction::l2_norm_squared() const {
  if (size_ == 0) return 0.0;
  double s = kernels::sum_squares(data_);
  if (centering_ == Centering::Node) {
    if (size_ == 1) return 0.0;
    s -= 0.5 * (sample_sq((*this)[0]) + sample_sq((*this)[size_ - 1]));
  }
  return h_ * s;
}

double GridFunction::l2_norm() const { return std::sqrt(std::max(0.0, l2_norm_squared())); }

double GridFunction::tail_l2_norm(std::size_t first) const {
  if (first >= size_) return 0.0;
  std::span<const double> tail(data_.data() + first * dim_, (size_ - first) * dim_);
  double s = kernels::sum_squares(tail);
  if (centering_ == Centering::Node) {
    if (size_ - first == 1) return 0.0;
    s -= 0.5 * (sample_sq((*this)[first]) + sample_sq((*this)[size_ - 1]));
  }
  return std::sqrt(std::max(0.0, h_ * s));
}

double GridFunction::sup_norm() const {
  if (dim_ == 1) return kernels::max_abs(data_);
  double m = 0.0;
  for (std::size_t i = 0; i < size_; ++i) m = std::max(m, sample_sq((*this)[i]));
  return std::sqrt(m);
}

Vec GridFunction::integral() const {
  Vec sum = Vec::Zero(static_cast<Eigen::Index>(dim_));
  if (size_ == 0) return sum;
  for (std::size_t i = 0; i < size_; ++i) sum += value(i);
  if (centering_ == Centering::Node) {
    if (size_ == 1) return Vec::Zero(static_cast<Eigen::Index>(dim_));
    sum -= 0.5 * (value(0) + value(size_ - 1));
  }
  return h_ * sum;
}

bool GridFunction::all_finite() const {
  for (double v : data_) {
    if (!std::isfinite(v)) return false;
  }
  return true;
}

GridFunction& GridFunction::operator+=(const GridFunction& o) { return axpy(1.0, o); }
GridFunction& GridFunction::operator-=(const GridFunction& o) { return axpy(-1.0, o); }

GridFunction& GridFunction::operator*=(double a) {
  for (double& v : data_) v *= a;
  return *this;
}

GridFunction& GridFunction::axpy(double a, const GridFunction& o) {
  require_same_grid(*this, o, "axpy");
  kernels::axpy(a, o.data_, data_);
  return *this;
}

GridFunction operator+(GridFunction a, const GridFunction& b) { return a += b; }
GridFunction operator-(GridFunction a, const GridFunction& b) { return a -= b; }
GridFunction operator*(double s, GridFunction a) { return a *= s; }

void require_same_grid(const GridFunction& a, const GridFunction& b, const char* where) {
  if (!a.same_grid(b)) throw Error(ErrorCode::GridError, std::string("grids differ in ") + where);
}

GridFunction cell_derivative(const GridFunction& u) {
  if (u.centering() != Centering::Node) throw Error(ErrorCode::GridError, "cell_derivative needs nodal input");
  if (u.size() < 2) throw Error(ErrorCode::GridError, "cell_derivative needs two nodes");
  const std::size_t n = u.dim();
  GridFunction d(u.t0(), u.h(), u.size() - 1, n, Centering::Cell);
  for (std::size_t i = 0; i + 1 < u.size(); ++i) {
    for (std::size_t k = 0; k < n; ++k) d[i][k] = (u[i + 1][k] - u[i][k]) / u.h();
  }
  return d;
}

GridFunction nodal_derivative(const GridFunction& u) {
  if (u.centering() != Centering::Node) throw Error(ErrorCode::GridError, "nodal_derivative needs nodal input");
  const std::size_t m = u.size();
  const std::size_t n = u.dim();
  GridFunction d(u.t0(), u.h(), m, n, Centering::Node);
  if (m < 3) {
    if (m == 2) {
      for (std::size_t k = 0; k < n; ++k) d[0][k] = d[1][k] = (u[1][k] - u[0][k]) / u.h();
    }
    return d;
  }
  const double inv2h = 0.5 / u.h();
  for (std::size_t k = 0; k < n; ++k) {
    d[0][k] = (-3.0 * u[0][k] + 4.0 * u[1][k] - u[2][k]) * inv2h;
    d[m - 1][k] = (3.0 * u[m - 1][k] - 4.0 * u[m - 2][k] + u[m - 3][k]) * inv2h;
  }
  for (std::size_t i = 1; i + 1 < m; ++i) {
    for (std::size_t k = 0; k < n; ++k) d[i][k] = (u[i + 1][k] - u[i - 1][k]) * inv2h;
  }
  return d;
}

GridFunction cumulative_integral(const GridFunction& c, const Vec& start) {
  if (c.centering() != Centering::Cell) throw Error(ErrorCode::GridError, "cumulative_integral needs cell input");
  GridFunction u(c.t0(), c.h(), c.size() + 1, c.dim(), Centering::Node);
  u.set(0, start);
  for (std::size_t i = 0; i < c.size(); ++i) {
    for (std::size_t k = 0; k < c.dim(); ++k) u[i + 1][k] = u[i][k] + c.h() * c[i][k];
  }
  return u;
}

std::size_t steps_in(double length, double h) {
  const double r = length / h;
  const double n = std::round(r);
  if (n < 0.0 || std::fabs(r - n) > 1e-9 * std::max(1.0, r)) {
    throw Error(ErrorCode::GridError, "length " + std::to_string(length) +
                                          " is not a multiple of the grid step");
  }
  return static_cast<std::size_t>(n);
}

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::GridError: return "GridError";
    case ErrorCode::WindowError: return "WindowError";
    case ErrorCode::NotHyperbolic: return "NotHyperbolic";
    case ErrorCode::NotStationary: return "NotStationary";
    case ErrorCode::CannotLocalize: return "CannotLocalize";
    case ErrorCode::Diverged: return "Diverged";
    case ErrorCode::BlowUp: return "BlowUp";
    case ErrorCode::NoConvergence: return "NoConvergence";
    case ErrorCode::InconsistentInput: return "InconsistentInput";
    case ErrorCode::ConfigError: return "ConfigError";
  }
  return "Unknown";
}

}  // namespace lamb
