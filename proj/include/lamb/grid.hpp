#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include <Eigen/Dense>

namespace lamb {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

/// Where the samples of a GridFunction sit on the uniform grid.
///
/// Node: t_i = t0 + i*h, window [t0, t0 + (size-1)*h], trapezoid quadrature.
/// Cell: t_i = t0 + (i+1/2)*h, window [t0, t0 + size*h], midpoint quadrature.
///
/// Positions (u0, Psi0, y, S) live on nodes; densities (v0, Psi1, forcing,
/// outgoing profiles) live on cells. A cell sample is read as the value of a
/// function that is constant on that cell.
enum class Centering { Node, Cell };

/// Uniformly sampled R^n-valued function of one real variable.
/// Samples are stored sample-major: component k of sample i is data[i*dim+k].
class GridFunction {
 public:
  GridFunction() = default;
  GridFunction(double t0, double h, std::size_t size, std::size_t dim,
               Centering centering = Centering::Node);
  GridFunction(double t0, double h, std::size_t dim, std::vector<double> samples,
               Centering centering = Centering::Node);

  /// Samples fn at every grid location.
  static GridFunction sample(double t0, double h, std::size_t size, std::size_t dim,
                             const std::function<Vec(double)>& fn,
                             Centering centering = Centering::Node);

  double t0() const { return t0_; }
  double h() const { return h_; }
  std::size_t size() const { return size_; }
  std::size_t dim() const { return dim_; }
  Centering centering() const { return centering_; }
  bool empty() const { return size_ == 0; }

  double time(std::size_t i) const;
  /// Right end of the covered window.
  double t_end() const;

  std::span<const double> operator[](std::size_t i) const {
    return {data_.data() + i * dim_, dim_};
  }
  std::span<double> operator[](std::size_t i) { return {data_.data() + i * dim_, dim_}; }
  Vec value(std::size_t i) const;
  void set(std::size_t i, const Vec& v);
  /// Scalar access for n = 1.
  double operator()(std::size_t i) const { return data_[i * dim_]; }

  const std::vector<double>& data() const { return data_; }
  std::vector<double>& data() { return data_; }

  /// Same t0, h, size, dim and centering.
  bool same_grid(const GridFunction& other) const;

  double l2_norm_squared() const;
  double l2_norm() const;
  /// L2 norm restricted to samples with index >= first (quadrature restarts
  /// there, so for nodes the first sample carries half weight).
  double tail_l2_norm(std::size_t first) const;
  double sup_norm() const;
  /// L2 + sup, the norm of the trajectory space.
  double y_norm() const { return l2_norm() + sup_norm(); }
  Vec integral() const;
  bool all_finite() const;

  GridFunction& operator+=(const GridFunction& other);
  GridFunction& operator-=(const GridFunction& other);
  GridFunction& operator*=(double a);
  /// this += a * other
  GridFunction& axpy(double a, const GridFunction& other);

 private:
  double t0_ = 0.0;
  double h_ = 1.0;
  std::size_t size_ = 0;
  std::size_t dim_ = 1;
  Centering centering_ = Centering::Node;
  std::vector<double> data_;
};

GridFunction operator+(GridFunction a, const GridFunction& b);
GridFunction operator-(GridFunction a, const GridFunction& b);
GridFunction operator*(double s, GridFunction a);

/// Throws GridError unless the grids coincide.
void require_same_grid(const GridFunction& a, const GridFunction& b, const char* where);

/// Cell differences of a nodal function: ((u_{i+1} - u_i)/h) on the cells.
/// Exact cell average of u' for any continuous u.
GridFunction cell_derivative(const GridFunction& nodal);

/// Central differences on nodes, second-order one-sided stencils at the ends.
GridFunction nodal_derivative(const GridFunction& nodal);

/// Running integral of a cell function, returned on the matching nodes, with
/// value `start` at the left end.
GridFunction cumulative_integral(const GridFunction& cells, const Vec& start);

/// Number of grid steps in `length`; throws GridError unless length/h is an
/// integer to within 1e-9 relative.
std::size_t steps_in(double length, double h);

}  // namespace lamb
