#pragma once

#include <cstddef>
#include <memory>
#include <numbers>
#include <span>
#include <vector>

namespace conormhd {

/// Strip discretization parameters: periodic in x, wall at y = 0,
/// truncated at y = ymax with exponential clustering toward the wall.
struct GridSpec {
  int nx = 64;
  int ny = 64;
  double length_x = 2.0 * std::numbers::pi;
  double ymax = 12.0;
  double stretch_beta = 2.0;

  void validate() const;
  bool operator==(const GridSpec&) const = default;
};

/// Node coordinates and the discrete metric of the wall-normal mapping
/// y(s) = ymax * (exp(beta s) - 1) / (exp(beta) - 1), s in [0, 1].
class Grid {
 public:
  explicit Grid(const GridSpec& spec);

  const GridSpec& spec() const { return spec_; }
  int nx() const { return spec_.nx; }
  int ny() const { return spec_.ny; }
  std::size_t size() const { return static_cast<std::size_t>(spec_.nx) * spec_.ny; }
  std::size_t index(int i, int j) const {
    return static_cast<std::size_t>(j) * spec_.nx + i;
  }

  double dx() const { return dx_; }
  double ds() const { return ds_; }
  std::span<const double> x() const { return x_; }
  std::span<const double> y() const { return y_; }
  std::span<const double> s() const { return s_; }

  /// 1 / (dy/ds) and (d2y/ds2) / (dy/ds), both from the same difference
  /// stencils that act on fields, so ddy is exact for fields linear in y.
  std::span<const double> inv_metric() const { return inv_ys_; }
  std::span<const double> metric_curvature() const { return yss_over_ys_; }

  /// Trapezoid weights in y on the mapped nodes.
  std::span<const double> weight_y() const { return wy_; }

  /// Smallest node spacing in either direction.
  double h_min() const { return h_min_; }

  /// Area of the truncated strip, length_x * ymax.
  double measure() const { return spec_.length_x * spec_.ymax; }

  bool operator==(const Grid& other) const { return spec_ == other.spec_; }

 private:
  GridSpec spec_;
  double dx_ = 0.0;
  double ds_ = 0.0;
  double h_min_ = 0.0;
  std::vector<double> x_, y_, s_, inv_ys_, yss_over_ys_, wy_;
};

using GridPtr = std::shared_ptr<const Grid>;

GridPtr make_grid(const GridSpec& spec);

/// The mapped wall-normal coordinate for s in [0, 1].
double mapped_y(double s, double ymax, double beta);

/// Scalar samples on the strip, one per node, stored row by row (x fastest).
class Field {
 public:
  Field() = default;
  explicit Field(GridPtr grid, double value = 0.0);

  const Grid& grid() const { return *grid_; }
  const GridPtr& grid_ptr() const { return grid_; }
  bool empty() const { return grid_ == nullptr; }

  int nx() const { return grid_->nx(); }
  int ny() const { return grid_->ny(); }
  std::size_t size() const { return values_.size(); }

  double& operator()(int i, int j) { return values_[grid_->index(i, j)]; }
  double operator()(int i, int j) const { return values_[grid_->index(i, j)]; }
  double& operator[](std::size_t k) { return values_[k]; }
  double operator[](std::size_t k) const { return values_[k]; }

  std::span<double> values() { return values_; }
  std::span<const double> values() const { return values_; }

  bool all_finite() const;
  double max_abs() const;

  Field& operator+=(const Field& other);
  Field& operator-=(const Field& other);
  Field& operator*=(const Field& other);
  Field& operator*=(double a);

 private:
  GridPtr grid_;
  std::vector<double> values_;
};

Field operator+(Field a, const Field& b);
Field operator-(Field a, const Field& b);
Field operator*(Field a, const Field& b);
Field operator*(double a, Field f);
Field operator*(Field f, double a);
Field operator-(Field f);
Field operator+(Field f, double a);
Field operator-(Field f, double a);

/// Pointwise quotient; the divisor must be nonzero everywhere.
Field divide(Field a, const Field& b);

/// Max over nodes of |a - b|.
double max_abs_diff(const Field& a, const Field& b);

/// Centered second-order periodic difference in x.
Field ddx(const Field& f);

/// Centered second-order periodic second difference in x.
Field ddx2(const Field& f);

/// Second-order wall-normal derivative through the mapping, with one-sided
/// second-order closures on the first and last rows.
Field ddy(const Field& f);

/// Second-order wall-normal second derivative through the mapping, with
/// four-point one-sided closures on the first and last rows.
Field ddy2(const Field& f);

}  // namespace conormhd
