#include "conormhd/grid.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace conormhd {

namespace {

// First difference in the computational coordinate, undivided by ds.
// Written in difference form so that constant columns give exact zeros.
inline double first_diff(const double* f, std::size_t stride, int j, int n) {
  if (j == 0) {
    return 2.0 * (f[stride] - f[0]) - 0.5 * (f[2 * stride] - f[0]);
  }
  if (j == n - 1) {
    const double* g = f + static_cast<std::size_t>(j) * stride;
    return 1.5 * (g[0] - g[-static_cast<std::ptrdiff_t>(stride)]) -
           0.5 * (g[-static_cast<std::ptrdiff_t>(stride)] -
                  g[-2 * static_cast<std::ptrdiff_t>(stride)]);
  }
  const double* g = f + static_cast<std::size_t>(j) * stride;
  return 0.5 * (g[stride] - g[-static_cast<std::ptrdiff_t>(stride)]);
}

// Second difference in the computational coordinate, undivided by ds^2.
inline double second_diff(const double* f, std::size_t stride, int j, int n) {
  const auto st = static_cast<std::ptrdiff_t>(stride);
  if (j == 0) {
    return -5.0 * (f[st] - f[0]) + 4.0 * (f[2 * st] - f[0]) - (f[3 * st] - f[0]);
  }
  const double* g = f + static_cast<std::ptrdiff_t>(j) * st;
  if (j == n - 1) {
    return -5.0 * (g[-st] - g[0]) + 4.0 * (g[-2 * st] - g[0]) - (g[-3 * st] - g[0]);
  }
  return (g[st] - g[0]) + (g[-st] - g[0]);
}

void require_same_grid(const Field& a, const Field& b) {
  if (a.grid_ptr() != b.grid_ptr() && !(a.grid() == b.grid())) {
    throw std::invalid_argument("field grids differ");
  }
}

}  // namespace

void GridSpec::validate() const {
  if (nx < 5) throw std::invalid_argument("grid: nx must be >= 5, got " + std::to_string(nx));
  if (ny < 8) throw std::invalid_argument("grid: ny must be >= 8, got " + std::to_string(ny));
  if (!(length_x > 0.0) || !std::isfinite(length_x)) {
    throw std::invalid_argument("grid: length_x must be positive");
  }
  if (!(ymax > 0.0) || !std::isfinite(ymax)) {
    throw std::invalid_argument("grid: ymax must be positive");
  }
  if (!(stretch_beta >= 0.0) || !std::isfinite(stretch_beta)) {
    throw std::invalid_argument("grid: stretch_beta must be >= 0");
  }
}

double mapped_y(double s, double ymax, double beta) {
  if (beta == 0.0) return ymax * s;
  return ymax * std::expm1(beta * s) / std::expm1(beta);
}

Grid::Grid(const GridSpec& spec) : spec_(spec) {
  spec_.validate();
  const int nx = spec_.nx;
  const int ny = spec_.ny;
  dx_ = spec_.length_x / nx;
  ds_ = 1.0 / (ny - 1);

  x_.resize(nx);
  for (int i = 0; i < nx; ++i) x_[i] = i * spec_.length_x / nx;

  s_.resize(ny);
  y_.resize(ny);
  for (int j = 0; j < ny; ++j) {
    s_[j] = static_cast<double>(j) / (ny - 1);
    y_[j] = mapped_y(s_[j], spec_.ymax, spec_.stretch_beta);
  }
  y_.front() = 0.0;
  y_.back() = spec_.ymax;

  inv_ys_.resize(ny);
  yss_over_ys_.resize(ny);
  for (int j = 0; j < ny; ++j) {
    const double ys = first_diff(y_.data(), 1, j, ny) / ds_;
    const double yss = second_diff(y_.data(), 1, j, ny) / (ds_ * ds_);
    inv_ys_[j] = 1.0 / ys;
    yss_over_ys_[j] = yss / ys;
  }

  wy_.assign(ny, 0.0);
  for (int j = 0; j + 1 < ny; ++j) {
    const double h = y_[j + 1] - y_[j];
    wy_[j] += 0.5 * h;
    wy_[j + 1] += 0.5 * h;
  }

  h_min_ = dx_;
  for (int j = 0; j + 1 < ny; ++j) h_min_ = std::min(h_min_, y_[j + 1] - y_[j]);
}

GridPtr make_grid(const GridSpec& spec) { return std::make_shared<const Grid>(spec); }

Field::Field(GridPtr grid, double value) : grid_(std::move(grid)) {
  if (!grid_) throw std::invalid_argument("Field requires a grid");
  values_.assign(grid_->size(), value);
}

bool Field::all_finite() const {
  return std::all_of(values_.begin(), values_.end(), [](double v) { return std::isfinite(v); });
}

double Field::max_abs() const {
  double m = 0.0;
  for (double v : values_) m = std::max(m, std::abs(v));
  return m;
}

Field& Field::operator+=(const Field& other) {
  require_same_grid(*this, other);
  for (std::size_t k = 0; k < values_.size(); ++k) values_[k] += other.values_[k];
  return *this;
}

Field& Field::operator-=(const Field& other) {
  require_same_grid(*this, other);
  for (std::size_t k = 0; k < values_.size(); ++k) values_[k] -= other.values_[k];
  return *this;
}

Field& Field::operator*=(const Field& other) {
  require_same_grid(*this, other);
  for (std::size_t k = 0; k < values_.size(); ++k) values_[k] *= other.values_[k];
  return *this;
}

Field& Field::operator*=(double a) {
  for (double& v : values_) v *= a;
  return *this;
}

Field operator+(Field a, const Field& b) { return a += b; }
Field operator-(Field a, const Field& b) { return a -= b; }
Field operator*(Field a, const Field& b) { return a *= b; }
Field operator*(double a, Field f) { return f *= a; }
Field operator*(Field f, double a) { return f *= a; }

Field operator-(Field f) {
  for (double& v : f.values()) v = -v;
  return f;
}

Field operator+(Field f, double a) {
  for (double& v : f.values()) v += a;
  return f;
}

Field operator-(Field f, double a) {
  for (double& v : f.values()) v -= a;
  return f;
}

Field divide(Field a, const Field& b) {
  require_same_grid(a, b);
  for (std::size_t k = 0; k < a.size(); ++k) a[k] /= b[k];
  return a;
}

double max_abs_diff(const Field& a, const Field& b) {
  require_same_grid(a, b);
  double m = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) m = std::max(m, std::abs(a[k] - b[k]));
  return m;
}

Field ddx(const Field& f) {
  const Grid& g = f.grid();
  const int nx = g.nx();
  const int ny = g.ny();
  const double c = 0.5 / g.dx();
  Field out(f.grid_ptr());
  for (int j = 0; j < ny; ++j) {
    for (int i = 0; i < nx; ++i) {
      const int ip = (i + 1 == nx) ? 0 : i + 1;
      const int im = (i == 0) ? nx - 1 : i - 1;
      out(i, j) = c * (f(ip, j) - f(im, j));
    }
  }
  return out;
}

Field ddx2(const Field& f) {
  const Grid& g = f.grid();
  const int nx = g.nx();
  const int ny = g.ny();
  const double c = 1.0 / (g.dx() * g.dx());
  Field out(f.grid_ptr());
  for (int j = 0; j < ny; ++j) {
    for (int i = 0; i < nx; ++i) {
      const int ip = (i + 1 == nx) ? 0 : i + 1;
      const int im = (i == 0) ? nx - 1 : i - 1;
      out(i, j) = c * ((f(ip, j) - f(i, j)) + (f(im, j) - f(i, j)));
    }
  }
  return out;
}

Field ddy(const Field& f) {
  const Grid& g = f.grid();
  const int nx = g.nx();
  const int ny = g.ny();
  const double inv_ds = 1.0 / g.ds();
  const auto inv_ys = g.inv_metric();
  const std::size_t stride = static_cast<std::size_t>(nx);
  Field out(f.grid_ptr());
  const double* base = f.values().data();
  for (int j = 0; j < ny; ++j) {
    const double scale = inv_ds * inv_ys[j];
    for (int i = 0; i < nx; ++i) {
      out(i, j) = scale * first_diff(base + i, stride, j, ny);
    }
  }
  return out;
}

Field ddy2(const Field& f) {
  const Grid& g = f.grid();
  const int nx = g.nx();
  const int ny = g.ny();
  const double inv_ds = 1.0 / g.ds();
  const double inv_ds2 = inv_ds * inv_ds;
  const auto inv_ys = g.inv_metric();
  const auto curv = g.metric_curvature();
  const std::size_t stride = static_cast<std::size_t>(nx);
  Field out(f.grid_ptr());
  const double* base = f.values().data();
  for (int j = 0; j < ny; ++j) {
    const double a = inv_ys[j] * inv_ys[j];
    for (int i = 0; i < nx; ++i) {
      const double fs = inv_ds * first_diff(base + i, stride, j, ny);
      const double fss = inv_ds2 * second_diff(base + i, stride, j, ny);
      out(i, j) = a * (fss - curv[j] * fs);
    }
  }
  return out;
}

}  // namespace conormhd
