#include <doctest.h>

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "conormhd/grid.hpp"
#include "support.hpp"

using namespace conormhd;
using testsupport::max_error;
using testsupport::sample;
using testsupport::square;

TEST_CASE("uniform mapping with beta = 0") {
  // five nodes are below the grid minimum, so check the coordinate map itself
  const double expect[] = {0.0, 0.25, 0.5, 0.75, 1.0};
  for (int j = 0; j < 5; ++j) CHECK(mapped_y(j / 4.0, 1.0, 0.0) == expect[j]);
  GridSpec s;
  s.ny = 5;
  s.ymax = 1.0;
  s.stretch_beta = 0.0;
  CHECK_THROWS_AS(make_grid(s), std::invalid_argument);
  s.ny = 9;
  const GridPtr g = make_grid(s);
  for (int j = 0; j < 5; ++j) CHECK(g->y()[2 * j] == doctest::Approx(expect[j]).epsilon(1e-15));
}

TEST_CASE("mapping endpoints are exact for any beta") {
  for (double beta : {0.0, 0.5, 2.0, 4.0}) {
    GridSpec s = square(17);
    s.stretch_beta = beta;
    const GridPtr g = make_grid(s);
    CHECK(g->y()[0] == 0.0);
    CHECK(g->y()[16] == s.ymax);
  }
}

TEST_CASE("first stretched node matches extended precision") {
  GridSpec s;
  s.nx = 5;
  s.ny = 9;
  s.ymax = 1.0;
  s.stretch_beta = 2.0;
  const GridPtr g = make_grid(s);
  const long double exact = std::expm1(2.0L / 8.0L) / std::expm1(2.0L);
  CHECK(std::abs(g->y()[1] - static_cast<double>(exact)) <= 1e-16);
  CHECK(mapped_y(0.125, 1.0, 2.0) == doctest::Approx(static_cast<double>(exact)).epsilon(1e-15));
}

TEST_CASE("grid parameter validation") {
  GridSpec s = square(64);
  s.nx = 3;
  CHECK_THROWS_AS(make_grid(s), std::invalid_argument);
  s = square(64);
  s.ymax = 0.0;
  CHECK_THROWS_AS(make_grid(s), std::invalid_argument);
  s = square(64);
  s.stretch_beta = -1.0;
  CHECK_THROWS_AS(make_grid(s), std::invalid_argument);
}

TEST_CASE("derivatives of a constant vanish") {
  const GridPtr g = make_grid(square(32));
  const Field c(g, 3.5);
  CHECK(ddx(c).max_abs() == 0.0);
  CHECK(ddx2(c).max_abs() == 0.0);
  CHECK(ddy(c).max_abs() <= 1e-12);
  CHECK(ddy2(c).max_abs() <= 1e-12);
}

TEST_CASE("ddx converges at second order on a periodic sine") {
  double err[2];
  int k = 0;
  for (int n : {32, 64}) {
    const GridPtr g = make_grid(square(n));
    const double w = 2.0 * std::numbers::pi / g->spec().length_x;
    const Field f = sample(g, [&](double x, double) { return std::sin(w * x); });
    err[k++] = max_error(ddx(f), [&](double x, double) { return w * std::cos(w * x); });
  }
  CHECK(err[0] / err[1] == doctest::Approx(4.0).epsilon(0.05));
}

TEST_CASE("ddx is linear away from the periodic seam") {
  const GridPtr g = make_grid(square(16));
  const Field f = sample(g, [](double x, double) { return x; });
  const Field d = ddx(f);
  for (int i = 1; i < g->nx() - 1; ++i) CHECK(d(i, 3) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(std::abs(d(0, 3) - 1.0) > 1.0);
}

TEST_CASE("ddy is exact on linear functions of y") {
  const GridPtr g = make_grid(square(33));
  const Field f = sample(g, [](double, double y) { return y; });
  CHECK(max_error(ddy(f), [](double, double) { return 1.0; }) <= 1e-10);
}

TEST_CASE("ddy2 of y^2 approaches 2 at second order") {
  double err[3];
  int k = 0;
  for (int n : {32, 64, 128}) {
    const GridPtr g = make_grid(square(n));
    const Field f = sample(g, [](double, double y) { return y * y; });
    err[k++] = max_error(ddy2(f), [](double, double) { return 2.0; });
  }
  CHECK(err[2] < 5e-3);
  CHECK(err[0] / err[1] == doctest::Approx(4.0).epsilon(0.15));
  CHECK(err[1] / err[2] == doctest::Approx(4.0).epsilon(0.15));
}

TEST_CASE("ddy and ddy2 converge on a smooth profile") {
  double e1[2], e2[2];
  int k = 0;
  for (int n : {64, 128}) {
    const GridPtr g = make_grid(square(n));
    const Field f = sample(g, [](double, double y) { return std::exp(-y / 3) * std::cos(y / 2); });
    e1[k] = max_error(ddy(f), [](double, double y) {
      return std::exp(-y / 3) * (-std::cos(y / 2) / 3 - std::sin(y / 2) / 2);
    });
    e2[k] = max_error(ddy2(f), [](double, double y) {
      return std::exp(-y / 3) * (std::cos(y / 2) / 9 + std::sin(y / 2) / 3 - std::cos(y / 2) / 4);
    });
    ++k;
  }
  CHECK(e1[0] / e1[1] == doctest::Approx(4.0).epsilon(0.15));
  CHECK(e2[0] / e2[1] == doctest::Approx(4.0).epsilon(0.15));
}

TEST_CASE("trapezoid weights integrate constants exactly") {
  const GridPtr g = make_grid(square(40));
  double sum = 0.0;
  for (double w : g->weight_y()) sum += w;
  CHECK(sum * g->dx() * g->nx() == doctest::Approx(g->measure()).epsilon(1e-12));
}

TEST_CASE("field helpers") {
  const GridPtr g = make_grid(square(8));
  Field a(g, 2.0), b(g, 4.0);
  CHECK(max_abs_diff(a, b) == 2.0);
  CHECK(divide(a, b).max_abs() == 0.5);
  Field c(g, 1.0);
  c(2, 3) = std::nan("");
  CHECK_FALSE(c.all_finite());
  const GridPtr other = make_grid(square(16));
  CHECK_THROWS_AS(max_abs_diff(a, Field(other)), std::invalid_argument);
}

TEST_CASE("operators are linear") {
  const GridPtr g = make_grid(square(24));
  const Field f = sample(g, [](double x, double y) { return std::sin(x) * std::exp(-y); });
  const Field h = sample(g, [](double x, double y) { return std::cos(2 * x) + y * y; });
  const double a = 0.37, b = -1.9;
  Field comb(g);
  for (std::size_t k = 0; k < comb.size(); ++k) {
    comb.values()[k] = a * f.values()[k] + b * h.values()[k];
  }
  for (Field (*op)(const Field&) : {&ddx, &ddx2, &ddy, &ddy2}) {
    const Field lhs = op(comb);
    const Field of = op(f), oh = op(h);
    double dev = 0.0, scale = 0.0;
    for (std::size_t k = 0; k < lhs.size(); ++k) {
      dev = std::max(dev, std::abs(lhs.values()[k] - a * of.values()[k] - b * oh.values()[k]));
      scale = std::max(scale, std::abs(lhs.values()[k]));
    }
    CHECK(dev <= 1e-12 * std::max(1.0, scale));
  }
}

TEST_CASE("ddx conserves the discrete x-mean row by row") {
  const GridPtr g = make_grid(square(20));
  const Field f = sample(g, [](double x, double y) { return std::exp(std::sin(x)) * (1 + y); });
  const Field d = ddx(f);
  for (int j = 0; j < g->ny(); ++j) {
    double sum = 0.0;
    for (int i = 0; i < g->nx(); ++i) sum += d(i, j);
    CHECK(std::abs(sum) <= 1e-12);
  }
}

TEST_CASE("ddx and ddy commute") {
  const GridPtr g = make_grid(square(20));
  const Field f = sample(g, [](double x, double y) { return std::cos(x) * std::exp(-y / 2) * y; });
  CHECK(max_abs_diff(ddx(ddy(f)), ddy(ddx(f))) <= 1e-13);
}
