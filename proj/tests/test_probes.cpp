#include <doctest.h>

#include <cmath>
#include <stdexcept>
#include <vector>

#include "conormhd/dynamics.hpp"
#include "conormhd/probes.hpp"
#include "support.hpp"

using namespace conormhd;
using testsupport::square;

namespace {

AnalyticField constant(double c) {
  AnalyticField f;
  f.base = c;
  return f;
}

}  // namespace

TEST_CASE("product probe trivial cases") {
  const GridPtr g = make_grid(square(32));
  const AnalyticField f = synthetic_field(7, g->spec().length_x);
  const TimeSeries sf = sample_series(f, g, 0.0, 0.05, 5, 2);
  const TimeSeries zero = sample_series(constant(0.0), g, 0.0, 0.05, 5, 2);
  const TimeSeries one = sample_series(constant(1.0), g, 0.0, 0.05, 5, 2);
  CHECK(probe_product_inequality(sf, zero, 2, 2) == 0.0);
  const double r = probe_product_inequality(one, sf, 2, 2);
  CHECK(r > 0.0);
  CHECK(r <= 1.0);
}

TEST_CASE("embedding probe trivial cases") {
  const GridPtr g = make_grid(square(32));
  CHECK(probe_embedding(sample_series(constant(0.0), g, 0.0, 0.05, 5, 2), 2) == 0.0);
  const double r = probe_embedding(sample_series(constant(3.0), g, 0.0, 0.05, 5, 2), 2);
  CHECK(r > 0.0);
  CHECK(r <= 1.0 / g->measure() * (1 + 1e-12));
}

TEST_CASE("series layout validation") {
  const GridPtr g = make_grid(square(16));
  const TimeSeries s = sample_series(constant(1.0), g, 0.0, 0.05, 5, 1);
  CHECK_THROWS_AS(s.validate(2), std::invalid_argument);
  CHECK_NOTHROW(s.validate(1));
  const TimeSeries short_series = sample_series(constant(1.0), g, 0.0, 0.05, 1, 2);
  CHECK_THROWS_AS(short_series.validate(2), std::invalid_argument);
  const TimeSeries other = sample_series(constant(1.0), g, 0.0, 0.1, 5, 1);
  CHECK_THROWS_AS(probe_product_inequality(s, other, 1, 1), std::invalid_argument);
}

TEST_CASE("synthetic fields are reproducible") {
  const GridPtr g = make_grid(square(16));
  const Field a = synthetic_field(1234, g->spec().length_x).sample(g, 0.3);
  const Field b = synthetic_field(1234, g->spec().length_x).sample(g, 0.3);
  const Field c = synthetic_field(1235, g->spec().length_x).sample(g, 0.3);
  CHECK(max_abs_diff(a, b) == 0.0);
  CHECK(max_abs_diff(a, c) > 0.0);
  CHECK(a.all_finite());
}

TEST_CASE("series from solver states") {
  const GridPtr g = make_grid(square(24));
  PhysicalParams p;
  p.epsilon = 0.01;
  InitialDataSpec spec;
  spec.amplitude = 1e-2;
  spec.modes.push_back(Mode{1, Profile::wall3, {0.0, 1.0, 0.5, 0.5}});
  const Solver solver(SolverOptions{});
  std::vector<State> states{make_initial(g, p, spec)};
  for (int k = 1; k < 7; ++k) states.push_back(solver.advance_to(states.back(), 0.02 * k));
  const TimeSeries v1 = series_from_states(states, [](const State& s) { return s.v1; }, 2);
  CHECK(v1.dt == doctest::Approx(0.02));
  CHECK(v1.levels.size() == 7);
  const double r = probe_embedding(v1, 2);
  CHECK(std::isfinite(r));
  CHECK(r > 0.0);
}

TEST_CASE("probe suite regression on the default grid") {
  const ProbeSuiteResult r = run_probe_suite(square(64), 20, 2);
  REQUIRE(r.product.size() == 20);
  REQUIRE(r.embedding.size() == 20);
  for (double v : r.product) CHECK(std::isfinite(v));
  // first-run maxima
  CHECK(r.product_max == doctest::Approx(0.12199771457246432).epsilon(1e-9));
  CHECK(r.embedding_max == doctest::Approx(0.033815324873331415).epsilon(1e-9));
}
