#include <doctest.h>

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "conormhd/conormal.hpp"
#include "conormhd/state.hpp"
#include "support.hpp"

using namespace conormhd;
using testsupport::max_error;
using testsupport::sample;
using testsupport::square;

namespace {

// int_0^ymax g(y) dy by composite Simpson in long double
template <class G>
long double simpson(G&& g, long double ymax, int n = 200000) {
  const long double h = ymax / n;
  long double sum = g(0.0L) + g(ymax);
  for (int k = 1; k < n; ++k) sum += (k % 2 ? 4.0L : 2.0L) * g(k * h);
  return sum * h / 3.0L;
}

State perturbed_state(const GridPtr& g, double t, double shift = 0.0) {
  State s = equilibrium(g, PhysicalParams{});
  s.time = t;
  for (int j = 0; j < g->ny(); ++j) {
    const double y = g->y()[j];
    for (int i = 0; i < g->nx(); ++i) {
      const double x = g->x()[i] + shift;
      const double prof = y * y * std::exp(-y);
      s.rho(i, j) = 1.0 + 0.01 * std::sin(x + t) * prof;
      s.v1(i, j) = 0.02 * std::cos(x - t) * prof;
      s.v2(i, j) = 0.01 * std::sin(2 * x) * prof * (1 + t);
      s.b1(i, j) = 0.01 * std::cos(x) * prof;
      s.b2(i, j) = 1.0 + 0.005 * std::sin(x) * prof * t;
    }
  }
  return s;
}

TimeRing ring_of(const GridPtr& g, double shift = 0.0) {
  TimeRing ring(5);
  for (int k = 0; k < 5; ++k) ring.push(perturbed_state(g, 0.02 * k, shift));
  return ring;
}

}  // namespace

TEST_CASE("weight phi") {
  CHECK(phi_weight(0.0) == 0.0);
  CHECK(phi_weight(1.0) == 0.5);
  CHECK(phi_prime(1.0) == 0.25);
  CHECK(std::abs(phi_weight(1e6) - 1.0) <= 1e-6);
  CHECK_THROWS_AS(phi_weight(-0.1), std::domain_error);
}

TEST_CASE("Z2 on constants, linear profiles and the wall row") {
  const GridPtr g = make_grid(square(32));
  CHECK(apply_zy(Field(g, 2.0)).max_abs() <= 1e-12);
  const Field f = sample(g, [](double, double y) { return y; });
  const Field z = apply_zy(f);
  CHECK(max_error(z, [](double, double y) { return y / (1 + y); }) <= 1e-10);
  const Field w = sample(g, [](double x, double y) { return std::exp(std::sin(x)) + y * y; });
  const Field zw = apply_zy(w);
  for (int i = 0; i < g->nx(); ++i) CHECK(zw(i, 0) == 0.0);
}

TEST_CASE("multi-index enumeration") {
  CHECK(multi_indices(2, 2).size() == 10);
  CHECK(multi_indices(2, 0).size() == 6);
  CHECK(multi_indices(3, 2).size() == 19);
  CHECK(multi_indices(0, 2).size() == 1);
  CHECK(multi_indices_exact(2, 2).size() == 6);
  const auto all = multi_indices(3, 1);
  for (std::size_t k = 1; k < all.size(); ++k) CHECK(all[k - 1].order() <= all[k].order());
  for (const MultiIndex& a : all) CHECK(a.a0 <= 1);
  CHECK(to_string(MultiIndex{1, 0, 2}) == "(1,0,2)");
}

TEST_CASE("apply_multi: identity, Z1 accuracy and linear-in-time Z0") {
  const GridPtr g = make_grid(square(32));
  const Field base = sample(g, [](double x, double y) { return std::sin(x) * std::exp(-y); });
  std::vector<Field> levels;
  const double dt = 0.1;
  for (int k = 0; k < 5; ++k) {
    Field f(g);
    for (std::size_t n = 0; n < f.size(); ++n) f.values()[n] = (k * dt) * base.values()[n];
    levels.push_back(f);
  }
  const Field id = apply_multi(levels, 2, dt, MultiIndex{0, 0, 0});
  CHECK(max_abs_diff(id, levels[2]) == 0.0);
  const Field d0 = apply_multi(levels, 2, dt, MultiIndex{1, 0, 0});
  CHECK(max_abs_diff(d0, base) <= 1e-13);
  const Field d00 = apply_multi(levels, 2, dt, MultiIndex{2, 0, 0});
  CHECK(d00.max_abs() <= 1e-12);
  CHECK_THROWS_AS(apply_multi(levels, 1, dt, MultiIndex{2, 0, 0}), std::out_of_range);

  double err[2];
  int k = 0;
  for (int n : {32, 64}) {
    const GridPtr gn = make_grid(square(n));
    const Field s = sample(gn, [](double x, double) { return std::sin(x); });
    const std::vector<Field> one{s};
    err[k++] = max_error(apply_multi(one, 0, 1.0, MultiIndex{0, 1, 0}),
                         [](double x, double) { return std::cos(x); });
  }
  CHECK(err[0] / err[1] == doctest::Approx(4.0).epsilon(0.05));
}

TEST_CASE("Z1 and Z2 commute") {
  const GridPtr g = make_grid(square(24));
  const Field f = sample(g, [](double x, double y) { return std::cos(2 * x) * y * std::exp(-y); });
  CHECK(max_abs_diff(apply_spatial(f, 1, 1), apply_zy(ddx(f))) <= 1e-13);
  CHECK(max_abs_diff(apply_zy(ddx(f)), ddx(apply_zy(f))) <= 1e-13);
}

TEST_CASE("L2 norms of trivial fields") {
  const GridPtr g = make_grid(square(32));
  CHECK(l2_squared(Field(g)) == 0.0);
  CHECK(l2_squared(Field(g, 3.0)) == doctest::Approx(9.0 * g->measure()).epsilon(1e-12));
  CHECK(spatial_norm_squared(Field(g, 3.0), 0) ==
        doctest::Approx(9.0 * g->measure()).epsilon(1e-12));
  // higher orders of a constant add only vanishing derivatives
  CHECK(spatial_norm_squared(Field(g, 3.0), 2) ==
        doctest::Approx(9.0 * g->measure()).epsilon(1e-10));
}

TEST_CASE("conormal norms match extended-precision closed forms") {
  const GridPtr g = make_grid(square(128));
  const Field f = sample(g, [](double x, double y) { return std::cos(x) * std::exp(-y); });
  const long double ymax = g->spec().ymax;
  const long double pi = std::numbers::pi_v<long double>;
  const long double e0 = simpson([](long double y) { return std::exp(-2 * y); }, ymax);
  const long double e2 = simpson(
      [](long double y) {
        const long double phi = y / (1 + y);
        return phi * phi * std::exp(-2 * y);
      },
      ymax);
  CHECK(l2_squared(f) == doctest::Approx(static_cast<double>(pi * e0)).epsilon(1e-3));
  CHECK(l2_squared(apply_spatial(f, 1, 0)) ==
        doctest::Approx(static_cast<double>(pi * e0)).epsilon(1e-3));
  CHECK(l2_squared(apply_zy(f)) == doctest::Approx(static_cast<double>(pi * e2)).epsilon(1e-3));
  CHECK(spatial_norm_squared(f, 1) ==
        doctest::Approx(static_cast<double>(pi * (2 * e0 + e2))).epsilon(1e-3));
}

TEST_CASE("time ring bookkeeping") {
  const GridPtr g = make_grid(square(16));
  TimeRing ring(3);
  State s = equilibrium(g, PhysicalParams{});
  for (int k = 0; k < 4; ++k) {
    s.time = 0.5 * k;
    ring.push(s);
  }
  CHECK(ring.full());
  CHECK(ring.size() == 3);
  CHECK(ring.spacing() == doctest::Approx(0.5));
  CHECK(ring.middle_time() == doctest::Approx(1.0));
  s.time = 1.6;
  CHECK_THROWS_AS(ring.push(s), std::invalid_argument);
  s.time = 0.0;
  CHECK_THROWS_AS(ring.push(s), std::invalid_argument);
}

TEST_CASE("energy functional properties") {
  const GridPtr g = make_grid(square(32));
  const TimeRing ring = ring_of(g);

  double prev = 0.0;
  for (int m = 0; m <= 3; ++m) {
    EnergyAccumulator acc(m);
    acc.add(energy_integrands(ring, m, 2));
    const EnergyReport& r = acc.report();
    CHECK(r.total >= prev);
    prev = r.total;
    for (double c : r.columns()) CHECK(c >= 0.0);
    CHECK(r.total == doctest::Approx(r.sup_energy).epsilon(1e-14));
  }

  // a whole-node shift in x leaves every block unchanged
  const TimeRing shifted = ring_of(g, g->dx());
  const EnergyIntegrands a = energy_integrands(ring, 2, 2);
  const EnergyIntegrands b = energy_integrands(shifted, 2, 2);
  CHECK(b.dy == doctest::Approx(a.dy).epsilon(1e-12));
  CHECK(b.eps_grad == doctest::Approx(a.eps_grad).epsilon(1e-12));
  for (std::size_t k = 0; k < a.kinetic.size(); ++k) {
    CHECK(b.kinetic[k] == doctest::Approx(a.kinetic[k]).epsilon(1e-10));
    CHECK(b.magnetic[k] == doctest::Approx(a.magnetic[k]).epsilon(1e-10));
    CHECK(b.acoustic[k] == doctest::Approx(a.acoustic[k]).epsilon(1e-10));
  }
}

TEST_CASE("steady magnetic perturbation contributes only the magnetic block") {
  const GridPtr g = make_grid(square(32));
  State s = equilibrium(g, PhysicalParams{});
  s.b1 = sample(g, [](double x, double y) { return 0.01 * std::cos(x) * y * y * std::exp(-y); });
  TimeRing ring(5);
  for (int k = 0; k < 5; ++k) {
    s.time = 0.01 * k;
    ring.push(s);
  }
  EnergyAccumulator acc(2);
  acc.add(energy_integrands(ring, 2, 2));
  const EnergyReport& r = acc.report();
  CHECK(r.kinetic == 0.0);
  CHECK(r.acoustic == 0.0);
  CHECK(r.magnetic > 0.0);
  CHECK(r.total == doctest::Approx(r.magnetic).epsilon(1e-14));
}

TEST_CASE("accumulator integrates in time with the trapezoid rule") {
  const GridPtr g = make_grid(square(32));
  TimeRing ring(5);
  EnergyAccumulator acc(1);
  CHECK(acc.empty());
  std::vector<EnergyIntegrands> seen;
  for (int k = 0; k < 8; ++k) {
    ring.push(perturbed_state(g, 0.02 * k));
    if (!ring.full()) continue;
    seen.push_back(energy_integrands(ring, 1, 2));
    acc.add(seen.back());
  }
  double integral = 0.0;
  for (std::size_t k = 1; k < seen.size(); ++k) {
    integral += 0.5 * (seen[k].time - seen[k - 1].time) * (seen[k].dy + seen[k - 1].dy);
  }
  CHECK(acc.report().dy == doctest::Approx(integral).epsilon(1e-12));
  CHECK(acc.report().time == doctest::Approx(seen.back().time));
}
