#include <doctest.h>

#include <cmath>
#include <stdexcept>
#include <string>

#include "conormhd/analytic.hpp"
#include "conormhd/diagnostics.hpp"
#include "conormhd/dynamics.hpp"
#include "support.hpp"

using namespace conormhd;
using testsupport::sample;
using testsupport::square;

namespace {

TimeRing constant_ring(const State& s, double dt = 0.01) {
  TimeRing ring(3);
  for (int k = 0; k < 3; ++k) {
    State sk = s;
    sk.time = k * dt;
    ring.push(sk);
  }
  return ring;
}

PhysicalParams viscous(double eps = 0.01) {
  PhysicalParams p;
  p.epsilon = eps;
  return p;
}

State perturbed(const GridPtr& g) {
  InitialDataSpec spec;
  spec.amplitude = 1e-2;
  spec.modes.push_back(Mode{1, Profile::wall3, {0.2, 1.0, 0.5, 0.5}});
  return make_initial(g, viscous(), spec);
}

// Three stored levels of a viscous run ending near t_end.
TimeRing run_ring(const GridPtr& g, double t_end, double store_dt) {
  SolverOptions o;
  o.filter_coeff = 0.0;
  const Solver solver(o);
  TimeRing ring(3);
  State s = perturbed(g);
  ring.push(s);
  const int n = static_cast<int>(std::lround(t_end / store_dt));
  for (int k = 1; k <= n; ++k) {
    s = solver.advance_to(s, k * store_dt);
    ring.push(s);
  }
  return ring;
}

}  // namespace

TEST_CASE("all residuals vanish at equilibrium") {
  const GridPtr g = make_grid(square(32));
  const TimeRing ring = constant_ring(equilibrium(g, viscous()));
  CHECK(residual_div_identity(ring).max_abs() == 0.0);
  CHECK(residual_dyv1(ring).max_abs() == 0.0);
  CHECK(residual_dyv2(ring).max_abs() == 0.0);
  CHECK(residual_dyp(ring).max_abs() == 0.0);
  CHECK(residual_induction_b1(ring).max_abs() == 0.0);
  const auto values = evaluate_residuals(ring, 2);
  REQUIRE(values.size() == 4);
  for (std::size_t k = 0; k < 4; ++k) {
    CHECK(values[k].name == kResidualNames[k]);
    CHECK(values[k].max_norm == 0.0);
    CHECK(values[k].conormal_norm == 0.0);
  }
}

TEST_CASE("frozen magnetic field at rest") {
  const GridPtr g = make_grid(square(32));
  State s = equilibrium(g, viscous());
  s.b1 = sample(g, [](double x, double y) { return 0.01 * std::cos(x) * y * std::exp(-y); });
  // with v = 0 and b steady the identity reads d_y v1 = 0
  CHECK(residual_dyv1(constant_ring(s)).max_abs() == 0.0);
}

TEST_CASE("hydrostatic constant-density state") {
  const GridPtr g = make_grid(square(32));
  State s = equilibrium(g, viscous());
  s.rho = Field(g, 1.3);
  CHECK(residual_dyp(constant_ring(s)).max_abs() <= 1e-14);
  CHECK(residual_div_identity(constant_ring(s)).max_abs() == 0.0);
}

TEST_CASE("momentum and induction identities balance exactly") {
  const GridPtr g = make_grid(square(32));
  const TimeRing ring = run_ring(g, 0.05, 0.01);
  const State& mid = ring.middle();
  const Field sum = residual_dyv1(ring) + residual_induction_b1(ring) +
                    emf_product_defect(mid) + mid.v1 * div_b(mid);
  CHECK(sum.max_abs() <= 1e-14);
  CHECK(residual_dyv1(ring).max_abs() > 1e-10);
}

TEST_CASE("manufactured ring exposes the induction forcing") {
  // with forcing F in the b1 equation, the momentum identity leaves -F
  double err[2];
  int k = 0;
  for (int n : {32, 64}) {
    const GridPtr g = make_grid(square(n));
    const ManufacturedSolution sol = default_manufactured_solution(g->spec().length_x);
    const PhysicalParams p = viscous();
    TimeRing ring(3);
    const double t = 0.3, dt = 1e-3;
    for (int q = -1; q <= 1; ++q) ring.push(sol.sample(g, p, t + q * dt));
    const RhsBundle f = mms_forcing(sol, p, g, t);
    const Field offset = residual_dyv1(ring) + f.d_b1;
    err[k++] = max_norm_below(offset, 0.9);
    CHECK(f.d_b1.max_abs() > 100 * err[k - 1]);
  }
  CHECK(err[0] / err[1] > 3.2);
}

TEST_CASE("viscous-run residuals shrink under refinement") {
  double r[2][4];
  int k = 0;
  for (int n : {32, 64}) {
    const GridPtr g = make_grid(square(n));
    const TimeRing ring = run_ring(g, 0.4, 0.02 * 32 / n);
    const auto values = evaluate_residuals(ring, 1);
    for (int q = 0; q < 4; ++q) r[k][q] = values[q].max_norm;
    ++k;
  }
  for (int q = 0; q < 4; ++q) {
    const std::string name = kResidualNames[q];
    CAPTURE(name);
    CAPTURE(r[0][q]);
    CAPTURE(r[1][q]);
    CHECK(r[0][q] / r[1][q] > 2.5);
  }
}

TEST_CASE("region helpers") {
  const GridPtr g = make_grid(square(21));
  CHECK(rows_below(*g, 0.9) == 18);
  CHECK(rows_below(*g, 2.0) == 21);
  Field f(g, 1.0);
  f(0, 0) = 5.0;
  f(3, 20) = 9.0;
  CHECK(max_norm_below(f, 0.9) == 5.0);
  CHECK(max_norm_below(f, 0.9, 1) == 1.0);
  CHECK(max_norm_below(f, 1.1) == 9.0);
  const Field c(g, 2.0);
  CHECK(conormal_norm_below(c, 0, 2.0) == doctest::Approx(4.0 * g->measure()).epsilon(1e-12));
  CHECK(conormal_norm_below(c, 1, 0.9) < 4.0 * g->measure());
  CHECK(conormal_norm_below(Field(g), 2, 0.9) == 0.0);
}

TEST_CASE("residuals need a ring of at least three levels") {
  const GridPtr g = make_grid(square(16));
  TimeRing ring(3);
  ring.push(equilibrium(g, viscous()));
  CHECK_THROWS(residual_dyv1(ring));
}

TEST_CASE("wall trace monitor") {
  const GridPtr g = make_grid(square(32));
  const State s0 = perturbed(g);
  WallTraceMonitor mon(s0);
  CHECK(mon.record(s0) == 0.0);

  const Solver solver(SolverOptions{});
  const State eq = equilibrium(g, viscous());
  WallTraceMonitor eq_mon(eq);
  State e = eq;
  for (int k = 0; k < 10; ++k) e = solver.step(e, 1e-2);
  CHECK(eq_mon.record(e) == 0.0);

  State s = s0;
  for (int k = 1; k <= 10; ++k) {
    s = solver.advance_to(s, 0.05 * k);
    mon.record(s);
  }
  CHECK(mon.max_drift() <= 1e-8);

  State bad = s0;
  bad.b2(2, 0) += 1e-3;
  CHECK(mon.record(bad) == doctest::Approx(1e-3).epsilon(1e-9));
  CHECK(mon.max_drift() == doctest::Approx(1e-3).epsilon(1e-9));

  const auto drift = wall_trace_drift({{1.0, 2.0}, {1.0, 2.5}, {0.5, 2.0}});
  REQUIRE(drift.size() == 3);
  CHECK(drift[0] == 0.0);
  CHECK(drift[1] == 0.5);
  CHECK(drift[2] == 0.5);
}
