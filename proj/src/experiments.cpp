#include "conormhd/experiments.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <future>
#include <limits>
#include <numbers>
#include <stdexcept>

#include "conormhd/analytic.hpp"
#include "conormhd/commutator.hpp"
#include "conormhd/diagnostics.hpp"
#include "conormhd/probes.hpp"

namespace conormhd {

using nlohmann::json;

std::string RunKind::label() const {
  if (ideal) return "ideal";
  char buf[40];
  std::snprintf(buf, sizeof buf, "eps_%g", epsilon);
  return buf;
}

namespace {

double nan() { return std::numeric_limits<double>::quiet_NaN(); }

}  // namespace

RunResult run_single(const Config& cfg, const RunKind& kind, const RunOptions& opts) {
  cfg.validate();
  RunResult out;
  out.kind = kind;

  const GridPtr grid = make_grid(cfg.grid);
  PhysicalParams params = cfg.physics;
  params.epsilon = kind.ideal ? 0.0 : kind.epsilon;
  params.validate(kind.ideal);

  SolverOptions so;
  so.ideal = kind.ideal;
  so.control.cfl_adv = cfg.time.cfl_adv;
  so.control.cfl_visc = cfg.time.cfl_visc;
  so.filter_coeff = cfg.filter_coeff;
  const Solver solver(so);

  const int m = cfg.norms.m;
  const int a0 = std::min(m, cfg.norms.alpha0_max);
  const std::size_t depth = static_cast<std::size_t>(std::max(2 * a0 + 1, 3));
  const int lookahead = static_cast<int>(depth - 1) / 2;
  const int per = store_per_report(cfg);
  const int total = static_cast<int>(std::lround(cfg.time.horizon / cfg.time.store_dt));
  const double store_dt = cfg.time.store_dt;
  const double horizon_guard = cfg.time.horizon * (1.0 + 1e-12);

  State s = make_initial(grid, params, cfg.initial);
  TimeRing ring(depth);
  ring.push(s);
  EnergyAccumulator acc(m);
  WallTraceMonitor wall(s);

  auto record_constraints = [&](const State& st) {
    const Field db = div_b(st);
    out.diagnostics.push_back(
        {st.time, "div_b", db.max_abs(), std::sqrt(spatial_norm_squared(db, std::max(m - 1, 0)))});
    out.diagnostics.push_back({st.time, "wall_trace", wall.record(st), 0.0});
  };
  out.divb_initial = div_b(s).max_abs();
  out.divb_max = out.divb_initial;
  out.snapshots.push_back(s);
  record_constraints(s);

  const Solver::StepHook hook = [&](const State& st) {
    if (st.time > horizon_guard) return;
    wall.record(st);
    out.divb_max = std::max(out.divb_max, div_b(st).max_abs());
  };

  try {
    for (int k = 1; k <= total + lookahead; ++k) {
      s = solver.advance_to(std::move(s), k * store_dt, hook);
      out.steps += solver.steps_taken();
      ring.push(s);
      if (k <= total && k % per == 0) {
        out.snapshots.push_back(s);
        record_constraints(s);
      }
      if (ring.size() < depth) continue;
      const int c = k - lookahead;
      if (c > total) continue;
      acc.add(energy_integrands(ring, m, cfg.norms.alpha0_max));
      out.max_nm = std::max(out.max_nm, acc.report().total);
      if (c % per != 0) continue;
      out.norms.push_back(acc.report());
      for (const ResidualValue& r : evaluate_residuals(ring, m, opts.residual_s_limit)) {
        out.diagnostics.push_back({ring.middle_time(), r.name, r.max_norm, r.conormal_norm});
      }
    }
  } catch (const SolverAbort& e) {
    out.aborted = true;
    out.abort_message = e.what();
    out.abort_time = e.time();
  }
  out.wall_drift_max = wall.max_drift();
  std::stable_sort(out.diagnostics.begin(), out.diagnostics.end(),
                   [](const DiagnosticRow& a, const DiagnosticRow& b) { return a.time < b.time; });
  if (opts.write_outputs) write_run(cfg, out, cfg.output.dir + "/" + kind.label());
  return out;
}

std::vector<GapRow> gap_series(const RunResult& viscous, const RunResult& ideal) {
  if (viscous.snapshots.empty() || ideal.snapshots.empty()) return {};
  if (!(viscous.snapshots.front().grid() == ideal.snapshots.front().grid())) {
    throw std::invalid_argument("gap_series: runs use different grids");
  }
  const std::size_t n = std::min(viscous.snapshots.size(), ideal.snapshots.size());
  std::vector<GapRow> rows;
  for (std::size_t k = 0; k < n; ++k) {
    const State& a = viscous.snapshots[k];
    const State& b = ideal.snapshots[k];
    if (a.time != b.time) throw std::invalid_argument("gap_series: report times differ");
    GapRow r{a.time, viscous.kind.epsilon, 0.0, 0.0};
    const Field* fa[] = {&a.rho, &a.v1, &a.v2, &a.b1, &a.b2};
    const Field* fb[] = {&b.rho, &b.v1, &b.v2, &b.b1, &b.b2};
    for (int f = 0; f < 5; ++f) {
      const Field d = *fa[f] - *fb[f];
      r.gap_sup = std::max(r.gap_sup, d.max_abs());
      r.gap_dy_sup = std::max(r.gap_dy_sup, ddy(d).max_abs());
    }
    rows.push_back(r);
  }
  return rows;
}

double gap_max(const std::vector<GapRow>& rows) {
  double g = 0.0;
  for (const GapRow& r : rows) g = std::max({g, r.gap_sup, r.gap_dy_sup});
  return g;
}

FitResult fit_rate(const std::vector<double>& eps, const std::vector<double>& g) {
  if (eps.size() != g.size()) throw std::invalid_argument("fit_rate: length mismatch");
  if (eps.size() < 3) throw std::invalid_argument("fit_rate: needs at least three pairs");
  const std::size_t n = eps.size();
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  std::vector<double> lx(n), ly(n);
  for (std::size_t k = 0; k < n; ++k) {
    if (!(eps[k] > 0.0) || !(g[k] > 0.0)) {
      throw std::invalid_argument("fit_rate: inputs must be positive");
    }
    lx[k] = std::log(eps[k]);
    ly[k] = std::log(g[k]);
    sx += lx[k];
    sy += ly[k];
    sxx += lx[k] * lx[k];
    sxy += lx[k] * ly[k];
  }
  const double denom = n * sxx - sx * sx;
  if (!(std::abs(denom) > 0.0)) throw std::invalid_argument("fit_rate: epsilons coincide");
  FitResult r;
  r.q = (n * sxy - sx * sy) / denom;
  const double logc = (sy - r.q * sx) / n;
  r.c = std::exp(logc);
  double ss = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    const double e = ly[k] - (logc + r.q * lx[k]);
    ss += e * e;
  }
  r.residual = std::sqrt(ss / n);
  return r;
}

double uniformity_ratio(const std::vector<double>& max_nm) {
  if (max_nm.empty()) return 1.0;
  const auto [lo, hi] = std::minmax_element(max_nm.begin(), max_nm.end());
  if (*hi == 0.0) return 1.0;
  if (*lo == 0.0) return std::numeric_limits<double>::infinity();
  return *hi / *lo;
}

SweepResult run_sweep(const Config& cfg, const RunOptions& opts) {
  cfg.validate();
  SweepResult r;
  r.config = cfg;
  RunOptions member = opts;
  member.write_outputs = false;

  auto ideal = std::async(std::launch::async, [&] { return run_single(cfg, RunKind::inviscid(), member); });
  std::vector<std::future<RunResult>> futures;
  for (double eps : cfg.epsilon_list) {
    futures.push_back(std::async(std::launch::async,
                                 [&, eps] { return run_single(cfg, RunKind::viscous(eps), member); }));
  }
  r.ideal = ideal.get();
  for (auto& f : futures) r.runs.push_back(f.get());

  r.failed = r.ideal.aborted;
  std::vector<double> nm;
  for (const RunResult& run : r.runs) {
    r.failed = r.failed || run.aborted;
    nm.push_back(run.max_nm);
    r.gaps.push_back(gap_series(run, r.ideal));
    r.gap_max.push_back(gap_max(r.gaps.back()));
  }
  r.uniformity_ratio = uniformity_ratio(nm);

  r.gap_strictly_decreasing = r.gap_max.size() >= 2;
  for (std::size_t k = 1; k < r.gap_max.size(); ++k) {
    r.gap_strictly_decreasing = r.gap_strictly_decreasing && r.gap_max[k] < r.gap_max[k - 1];
  }

  if (r.gap_max.size() < 3) {
    r.fit_status = "too_few_points";
  } else if (std::any_of(r.gap_max.begin(), r.gap_max.end(), [](double g) { return !(g > 0.0); })) {
    r.fit_status = "degenerate";
  } else {
    r.fit = fit_rate(cfg.epsilon_list, r.gap_max);
    r.fit_status = "ok";
  }
  if (opts.write_outputs) write_sweep(r);
  return r;
}

namespace {

json run_json(const RunResult& r) {
  json j{{"label", r.kind.label()},
         {"ideal", r.kind.ideal},
         {"epsilon", r.kind.epsilon},
         {"max_nm", r.max_nm},
         {"divb_initial", r.divb_initial},
         {"divb_max", r.divb_max},
         {"wall_drift_max", r.wall_drift_max},
         {"steps", r.steps},
         {"aborted", r.aborted}};
  if (r.aborted) {
    j["abort_message"] = r.abort_message;
    j["abort_time"] = r.abort_time;
  }
  return j;
}

}  // namespace

json sweep_json(const SweepResult& r) {
  json runs = json::array();
  for (std::size_t k = 0; k < r.runs.size(); ++k) {
    json j = run_json(r.runs[k]);
    j["gap_max"] = r.gap_max[k];
    runs.push_back(j);
  }
  json fit{{"status", r.fit_status}};
  fit["q"] = r.fit ? r.fit->q : nan();
  fit["C"] = r.fit ? r.fit->c : nan();
  fit["residual"] = r.fit ? r.fit->residual : nan();
  return json{{"config", to_json(r.config)},
              {"status", r.failed ? "failed" : "ok"},
              {"uniformity_ratio", r.uniformity_ratio},
              {"gap_strictly_decreasing", r.gap_strictly_decreasing},
              {"fit", fit},
              {"ideal", run_json(r.ideal)},
              {"runs", runs}};
}

void write_run(const Config& cfg, const RunResult& r, const std::string& dir) {
  write_file(dir + "/norms.csv", norms_csv(r.norms));
  write_file(dir + "/diagnostics.csv", diagnostics_csv(r.diagnostics));
  write_file(dir + "/run.json", run_json(r).dump(2) + "\n");
  if (cfg.output.dump_fields) {
    for (std::size_t k = 0; k < r.snapshots.size(); ++k) {
      char name[32];
      std::snprintf(name, sizeof name, "/fields_%04zu.bin", k);
      write_field_dump(dir + name, r.snapshots[k]);
    }
  }
}

void write_sweep(const SweepResult& r) {
  const std::string& dir = r.config.output.dir;
  write_run(r.config, r.ideal, dir + "/" + r.ideal.kind.label());
  for (std::size_t k = 0; k < r.runs.size(); ++k) {
    const std::string sub = dir + "/" + r.runs[k].kind.label();
    write_run(r.config, r.runs[k], sub);
    write_file(sub + "/gaps.csv", gaps_csv(r.gaps[k]));
  }
  write_file(dir + "/sweep.json", sweep_json(r).dump(2) + "\n");
}

// ---- manufactured-solution study -------------------------------------------

MmsStudy run_mms(const Config& cfg, bool ideal, int base, int refinements, double epsilon,
                 double t_end) {
  if (base < 8) throw std::invalid_argument("mms: base resolution must be >= 8");
  if (refinements < 1) throw std::invalid_argument("mms: needs at least one refinement");
  MmsStudy st;
  st.ideal = ideal;
  for (int k = 0; k <= refinements; ++k) {
    GridSpec gs = cfg.grid;
    gs.nx = gs.ny = base << k;
    const GridPtr g = make_grid(gs);
    PhysicalParams par = cfg.physics;
    par.epsilon = ideal ? 0.0 : epsilon;
    const auto sol =
        std::make_shared<const ManufacturedSolution>(default_manufactured_solution(gs.length_x));
    SolverOptions so;
    so.ideal = ideal;
    so.control.cfl_adv = cfg.time.cfl_adv;
    so.control.cfl_visc = cfg.time.cfl_visc;
    so.filter_coeff = 0.0;
    so.manufactured = sol;
    const Solver solver(so);
    const State end = solver.advance_to(sol->sample(g, par, 0.0), t_end);
    const State exact = sol->sample(g, par, t_end);
    MmsLevel lv;
    lv.n = gs.nx;
    const Field* a[] = {&end.rho, &end.v1, &end.v2, &end.b1, &end.b2};
    const Field* b[] = {&exact.rho, &exact.v1, &exact.v2, &exact.b1, &exact.b2};
    for (int f = 0; f < 5; ++f) lv.errors[f] = std::sqrt(l2_squared(*a[f] - *b[f]));
    st.levels.push_back(lv);
  }
  for (std::size_t k = 0; k + 1 < st.levels.size(); ++k) {
    std::vector<double> o;
    for (int f = 0; f < 5; ++f) o.push_back(std::log2(st.levels[k].errors[f] / st.levels[k + 1].errors[f]));
    st.orders.push_back(o);
  }
  return st;
}

// ---- verification suite ----------------------------------------------------

Field commutator_test_field(const GridPtr& grid) {
  const Grid& g = *grid;
  const double k = 2.0 * std::numbers::pi / g.spec().length_x;
  Field f(grid);
  for (int j = 0; j < g.ny(); ++j) {
    const double y = g.y()[j];
    for (int i = 0; i < g.nx(); ++i) f(i, j) = std::cos(k * g.x()[i]) * y * std::exp(-0.25 * y * y);
  }
  return f;
}

namespace {

GridSpec doubled(GridSpec s) {
  s.nx *= 2;
  s.ny *= 2;
  return s;
}

CheckRow band(const std::string& name, double value, double lo, double hi) {
  return {name, value, lo, hi, std::isfinite(value) && value >= lo && value <= hi};
}

// Max error of the three operators against closed forms on one grid.
std::array<double, 3> operator_errors(const GridSpec& spec) {
  const GridPtr g = make_grid(spec);
  const double k = 2.0 * std::numbers::pi / spec.length_x;
  Field fx(g), fy(g), ex(g), ey(g), eyy(g);
  for (int j = 0; j < g->ny(); ++j) {
    const double y = g->y()[j];
    const double e = std::exp(-y / 3.0);
    const double h = e * std::cos(y / 2.0);
    const double h1 = e * (-std::cos(y / 2.0) / 3.0 - std::sin(y / 2.0) / 2.0);
    const double h2 = e * (std::cos(y / 2.0) / 9.0 + std::sin(y / 2.0) / 3.0 - std::cos(y / 2.0) / 4.0);
    for (int i = 0; i < g->nx(); ++i) {
      const double x = g->x()[i];
      fx(i, j) = std::sin(k * x);
      ex(i, j) = k * std::cos(k * x);
      fy(i, j) = h;
      ey(i, j) = h1;
      eyy(i, j) = h2;
    }
  }
  return {max_abs_diff(ddx(fx), ex), max_abs_diff(ddy(fy), ey), max_abs_diff(ddy2(fy), eyy)};
}

}  // namespace

std::vector<CheckRow> operator_order_checks(const GridSpec& base) {
  const auto coarse = operator_errors(base);
  const auto fine = operator_errors(doubled(base));
  const char* names[] = {"order ddx", "order ddy", "order ddy2"};
  std::vector<CheckRow> rows;
  for (int k = 0; k < 3; ++k) rows.push_back(band(names[k], coarse[k] / fine[k], 3.5, 4.5));
  return rows;
}

std::vector<CheckRow> commutator_checks(const GridSpec& spec) {
  std::vector<CheckRow> rows;
  // third-order residuals are pre-asymptotic on coarser stretched grids
  GridSpec base = spec;
  base.nx = std::max(base.nx, kCommutatorMinPoints);
  base.ny = std::max(base.ny, kCommutatorMinPoints);
  const GridPtr gc = make_grid(base);
  const GridPtr gf = make_grid(doubled(base));
  const Field fc = commutator_test_field(gc);
  const Field ff = commutator_test_field(gf);
  for (int m = 1; m <= kMaxConormalOrder; ++m) {
    const CommutatorTable t = commutator_table(m);
    for (CommutatorIdentity id : kAllCommutatorIdentities) {
      const double rc = verify_commutator(t, fc, id);
      const double rf = verify_commutator(t, ff, id);
      rows.push_back(band("commutator " + std::string(to_string(id)) + " m=" + std::to_string(m),
                          rc / rf, 3.2, 4.8));
    }
  }
  const CommutatorTable t1 = commutator_table(1);
  double dev = 0.0;
  for (double y : gc->y()) {
    dev = std::max(dev, std::abs(t1.dy_left[0](y) + phi_prime(y)));
    dev = std::max(dev, std::abs(t1.dy_right[0](y) + phi_prime(y)));
  }
  rows.push_back(band("commutator m=1 coefficient + phi'", dev, 0.0, 1e-12));
  return rows;
}

std::vector<CheckRow> probe_checks(const GridSpec& base, int alpha0_max) {
  const ProbeSuiteResult c = run_probe_suite(base, 20, alpha0_max);
  const ProbeSuiteResult f = run_probe_suite(doubled(base), 20, alpha0_max);
  return {band("product probe refined/base", f.product_max / c.product_max, 1.0 / 1.5, 1.5),
          band("embedding probe refined/base", f.embedding_max / c.embedding_max, 1.0 / 1.5, 1.5)};
}

}  // namespace conormhd
