// Command-line front end: run, sweep, verify, mms, reference-config.
//
// Exit codes: 0 success, 1 invalid input or a failed check, 2 solver abort.

#include <cstdio>
#include <exception>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "conormhd/config.hpp"
#include "conormhd/experiments.hpp"

namespace {

using namespace conormhd;

constexpr int kOk = 0;
constexpr int kInvalid = 1;
constexpr int kAbort = 2;

void print_run(const RunResult& r) {
  std::printf("%-10s steps=%ld max_Nm=%.6e divB0=%.3e divBmax=%.3e wall_drift=%.3e%s\n",
              r.kind.label().c_str(), r.steps, r.max_nm, r.divb_initial, r.divb_max,
              r.wall_drift_max, r.aborted ? "  ABORTED" : "");
  if (r.aborted) std::printf("  abort at t=%.6g: %s\n", r.abort_time, r.abort_message.c_str());
}

int cmd_run(const std::string& path, bool ideal, double eps) {
  const Config cfg = load_config(path);
  RunOptions opts;
  opts.write_outputs = true;
  const RunKind kind = ideal ? RunKind::inviscid() : RunKind::viscous(eps);
  const RunResult r = run_single(cfg, kind, opts);
  print_run(r);
  return r.aborted ? kAbort : kOk;
}

int cmd_sweep(const std::string& path) {
  const Config cfg = load_config(path);
  RunOptions opts;
  opts.write_outputs = true;
  const SweepResult r = run_sweep(cfg, opts);
  print_run(r.ideal);
  for (std::size_t k = 0; k < r.runs.size(); ++k) {
    print_run(r.runs[k]);
    std::printf("  gap_max=%.6e\n", r.gap_max[k]);
  }
  std::printf("R=%.6g gap_strictly_decreasing=%s fit=%s", r.uniformity_ratio,
              r.gap_strictly_decreasing ? "yes" : "no", r.fit_status.c_str());
  if (r.fit) std::printf(" q=%.6g C=%.6g residual=%.3g", r.fit->q, r.fit->c, r.fit->residual);
  std::printf("\nwrote %s/sweep.json\n", cfg.output.dir.c_str());
  return r.failed ? kAbort : kOk;
}

int cmd_verify(const std::string& path) {
  const Config cfg = load_config(path);
  std::vector<CheckRow> rows = operator_order_checks(cfg.grid);
  for (CheckRow& c : commutator_checks(cfg.grid)) rows.push_back(c);
  for (CheckRow& c : probe_checks(cfg.grid, cfg.norms.alpha0_max)) rows.push_back(c);
  bool ok = true;
  std::printf("%-40s %14s %22s  %s\n", "check", "value", "accepted", "result");
  for (const CheckRow& c : rows) {
    std::printf("%-40s %14.6g   [%8.3g, %8.3g]  %s\n", c.name.c_str(), c.value, c.lo, c.hi,
                c.pass ? "PASS" : "FAIL");
    ok = ok && c.pass;
  }
  std::printf("%s\n", ok ? "all checks passed" : "some checks FAILED");
  return ok ? kOk : kInvalid;
}

int cmd_mms(const std::string& path, int levels, int base, double eps, double t_end) {
  const Config cfg = load_config(path);
  bool ok = true;
  for (bool ideal : {false, true}) {
    const MmsStudy st = run_mms(cfg, ideal, base, levels, eps, t_end);
    std::printf("%s solver, T=%g%s\n", ideal ? "ideal" : "viscous", t_end,
                ideal ? "" : (", eps=" + std::to_string(eps)).c_str());
    std::printf("  %6s", "n");
    for (const char* f : kFieldNames) std::printf(" %12s", f);
    std::printf("\n");
    for (const MmsLevel& lv : st.levels) {
      std::printf("  %6d", lv.n);
      for (double e : lv.errors) std::printf(" %12.4e", e);
      std::printf("\n");
    }
    for (std::size_t k = 0; k < st.orders.size(); ++k) {
      std::printf("  order %d->%d", st.levels[k].n, st.levels[k + 1].n);
      for (double o : st.orders[k]) {
        std::printf(" %6.3f", o);
        ok = ok && o >= 1.8 && o <= 2.3;
      }
      std::printf("\n");
    }
  }
  std::printf("%s\n", ok ? "all observed orders in [1.8, 2.3]" : "observed order out of range");
  return ok ? kOk : kInvalid;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Conormal regularity laboratory for 2D compressible viscous MHD"};
  app.require_subcommand(1);

  std::string config;
  double eps = 0.0;
  bool ideal = false;
  auto* run = app.add_subcommand("run", "single viscous (--epsilon) or ideal (--ideal) run");
  run->add_option("--config", config, "config file, '-' for stdin")->required();
  auto* eps_opt = run->add_option("--epsilon", eps, "viscosity scale in (0, 1]");
  auto* ideal_flag = run->add_flag("--ideal", ideal, "integrate the ideal system");
  eps_opt->excludes(ideal_flag);
  ideal_flag->excludes(eps_opt);

  auto* sweep = app.add_subcommand("sweep", "ideal run plus every epsilon of the sweep");
  sweep->add_option("--config", config, "config file, '-' for stdin")->required();

  auto* verify = app.add_subcommand("verify", "operator orders, commutator tables, inequality probes");
  verify->add_option("--config", config, "config file, '-' for stdin")->required();

  int levels = 2;
  int base = 32;
  double mms_eps = 1e-2;
  double t_end = 0.2;
  auto* mms = app.add_subcommand("mms", "manufactured-solution convergence study");
  mms->add_option("--config", config, "config file, '-' for stdin")->required();
  mms->add_option("--levels", levels, "number of grid doublings (observed orders)")
      ->check(CLI::Range(1, 4));
  mms->add_option("--base", base, "coarsest nx = ny")->check(CLI::Range(8, 1024));
  mms->add_option("--epsilon", mms_eps, "viscosity scale of the viscous study");
  mms->add_option("--t-end", t_end, "final time");

  app.add_subcommand("reference-config", "print the default configuration");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kInvalid;
  }

  try {
    if (*run) {
      if (!ideal && eps_opt->count() == 0) {
        std::cerr << "run: one of --epsilon or --ideal is required\n";
        return kInvalid;
      }
      return cmd_run(config, ideal, eps);
    }
    if (*sweep) return cmd_sweep(config);
    if (*verify) return cmd_verify(config);
    if (*mms) return cmd_mms(config, levels, base, mms_eps, t_end);
    std::cout << canonical_text(reference_config());
    return kOk;
  } catch (const SolverAbort& e) {
    std::cerr << "solver abort at t=" << e.time() << ": " << e.what() << "\n";
    return kAbort;
  } catch (const ConfigError& e) {
    std::cerr << "invalid config: " << e.what() << "\n";
    return kInvalid;
  } catch (const std::invalid_argument& e) {
    std::cerr << "invalid input: " << e.what() << "\n";
    return kInvalid;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kInvalid;
  }
}
