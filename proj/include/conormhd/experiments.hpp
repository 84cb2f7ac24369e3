#pragma once

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "conormhd/config.hpp"
#include "conormhd/conormal.hpp"
#include "conormhd/dynamics.hpp"
#include "conormhd/report_io.hpp"

namespace conormhd {

/// Which system a run integrates.
struct RunKind {
  bool ideal = false;
  double epsilon = 0.0;

  static RunKind viscous(double eps) { return {false, eps}; }
  static RunKind inviscid() { return {true, 0.0}; }
  std::string label() const;
};

/// Everything one run records at the report cadence.
struct RunResult {
  RunKind kind;
  std::vector<EnergyReport> norms;
  std::vector<DiagnosticRow> diagnostics;
  std::vector<State> snapshots;  ///< at every report time, t = 0 included
  double max_nm = 0.0;           ///< max_t N_m(t)
  double divb_initial = 0.0;     ///< ||div B(0)||_inf
  double divb_max = 0.0;         ///< max over accepted steps of ||div B||_inf
  double wall_drift_max = 0.0;
  long steps = 0;
  bool aborted = false;
  std::string abort_message;
  double abort_time = 0.0;
};

/// Extra knobs not in the config schema.
struct RunOptions {
  /// Residuals are measured on rows with s below this (outside the sponge).
  double residual_s_limit = 0.9;
  bool write_outputs = false;  ///< norms.csv / diagnostics.csv under output.dir
};

/// Integrates to the horizon (plus the ring lookahead), keeping the running
/// sup and time integrals of N_m at every stored level. Solver aborts are
/// caught and recorded; the partial series is kept.
RunResult run_single(const Config& cfg, const RunKind& kind, const RunOptions& opts = {});

/// Per report time: max |U^eps - U^0| and max |d_y (U^eps - U^0)| over the
/// five fields. Rejects runs on different grids or cadences.
std::vector<GapRow> gap_series(const RunResult& viscous, const RunResult& ideal);

/// max_t of max(gap_sup, gap_dy_sup).
double gap_max(const std::vector<GapRow>& rows);

struct FitResult {
  double q = 0.0;
  double c = 0.0;
  double residual = 0.0;  ///< RMS of log residuals
};

/// Least squares on log G = log C + q log eps. Needs at least three positive
/// pairs; throws std::invalid_argument otherwise.
FitResult fit_rate(const std::vector<double>& eps, const std::vector<double>& g);

struct SweepResult {
  Config config;
  RunResult ideal;
  std::vector<RunResult> runs;              ///< epsilon_list order
  std::vector<std::vector<GapRow>> gaps;    ///< per viscous run
  std::vector<double> gap_max;              ///< per viscous run
  double uniformity_ratio = 1.0;            ///< R
  std::optional<FitResult> fit;             ///< empty when degenerate
  std::string fit_status;                   ///< "ok", "degenerate", "too_few_points"
  bool gap_strictly_decreasing = false;
  bool failed = false;                      ///< some member run aborted
};

/// max_eps max_t N_m / min_eps max_t N_m; 1 when every value is zero.
double uniformity_ratio(const std::vector<double>& max_nm);

/// Runs the ideal system and every epsilon concurrently, then reduces.
SweepResult run_sweep(const Config& cfg, const RunOptions& opts = {});

nlohmann::json sweep_json(const SweepResult& r);

/// Writes sweep.json plus per-run norms.csv, diagnostics.csv and (viscous)
/// gaps.csv under cfg.output.dir.
void write_sweep(const SweepResult& r);

/// Writes one run's CSV files (and field dumps when enabled) under dir.
void write_run(const Config& cfg, const RunResult& r, const std::string& dir);

// ---- manufactured-solution study -------------------------------------------

struct MmsLevel {
  int n = 0;                 ///< nx = ny
  double errors[5] = {};     ///< L2 errors of rho, v1, v2, b1, b2
};

struct MmsStudy {
  bool ideal = false;
  std::vector<MmsLevel> levels;
  /// orders[k][f] = log2(error_k / error_{k+1}) for field f.
  std::vector<std::vector<double>> orders;
};

inline constexpr const char* kFieldNames[] = {"rho", "v1", "v2", "b1", "b2"};

/// Grids base * 2^k for k = 0..refinements, filter off, final time t_end.
MmsStudy run_mms(const Config& cfg, bool ideal, int base, int refinements,
                 double epsilon = 1e-2, double t_end = 0.2);

// ---- verification suite ----------------------------------------------------

struct CheckRow {
  std::string name;
  double value = 0.0;
  double lo = 0.0;
  double hi = 0.0;
  bool pass = false;
};

/// Smooth commutator test field cos(2 pi x / L) y exp(-y^2 / 4), decaying
/// well before the top boundary.
Field commutator_test_field(const GridPtr& grid);

/// Error reduction of ddx, ddy, ddy2 under one doubling of the config grid.
std::vector<CheckRow> operator_order_checks(const GridSpec& base);

/// Coarsest nx, ny used by commutator_checks.
inline constexpr int kCommutatorMinPoints = 128;

/// Residual reduction of every commutator identity for m = 1..3 under one
/// doubling of the config grid (raised to kCommutatorMinPoints); plus the
/// m = 1 coefficient check.
std::vector<CheckRow> commutator_checks(const GridSpec& base);

/// Probe suites at the base grid and one doubling: finite and within 1.5x.
std::vector<CheckRow> probe_checks(const GridSpec& base, int alpha0_max);

}  // namespace conormhd
