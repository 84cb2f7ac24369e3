#pragma once

#include <functional>
#include <limits>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>

#include "conormhd/analytic.hpp"
#include "conormhd/grid.hpp"
#include "conormhd/state.hpp"

namespace conormhd {

/// Raised when the integration cannot continue (non-positive density,
/// non-finite values, non-finite wave speed).
class SolverAbort : public std::runtime_error {
 public:
  SolverAbort(const std::string& what, double time, int stage = -1)
      : std::runtime_error(what), time_(time), stage_(stage) {}
  double time() const { return time_; }
  int stage() const { return stage_; }

 private:
  double time_;
  int stage_;
};

/// Time derivatives of the five fields.
struct RhsBundle {
  Field d_rho, d_v1, d_v2, d_b1, d_b2;

  bool all_finite() const;
  RhsBundle& operator+=(const RhsBundle& o);
};

RhsBundle zero_bundle(const GridPtr& grid);

enum class WallCondition {
  no_slip,      ///< v1 = v2 = 0 on y = 0
  impermeable,  ///< v2 = 0 on y = 0, v1 free
};

struct StepControl {
  double cfl_adv = 0.4;
  double cfl_visc = 0.25;
  double dt_cap = std::numeric_limits<double>::infinity();

  void validate() const;
};

/// (f1, f2) = (curl B) x B = (-j b2, j b1) with j = d_x b2 - d_y b1.
std::pair<Field, Field> lorentz_force(const Field& b1, const Field& b2);

/// (d_t b1, d_t b2) = (d_y E, -d_x E) with E = v1 b2 - v2 b1.
std::pair<Field, Field> induction_emf(const Field& v1, const Field& v2, const Field& b1,
                                      const Field& b2);

/// Non-conservative viscous right-hand side; velocity tendencies vanish on
/// the wall row. Throws SolverAbort on rho <= 0.
RhsBundle viscous_rhs(const State& s, const RhsBundle* forcing = nullptr);

/// The same operator with every viscous term dropped.
RhsBundle ideal_rhs(const State& s, const RhsBundle* forcing = nullptr,
                    WallCondition wall = WallCondition::no_slip);

/// Explicit step bound from the fast wave speed and the viscous scale.
double cfl(const State& s, const StepControl& ctl);

Field div_b(const State& s);

/// Analytic d_t U minus the continuous right-hand side at time t, at every
/// node. params.epsilon == 0 gives the ideal forcing.
RhsBundle mms_forcing(const ManufacturedSolution& sol, const PhysicalParams& params,
                      const GridPtr& grid, double t);

struct SolverOptions {
  bool ideal = false;
  WallCondition wall = WallCondition::no_slip;
  StepControl control;
  /// Fourth-difference filter strength per step; zero disables it.
  double filter_coeff = 0.002;
  /// Relaxation rate at the top of the sponge, 1 / (sponge time scale).
  double sponge_rate = 10.0;
  /// Sponge occupies s in [sponge_start, 1] of the mapped coordinate.
  double sponge_start = 0.9;
  /// When set, adds the matching forcing and pins the far field to it.
  std::shared_ptr<const ManufacturedSolution> manufactured;
};

/// Classical four-stage Runge-Kutta integrator with wall, far-field, sponge
/// and filter handling.
class Solver {
 public:
  explicit Solver(SolverOptions opts);

  const SolverOptions& options() const { return opts_; }

  /// Full right-hand side including forcing and sponge.
  RhsBundle rhs(const State& s) const;

  /// Imposes wall and far-field values at time t.
  void apply_boundary(State& s) const;

  /// One RK4 step of size dt followed by the filter.
  State step(const State& s, double dt) const;

  double stable_dt(const State& s) const;

  using StepHook = std::function<void(const State&)>;

  /// Steps until s.time == t_target exactly, shortening the last step.
  /// on_step sees every accepted state.
  State advance_to(State s, double t_target, const StepHook& on_step = {}) const;

  /// Number of steps taken by the most recent advance_to call.
  long steps_taken() const { return steps_; }

 private:
  void filter(State& s) const;
  SolverOptions opts_;
  mutable long steps_ = 0;
};

/// Flat binary field dump: ASCII header "MHDC1 nx ny time\n" then rho, v1,
/// v2, b1, b2 as little-endian 64-bit floats, each row by row.
void write_field_dump(const std::string& path, const State& s);
State read_field_dump(const std::string& path, const GridPtr& grid);

}  // namespace conormhd
