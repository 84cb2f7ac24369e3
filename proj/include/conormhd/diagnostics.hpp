#pragma once

#include <string>
#include <vector>

#include "conormhd/conormal.hpp"
#include "conormhd/grid.hpp"
#include "conormhd/state.hpp"

namespace conormhd {

// Residuals of the structural identities behind the normal-derivative
// estimates, each as LHS - RHS at the ring's middle level. Time derivatives
// use the same centered ring differences as Z0, so the ring needs at least
// three levels.

/// div v + p^-1 (d_t (p - 1) + v . grad (p - 1)) / gamma
Field residual_div_identity(const TimeRing& ring);

/// d_y v1 - (d_t b1 - (b2 - 1) d_y v1 + v1 d_x b1 + v2 d_y b1 + b1 d_y v2)
Field residual_dyv1(const TimeRing& ring);

/// d_y v2 - (-d_x v1 - p^-1 d_t p / gamma - p^-1 v . grad p / gamma)
Field residual_dyv2(const TimeRing& ring);

/// d_y p - eps (2mu + lambda) d_y^2 v2
///   - (-rho d_t v2 + b1 d_x b2 - rho v . grad v2 - b1 d_y b1
///      + eps mu d_x^2 v2 + eps (mu + lambda) d_y d_x v1)
Field residual_dyp(const TimeRing& ring);

/// d_t b1 - d_y (v1 b2 - v2 b1), the discrete induction residual for b1.
Field residual_induction_b1(const TimeRing& ring);

/// d_y E - (b2 d_y v1 + v1 d_y b2 - v2 d_y b1 - b1 d_y v2) at the middle
/// level: the discrete product-rule defect of the EMF derivative.
Field emf_product_defect(const State& s);

/// Rows strictly below the sponge (s < s_limit).
int rows_below(const Grid& grid, double s_limit);

/// Max |f| over rows first_row <= j with s < s_limit.
double max_norm_below(const Field& f, double s_limit, int first_row = 0);

/// sum over spatial |alpha| <= order of ||Z^alpha f||^2 restricted to rows
/// first_row <= j with s < s_limit (derivatives taken on the full field).
double conormal_norm_below(const Field& f, int order, double s_limit, int first_row = 0);

struct ResidualValue {
  std::string name;
  double max_norm = 0.0;
  double conormal_norm = 0.0;  ///< sqrt of the ||.||^2_{m-1} sum
};

inline constexpr const char* kResidualNames[] = {"div_identity", "dyv1", "dyv2", "dyp"};

/// The four residuals in kResidualNames order, measured below s_limit. The
/// momentum identity skips the wall row, where v is imposed rather than
/// evolved.
std::vector<ResidualValue> evaluate_residuals(const TimeRing& ring, int m,
                                              double s_limit = 0.9);

/// Tracks max_x |b2(t, x, 0) - b2(0, x, 0)| against the first recorded state.
class WallTraceMonitor {
 public:
  explicit WallTraceMonitor(const State& initial);

  /// Drift of s; also folds it into the running maximum.
  double record(const State& s);
  double max_drift() const { return max_drift_; }

 private:
  std::vector<double> wall0_;
  double max_drift_ = 0.0;
};

/// Drift of a recorded history of wall rows against its first entry.
std::vector<double> wall_trace_drift(const std::vector<std::vector<double>>& wall_rows);

}  // namespace conormhd
