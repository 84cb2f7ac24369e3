#pragma once

#include <cstddef>
#include <deque>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "conormhd/grid.hpp"
#include "conormhd/state.hpp"

namespace conormhd {

/// Conormal weight phi(y) = y / (1 + y); std::domain_error for y < 0.
double phi_weight(double y);
double phi_prime(double y);

/// Z^alpha = Z0^a0 Z1^a1 Z2^a2 with Z0 = d_t, Z1 = d_x, Z2 = phi(y) d_y.
struct MultiIndex {
  int a0 = 0;
  int a1 = 0;
  int a2 = 0;

  int order() const { return a0 + a1 + a2; }
  bool operator==(const MultiIndex&) const = default;
};

std::string to_string(const MultiIndex& a);

/// Hard ceiling on the conormal order handled anywhere.
inline constexpr int kMaxConormalOrder = 3;

/// All alpha with |alpha| <= m and a0 <= alpha0_max, ordered by |alpha| then
/// lexicographically.
std::vector<MultiIndex> multi_indices(int m, int alpha0_max);

/// The same set restricted to |alpha| == m exactly.
std::vector<MultiIndex> multi_indices_exact(int m, int alpha0_max);

/// Z2 f = phi(y) ddy(f); zero on the wall row.
Field apply_zy(const Field& f);

/// Z1^a1 Z2^a2 f.
Field apply_spatial(const Field& f, int a1, int a2);

/// Z^alpha at levels[center]: the spatial part at each level in the window
/// [center - a0, center + a0], then a0 centered differences in time of
/// spacing dt. Throws std::out_of_range when the window does not fit.
Field apply_multi(std::span<const Field> levels, std::size_t center, double dt,
                  const MultiIndex& alpha);

/// Sum of (-1)^j C(k, j) levels[center + k - 2j] / (2 dt)^k, the k-fold
/// centered time difference.
Field time_difference(std::span<const Field> levels, std::size_t center, double dt, int k);

/// Fixed-capacity buffer of States at uniform time spacing.
class TimeRing {
 public:
  explicit TimeRing(std::size_t capacity = 5);

  /// Appends a State; evicts the oldest when full. Rejects non-increasing or
  /// non-uniform times (relative tolerance 1e-12).
  void push(State s);

  std::size_t capacity() const { return capacity_; }
  std::size_t size() const { return levels_.size(); }
  bool full() const { return levels_.size() == capacity_; }
  double spacing() const { return spacing_; }
  std::size_t middle_index() const { return (levels_.size() - 1) / 2; }
  const State& middle() const { return levels_.at(middle_index()); }
  double middle_time() const { return middle().time; }
  const State& level(std::size_t k) const { return levels_.at(k); }
  const State& latest() const { return levels_.back(); }
  void clear();

 private:
  std::size_t capacity_;
  double spacing_ = 0.0;
  std::deque<State> levels_;
};

using Selector = std::function<Field(const State&)>;

/// Selector applied at every stored level, oldest first.
std::vector<Field> select_levels(const TimeRing& ring, const Selector& sel);

/// Z^alpha of the selected quantity at the ring's middle level. Throws
/// std::out_of_range naming the ring depth alpha needs.
Field apply_multi(const TimeRing& ring, const Selector& sel, const MultiIndex& alpha);

/// Trapezoid integral of f^2 over the strip.
double l2_squared(const Field& f);

/// Trapezoid integral of w f^2 over the strip.
double weighted_l2_squared(const Field& f, const Field& w);

/// sum over spatial alpha (a0 = 0), |alpha| <= m, of ||Z^alpha f||^2.
double spatial_norm_squared(const Field& f, int m);

/// Per-multi-index values of one conormal norm evaluation.
struct NormReport {
  double time = 0.0;
  int m = 0;
  std::vector<MultiIndex> indices;
  std::vector<double> l2;    ///< ||Z^alpha f||^2 per index
  std::vector<double> linf;  ///< max |Z^alpha f| per index
  double total = 0.0;        ///< ||f||_m^2
  double sup_total = 0.0;    ///< ||f||_{m, inf} over the stored levels' middle
};

NormReport conormal_l2(std::span<const Field> levels, std::size_t center, double dt, int m,
                       int alpha0_max);
NormReport conormal_l2(const TimeRing& ring, const Selector& sel, int m, int alpha0_max);
double conormal_sup(const TimeRing& ring, const Selector& sel, int m, int alpha0_max);

/// Instantaneous integrands of every block of N_m at the ring's middle level.
struct EnergyIntegrands {
  double time = 0.0;
  std::vector<MultiIndex> indices;
  std::vector<double> kinetic;   ///< int rho |Z^a v|^2, per index
  std::vector<double> magnetic;  ///< int |Z^a (B - e_y)|^2, per index
  std::vector<double> acoustic;  ///< int p^-1 |Z^a (p - 1)|^2 / gamma, per index
  double dy = 0.0;       ///< ||d_y (v, b1, p)||^2_{m-1}
  double dyy = 0.0;      ///< ||d_y^2 (v, b1, p)||^2_{m-2}
  double eps_grad = 0.0; ///< eps mu ||grad v||^2_m
  double eps_div = 0.0;  ///< eps (mu + lambda) ||div v||^2_m
  double eps2_v1 = 0.0;  ///< eps^2 mu^2 (||d_y^2 v1||^2_{m-1} + ||d_y^3 v1||^2_{m-2})
  double eps2_v2 = 0.0;  ///< eps^2 (2mu+lambda)^2 (same for v2)
};

EnergyIntegrands energy_integrands(const TimeRing& ring, int m, int alpha0_max);

/// Block decomposition of N_m(t).
struct EnergyReport {
  double time = 0.0;
  int m = 0;
  double kinetic = 0.0;     ///< instantaneous, summed over alpha
  double magnetic = 0.0;
  double acoustic = 0.0;
  double sup_energy = 0.0;  ///< sum_alpha sup_{s<=t} (kinetic + magnetic + acoustic)_alpha
  double dy = 0.0;          ///< time-integrated from here on
  double dyy = 0.0;
  double eps_grad = 0.0;
  double eps_div = 0.0;
  double eps2_v1 = 0.0;
  double eps2_v2 = 0.0;
  double total = 0.0;       ///< sup_energy + time-integrated blocks

  static std::vector<std::string> column_names();
  std::vector<double> columns() const;
};

/// Running supremum (per multi-index) and trapezoid time integrals of N_m.
/// The integral over an empty interval is zero.
class EnergyAccumulator {
 public:
  explicit EnergyAccumulator(int m) : m_(m) {}

  void add(const EnergyIntegrands& e);
  const EnergyReport& report() const { return report_; }
  bool empty() const { return !have_last_; }

 private:
  int m_;
  bool have_last_ = false;
  EnergyIntegrands last_;
  std::vector<double> sup_;
  EnergyReport report_;
};

}  // namespace conormhd
