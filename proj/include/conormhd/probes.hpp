#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "conormhd/analytic.hpp"
#include "conormhd/conormal.hpp"
#include "conormhd/grid.hpp"

namespace conormhd {

/// One scalar sampled at uniform time spacing dt. The first and last `pad`
/// levels only feed Z0 differences; the probed interval is the rest.
struct TimeSeries {
  double dt = 0.0;
  int pad = 0;
  std::vector<Field> levels;

  std::size_t first() const { return static_cast<std::size_t>(pad); }
  std::size_t last() const { return levels.size() - 1 - static_cast<std::size_t>(pad); }
  void validate(int alpha0_max) const;
};

/// Samples an analytic field at t = t0 + (k - pad) dt for k = 0..count+2pad-1.
TimeSeries sample_series(const AnalyticField& f, const GridPtr& grid, double t0, double dt,
                         int count, int pad);

/// Applies a selector to stored states (oldest first, uniform spacing).
TimeSeries series_from_states(std::span<const State> states, const Selector& sel, int pad);

/// Denominator floor shared by the probes.
inline constexpr double kProbeFloor = 1e-30;

/// max over |alpha| + |beta| = m of
///   int ||Z^alpha f Z^beta g||^2 dt
///   / (|f|_inf^2 int ||g||_m^2 dt + |g|_inf^2 int ||f||_m^2 dt)
/// over the probed interval; sup norms are space-time maxima there.
double probe_product_inequality(const TimeSeries& f, const TimeSeries& g, int m,
                                int alpha0_max);

/// |f|_inf^2 / (||f(t0)||_2^2 + ||d_y f(t0)||_1^2 + int (||f||_3^2 + ||d_y f||_2^2) dt).
double probe_embedding(const TimeSeries& f, int alpha0_max);

/// Band-limited analytic field drawn from a 64-bit Mersenne Twister seeded
/// with `seed`: three x-modes times (c0 + c1 y) exp(-y / l).
AnalyticField synthetic_field(std::uint64_t seed, double length_x);

struct ProbeSuiteResult {
  std::vector<double> product;    ///< per sample
  std::vector<double> embedding;  ///< per sample
  double product_max = 0.0;
  double embedding_max = 0.0;
};

/// The fixed synthetic suite: sample k uses fields seeded 1000 + 2k and
/// 1001 + 2k over five levels of spacing 0.05 (m = 2 for the product probe).
ProbeSuiteResult run_probe_suite(const GridSpec& grid, int samples = 20, int alpha0_max = 2);

}  // namespace conormhd
