#include "conormhd/probes.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>

namespace conormhd {

void TimeSeries::validate(int alpha0_max) const {
  if (!(dt > 0.0)) throw std::invalid_argument("time series spacing must be positive");
  if (pad < alpha0_max) throw std::invalid_argument("time series padding below alpha0_max");
  if (levels.size() < static_cast<std::size_t>(2 * pad + 2)) {
    throw std::invalid_argument("time series needs at least two probed levels");
  }
}

TimeSeries sample_series(const AnalyticField& f, const GridPtr& grid, double t0, double dt,
                         int count, int pad) {
  TimeSeries ts{dt, pad, {}};
  for (int k = 0; k < count + 2 * pad; ++k) ts.levels.push_back(f.sample(grid, t0 + (k - pad) * dt));
  return ts;
}

TimeSeries series_from_states(std::span<const State> states, const Selector& sel, int pad) {
  if (states.size() < 2) throw std::invalid_argument("series_from_states needs two states");
  TimeSeries ts{states[1].time - states[0].time, pad, {}};
  for (const State& s : states) ts.levels.push_back(sel(s));
  return ts;
}

namespace {

// Z^alpha images of every probed level, keyed by multi-index position.
struct Images {
  std::vector<MultiIndex> indices;
  std::vector<std::vector<Field>> z;  // [level - first][index]
};

Images images(const TimeSeries& f, int m, int alpha0_max) {
  Images out;
  out.indices = multi_indices(m, alpha0_max);
  for (std::size_t c = f.first(); c <= f.last(); ++c) {
    std::vector<Field> row;
    for (const MultiIndex& a : out.indices) row.push_back(apply_multi(f.levels, c, f.dt, a));
    out.z.push_back(std::move(row));
  }
  return out;
}

double trapezoid(const std::vector<double>& v, double dt) {
  double s = 0.0;
  for (std::size_t k = 0; k + 1 < v.size(); ++k) s += 0.5 * dt * (v[k] + v[k + 1]);
  return s;
}

double sup_squared(const TimeSeries& f) {
  double m = 0.0;
  for (std::size_t c = f.first(); c <= f.last(); ++c) m = std::max(m, f.levels[c].max_abs());
  return m * m;
}

std::vector<double> norm_history(const Images& im) {
  std::vector<double> out;
  for (const auto& row : im.z) {
    double s = 0.0;
    for (const Field& z : row) s += l2_squared(z);
    out.push_back(s);
  }
  return out;
}

TimeSeries dy_series(const TimeSeries& f) {
  TimeSeries out{f.dt, f.pad, {}};
  for (const Field& l : f.levels) out.levels.push_back(ddy(l));
  return out;
}

double ratio(double lhs, double rhs) {
  if (lhs == 0.0) return 0.0;
  return lhs / std::max(rhs, kProbeFloor);
}

}  // namespace

double probe_product_inequality(const TimeSeries& f, const TimeSeries& g, int m,
                                int alpha0_max) {
  f.validate(std::min(m, alpha0_max));
  g.validate(std::min(m, alpha0_max));
  if (f.levels.size() != g.levels.size() || f.pad != g.pad || f.dt != g.dt) {
    throw std::invalid_argument("product probe: series layouts differ");
  }
  const Images fi = images(f, m, alpha0_max);
  const Images gi = images(g, m, alpha0_max);
  const double rhs = sup_squared(f) * trapezoid(norm_history(gi), g.dt) +
                     sup_squared(g) * trapezoid(norm_history(fi), f.dt);

  double best = 0.0;
  const std::size_t n = fi.indices.size();
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = 0; b < n; ++b) {
      if (fi.indices[a].order() + gi.indices[b].order() != m) continue;
      std::vector<double> lhs;
      for (std::size_t t = 0; t < fi.z.size(); ++t) lhs.push_back(l2_squared(fi.z[t][a] * gi.z[t][b]));
      best = std::max(best, ratio(trapezoid(lhs, f.dt), rhs));
    }
  }
  return best;
}

double probe_embedding(const TimeSeries& f, int alpha0_max) {
  f.validate(alpha0_max);
  const TimeSeries fy = dy_series(f);
  const Images f3 = images(f, 3, alpha0_max);
  const Images fy2 = images(fy, 2, alpha0_max);

  auto norm_at = [](const Images& im, std::size_t level, int order) {
    double s = 0.0;
    for (std::size_t k = 0; k < im.indices.size(); ++k) {
      if (im.indices[k].order() <= order) s += l2_squared(im.z[level][k]);
    }
    return s;
  };
  const double initial = norm_at(f3, 0, 2) + norm_at(fy2, 0, 1);
  const std::vector<double> h3 = norm_history(f3);
  const std::vector<double> h2 = norm_history(fy2);
  std::vector<double> sum(h3.size());
  for (std::size_t k = 0; k < h3.size(); ++k) sum[k] = h3[k] + h2[k];
  return ratio(sup_squared(f), initial + trapezoid(sum, f.dt));
}

AnalyticField synthetic_field(std::uint64_t seed, double length_x) {
  std::mt19937_64 rng(seed);
  // 53 high bits to [0, 1); avoids library-specific distribution code
  auto uniform = [&rng](double lo, double hi) {
    const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
    return lo + (hi - lo) * u;
  };
  const long double k = 2.0L * std::numbers::pi_v<long double> / length_x;
  AnalyticField f;
  for (int mode = 0; mode < 3; ++mode) {
    SeparableTerm t;
    t.amplitude = uniform(-1.0, 1.0);
    t.kx = k * mode;
    t.omega = uniform(-2.0, 2.0);
    t.phase = uniform(0.0, 2.0 * std::numbers::pi);
    t.profile.poly = {uniform(-1.0, 1.0), uniform(-1.0, 1.0)};
    t.profile.rate = 1.0L / uniform(1.0, 3.0);
    f.terms.push_back(t);
  }
  return f;
}

ProbeSuiteResult run_probe_suite(const GridSpec& spec, int samples, int alpha0_max) {
  const GridPtr grid = make_grid(spec);
  constexpr double kDt = 0.05;
  constexpr int kLevels = 5;
  const int pad = alpha0_max;
  ProbeSuiteResult r;
  for (int k = 0; k < samples; ++k) {
    const auto fa = synthetic_field(1000 + 2 * static_cast<std::uint64_t>(k), spec.length_x);
    const auto ga = synthetic_field(1001 + 2 * static_cast<std::uint64_t>(k), spec.length_x);
    const TimeSeries f = sample_series(fa, grid, 0.0, kDt, kLevels, pad);
    const TimeSeries g = sample_series(ga, grid, 0.0, kDt, kLevels, pad);
    r.product.push_back(probe_product_inequality(f, g, 2, alpha0_max));
    r.embedding.push_back(probe_embedding(f, alpha0_max));
  }
  if (!r.product.empty()) {
    r.product_max = *std::max_element(r.product.begin(), r.product.end());
    r.embedding_max = *std::max_element(r.embedding.begin(), r.embedding.end());
  }
  return r;
}

}  // namespace conormhd
