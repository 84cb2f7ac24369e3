#include "conormhd/analytic.hpp"

#include <cmath>
#include <numbers>

namespace conormhd {

long double ExpPolyProfile::derivative(long double y, int n) const {
  // (Q e^{-E})' = (Q' - E' Q) e^{-E} with E = rate y + gauss y^2.
  std::vector<long double> q = poly;
  for (int d = 0; d < n; ++d) {
    std::vector<long double> next(q.size() + 2, 0.0L);
    for (std::size_t i = 1; i < q.size(); ++i) next[i - 1] += static_cast<long double>(i) * q[i];
    for (std::size_t i = 0; i < q.size(); ++i) {
      next[i] -= rate * q[i];
      next[i + 1] -= 2.0L * gauss * q[i];
    }
    q = std::move(next);
  }
  long double val = 0.0L;
  for (auto it = q.rbegin(); it != q.rend(); ++it) val = val * y + *it;
  return val * std::exp(-rate * y - gauss * y * y);
}

long double SeparableTerm::eval(long double t, long double x, long double y, int nt, int nx,
                                int ny) const {
  const int total_x = nx + dx_offset;
  const int shift = nt + total_x;
  long double factor = amplitude;
  for (int i = 0; i < nt; ++i) factor *= omega;
  for (int i = 0; i < total_x; ++i) factor *= kx;
  const long double arg =
      kx * x + omega * t + phase + shift * (std::numbers::pi_v<long double> / 2.0L);
  return factor * std::cos(arg) * profile.derivative(y, ny + dy_offset);
}

long double AnalyticField::eval(long double t, long double x, long double y, int nt, int nx,
                                int ny) const {
  long double v = (nt == 0 && nx == 0 && ny == 0) ? base : 0.0L;
  for (const SeparableTerm& term : terms) v += term.eval(t, x, y, nt, nx, ny);
  return v;
}

std::vector<long double> AnalyticField::sample_ld(const Grid& g, long double t, int nt, int nx,
                                                  int ny) const {
  const long double c0 = (nt == 0 && nx == 0 && ny == 0) ? base : 0.0L;
  std::vector<long double> out(g.size(), c0);
  std::vector<long double> row(g.ny()), col(g.nx());
  for (const SeparableTerm& term : terms) {
    // term = col(x) * row(y) with the amplitude folded into col
    for (int j = 0; j < g.ny(); ++j) row[j] = term.profile.derivative(g.y()[j], ny + term.dy_offset);
    SeparableTerm flat = term;
    flat.profile = ExpPolyProfile{{1.0L}, 0.0L, 0.0L};
    flat.dy_offset = 0;
    for (int i = 0; i < g.nx(); ++i) col[i] = flat.eval(t, g.x()[i], 0.0L, nt, nx, 0);
    for (int j = 0; j < g.ny(); ++j) {
      for (int i = 0; i < g.nx(); ++i) out[g.index(i, j)] += col[i] * row[j];
    }
  }
  return out;
}

Field AnalyticField::sample(const GridPtr& grid, double t) const {
  const std::vector<long double> v = sample_ld(*grid, t, 0, 0, 0);
  Field f(grid);
  for (std::size_t k = 0; k < v.size(); ++k) f[k] = static_cast<double>(v[k]);
  return f;
}

State ManufacturedSolution::sample(const GridPtr& grid, const PhysicalParams& params,
                                   double t) const {
  State s;
  s.rho = rho.sample(grid, t);
  s.v1 = v1.sample(grid, t);
  s.v2 = v2.sample(grid, t);
  s.b1 = b1.sample(grid, t);
  s.b2 = b2.sample(grid, t);
  s.params = params;
  s.time = t;
  return s;
}

ManufacturedSolution equilibrium_solution() {
  ManufacturedSolution s;
  s.rho.base = 1.0L;
  s.b2.base = 1.0L;
  return s;
}

ManufacturedSolution default_manufactured_solution(double length_x, double amplitude) {
  const long double k = 2.0L * std::numbers::pi_v<long double> / length_x;
  const long double a = amplitude;
  ManufacturedSolution s = equilibrium_solution();

  s.rho.terms.push_back({a, k, -1.0L, 0.0L, {{1.0L}, 0.5L, 0.0L}, 0, 0});
  s.v1.terms.push_back({a, k, 2.0L, 0.0L, {{0.0L, 1.0L}, 0.5L, 0.0L}, 0, 0});
  s.v2.terms.push_back({0.5L * a, k, -1.0L, 0.5L, {{0.0L, 0.0L, 1.0L}, 0.5L, 0.0L}, 0, 0});

  const SeparableTerm psi{a, k, 1.0L, 1.0L, {{0.0L, 1.0L}, 0.5L, 0.0L}, 0, 0};
  SeparableTerm b1 = psi;
  b1.dy_offset = 1;
  SeparableTerm b2 = psi;
  b2.dx_offset = 1;
  b2.amplitude = -psi.amplitude;
  s.b1.terms.push_back(b1);
  s.b2.terms.push_back(b2);
  return s;
}

}  // namespace conormhd
