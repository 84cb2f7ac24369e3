#include "conormhd/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace conormhd {

namespace {

void require_depth(const TimeRing& ring) {
  if (ring.size() < 3) throw std::out_of_range("residuals require a ring depth of at least 3");
}

Field time_derivative(const TimeRing& ring, const Selector& sel) {
  return apply_multi(ring, sel, MultiIndex{1, 0, 0});
}

Field inv_gamma_p(const Field& p, double gamma) {
  Field out(p.grid_ptr());
  for (std::size_t k = 0; k < p.size(); ++k) out[k] = 1.0 / (gamma * p[k]);
  return out;
}

}  // namespace

Field residual_div_identity(const TimeRing& ring) {
  require_depth(ring);
  const State& s = ring.middle();
  const double gamma = s.params.gamma;
  const Field p = pressure(s.rho, gamma);
  const Field pt = time_derivative(ring, [gamma](const State& u) {
    return pressure(u.rho, gamma) - 1.0;
  });
  const Field div = ddx(s.v1) + ddy(s.v2);
  const Field adv = s.v1 * ddx(p) + s.v2 * ddy(p);
  return div + inv_gamma_p(p, gamma) * (pt + adv);
}

Field residual_dyv1(const TimeRing& ring) {
  require_depth(ring);
  const State& s = ring.middle();
  const Field b1t = time_derivative(ring, [](const State& u) { return u.b1; });
  const Field v1y = ddy(s.v1);
  const Field rhs = b1t - (s.b2 - 1.0) * v1y + s.v1 * ddx(s.b1) + s.v2 * ddy(s.b1) +
                    s.b1 * ddy(s.v2);
  return v1y - rhs;
}

Field residual_dyv2(const TimeRing& ring) {
  require_depth(ring);
  const State& s = ring.middle();
  const double gamma = s.params.gamma;
  const Field p = pressure(s.rho, gamma);
  const Field pt = time_derivative(ring, [gamma](const State& u) {
    return pressure(u.rho, gamma) - 1.0;
  });
  const Field w = inv_gamma_p(p, gamma);
  const Field rhs = -ddx(s.v1) - w * pt - w * (s.v1 * ddx(p) + s.v2 * ddy(p));
  return ddy(s.v2) - rhs;
}

Field residual_dyp(const TimeRing& ring) {
  require_depth(ring);
  const State& s = ring.middle();
  const PhysicalParams& par = s.params;
  const Field p = pressure(s.rho, par.gamma);
  const Field v2t = time_derivative(ring, [](const State& u) { return u.v2; });
  const Field v2x = ddx(s.v2);
  const Field v2y = ddy(s.v2);
  Field lhs = ddy(p);
  Field rhs = -(s.rho * v2t) + s.b1 * ddx(s.b2) - s.rho * (s.v1 * v2x + s.v2 * v2y) -
              s.b1 * ddy(s.b1);
  if (par.epsilon > 0.0) {
    lhs -= (par.epsilon * (2.0 * par.mu + par.lambda)) * ddy2(s.v2);
    rhs += (par.epsilon * par.mu) * ddx2(s.v2);
    rhs += (par.epsilon * (par.mu + par.lambda)) * ddy(ddx(s.v1));
  }
  return lhs - rhs;
}

Field residual_induction_b1(const TimeRing& ring) {
  require_depth(ring);
  const State& s = ring.middle();
  const Field b1t = time_derivative(ring, [](const State& u) { return u.b1; });
  return b1t - ddy(s.v1 * s.b2 - s.v2 * s.b1);
}

Field emf_product_defect(const State& s) {
  const Field e = s.v1 * s.b2 - s.v2 * s.b1;
  return ddy(e) - (s.b2 * ddy(s.v1) + s.v1 * ddy(s.b2) - s.v2 * ddy(s.b1) - s.b1 * ddy(s.v2));
}

int rows_below(const Grid& grid, double s_limit) {
  int n = 0;
  for (double s : grid.s()) n += s < s_limit ? 1 : 0;
  return n;
}

double max_norm_below(const Field& f, double s_limit, int first_row) {
  const Grid& g = f.grid();
  const int rows = rows_below(g, s_limit);
  double m = 0.0;
  for (int j = first_row; j < rows; ++j) {
    for (int i = 0; i < g.nx(); ++i) m = std::max(m, std::abs(f(i, j)));
  }
  return m;
}

double conormal_norm_below(const Field& f, int order, double s_limit, int first_row) {
  const Grid& g = f.grid();
  const int rows = rows_below(g, s_limit);
  double total = 0.0;
  for (const MultiIndex& a : multi_indices(order, 0)) {
    Field z = apply_spatial(f, a.a1, a.a2);
    for (int j = 0; j < g.ny(); ++j) {
      if (j >= first_row && j < rows) continue;
      for (int i = 0; i < g.nx(); ++i) z(i, j) = 0.0;
    }
    total += l2_squared(z);
  }
  return total;
}

std::vector<ResidualValue> evaluate_residuals(const TimeRing& ring, int m, double s_limit) {
  const Field fields[] = {residual_div_identity(ring), residual_dyv1(ring), residual_dyv2(ring),
                          residual_dyp(ring)};
  std::vector<ResidualValue> out;
  for (int k = 0; k < 4; ++k) {
    const int first = k == 3 ? 1 : 0;
    const int order = std::max(m - 1, 0);
    out.push_back({kResidualNames[k], max_norm_below(fields[k], s_limit, first),
                   std::sqrt(conormal_norm_below(fields[k], order, s_limit, first))});
  }
  return out;
}

WallTraceMonitor::WallTraceMonitor(const State& initial) {
  const Grid& g = initial.grid();
  wall0_.resize(g.nx());
  for (int i = 0; i < g.nx(); ++i) wall0_[i] = initial.b2(i, 0);
}

double WallTraceMonitor::record(const State& s) {
  double d = 0.0;
  for (int i = 0; i < static_cast<int>(wall0_.size()); ++i) {
    d = std::max(d, std::abs(s.b2(i, 0) - wall0_[i]));
  }
  max_drift_ = std::max(max_drift_, d);
  return d;
}

std::vector<double> wall_trace_drift(const std::vector<std::vector<double>>& wall_rows) {
  std::vector<double> out;
  if (wall_rows.empty()) return out;
  const auto& w0 = wall_rows.front();
  for (const auto& row : wall_rows) {
    if (row.size() != w0.size()) throw std::invalid_argument("wall rows differ in length");
    double d = 0.0;
    for (std::size_t i = 0; i < row.size(); ++i) d = std::max(d, std::abs(row[i] - w0[i]));
    out.push_back(d);
  }
  return out;
}

}  // namespace conormhd
