#include "conormhd/conormal.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace conormhd {

double phi_weight(double y) {
  if (y < 0.0) throw std::domain_error("phi_weight: y must be >= 0");
  return y / (1.0 + y);
}

double phi_prime(double y) {
  if (y < 0.0) throw std::domain_error("phi_prime: y must be >= 0");
  const double u = 1.0 / (1.0 + y);
  return u * u;
}

std::string to_string(const MultiIndex& a) {
  return "(" + std::to_string(a.a0) + "," + std::to_string(a.a1) + "," + std::to_string(a.a2) +
         ")";
}

std::vector<MultiIndex> multi_indices_exact(int m, int alpha0_max) {
  std::vector<MultiIndex> out;
  for (int a0 = 0; a0 <= std::min(m, alpha0_max); ++a0) {
    for (int a1 = 0; a1 <= m - a0; ++a1) out.push_back({a0, a1, m - a0 - a1});
  }
  return out;
}

std::vector<MultiIndex> multi_indices(int m, int alpha0_max) {
  if (m < 0) return {};
  if (m > kMaxConormalOrder) {
    throw std::invalid_argument("conormal order " + std::to_string(m) + " exceeds maximum " +
                                std::to_string(kMaxConormalOrder));
  }
  if (alpha0_max < 0) throw std::invalid_argument("alpha0_max must be >= 0");
  std::vector<MultiIndex> out;
  for (int order = 0; order <= m; ++order) {
    auto layer = multi_indices_exact(order, alpha0_max);
    out.insert(out.end(), layer.begin(), layer.end());
  }
  return out;
}

Field apply_zy(const Field& f) {
  Field out = ddy(f);
  const Grid& g = f.grid();
  for (int j = 0; j < g.ny(); ++j) {
    const double w = phi_weight(g.y()[j]);
    for (int i = 0; i < g.nx(); ++i) out(i, j) *= w;
  }
  return out;
}

Field apply_spatial(const Field& f, int a1, int a2) {
  Field out = f;
  for (int k = 0; k < a2; ++k) out = apply_zy(out);
  for (int k = 0; k < a1; ++k) out = ddx(out);
  return out;
}

Field time_difference(std::span<const Field> levels, std::size_t center, double dt, int k) {
  if (k == 0) return levels[center];
  if (center < static_cast<std::size_t>(k) || center + k >= levels.size()) {
    throw std::out_of_range("time difference of order " + std::to_string(k) + " needs " +
                            std::to_string(2 * k + 1) + " levels centred on the evaluation time");
  }
  Field out(levels[center].grid_ptr());
  double binom = 1.0;
  for (int j = 0; j <= k; ++j) {
    const double c = ((j % 2 == 0) ? 1.0 : -1.0) * binom;
    out += c * levels[center + k - 2 * j];
    binom = binom * (k - j) / (j + 1);
  }
  out *= 1.0 / std::pow(2.0 * dt, k);
  return out;
}

Field apply_multi(std::span<const Field> levels, std::size_t center, double dt,
                  const MultiIndex& alpha) {
  if (alpha.a0 == 0) return apply_spatial(levels[center], alpha.a1, alpha.a2);
  if (center < static_cast<std::size_t>(alpha.a0) || center + alpha.a0 >= levels.size()) {
    throw std::out_of_range("Z^" + to_string(alpha) + " needs " + std::to_string(2 * alpha.a0 + 1) +
                            " time levels centred on the evaluation time");
  }
  std::vector<Field> window;
  window.reserve(2 * alpha.a0 + 1);
  for (std::size_t k = center - alpha.a0; k <= center + alpha.a0; ++k) {
    window.push_back(apply_spatial(levels[k], alpha.a1, alpha.a2));
  }
  return time_difference(window, alpha.a0, dt, alpha.a0);
}

TimeRing::TimeRing(std::size_t capacity) : capacity_(capacity) {
  if (capacity == 0) throw std::invalid_argument("TimeRing capacity must be positive");
}

void TimeRing::push(State s) {
  if (!levels_.empty()) {
    const double gap = s.time - levels_.back().time;
    if (!(gap > 0.0)) throw std::invalid_argument("TimeRing: times must increase strictly");
    if (levels_.size() >= 2 &&
        std::abs(gap - spacing_) > 1e-12 * std::max(std::abs(spacing_), std::abs(s.time))) {
      throw std::invalid_argument("TimeRing: non-uniform time spacing");
    }
    if (levels_.size() == 1) spacing_ = gap;
  }
  levels_.push_back(std::move(s));
  if (levels_.size() > capacity_) levels_.pop_front();
}

void TimeRing::clear() {
  levels_.clear();
  spacing_ = 0.0;
}

std::vector<Field> select_levels(const TimeRing& ring, const Selector& sel) {
  std::vector<Field> out;
  out.reserve(ring.size());
  for (std::size_t k = 0; k < ring.size(); ++k) out.push_back(sel(ring.level(k)));
  return out;
}

Field apply_multi(const TimeRing& ring, const Selector& sel, const MultiIndex& alpha) {
  if (ring.size() == 0) throw std::out_of_range("apply_multi: empty ring");
  const std::size_t needed = 2 * static_cast<std::size_t>(alpha.a0) + 1;
  if (ring.size() < needed) {
    throw std::out_of_range("Z^" + to_string(alpha) + " requires a ring depth of at least " +
                            std::to_string(needed) + ", ring holds " +
                            std::to_string(ring.size()));
  }
  std::vector<Field> levels(ring.size());
  const std::size_t c = ring.middle_index();
  for (std::size_t k = c - alpha.a0; k <= c + alpha.a0; ++k) levels[k] = sel(ring.level(k));
  return apply_multi(levels, c, ring.spacing(), alpha);
}

double weighted_l2_squared(const Field& f, const Field& w) {
  const Grid& g = f.grid();
  const auto wy = g.weight_y();
  double total = 0.0;
  for (int j = 0; j < g.ny(); ++j) {
    double row = 0.0;
    for (int i = 0; i < g.nx(); ++i) row += w(i, j) * f(i, j) * f(i, j);
    total += wy[j] * row;
  }
  return g.dx() * total;
}

double l2_squared(const Field& f) {
  const Grid& g = f.grid();
  const auto wy = g.weight_y();
  double total = 0.0;
  for (int j = 0; j < g.ny(); ++j) {
    double row = 0.0;
    for (int i = 0; i < g.nx(); ++i) row += f(i, j) * f(i, j);
    total += wy[j] * row;
  }
  return g.dx() * total;
}

double spatial_norm_squared(const Field& f, int m) {
  double total = 0.0;
  for (const MultiIndex& a : multi_indices(m, 0)) total += l2_squared(apply_spatial(f, a.a1, a.a2));
  return total;
}

NormReport conormal_l2(std::span<const Field> levels, std::size_t center, double dt, int m,
                       int alpha0_max) {
  NormReport r;
  r.m = m;
  r.indices = multi_indices(m, alpha0_max);
  for (const MultiIndex& a : r.indices) {
    const Field z = apply_multi(levels, center, dt, a);
    r.l2.push_back(l2_squared(z));
    r.linf.push_back(z.max_abs());
    r.total += r.l2.back();
    r.sup_total += r.linf.back();
  }
  return r;
}

NormReport conormal_l2(const TimeRing& ring, const Selector& sel, int m, int alpha0_max) {
  if (ring.size() < 2 * static_cast<std::size_t>(std::min(m, alpha0_max)) + 1) {
    throw std::out_of_range("conormal_l2 requires a ring depth of at least " +
                            std::to_string(2 * std::min(m, alpha0_max) + 1));
  }
  const auto levels = select_levels(ring, sel);
  NormReport r = conormal_l2(levels, ring.middle_index(), ring.spacing(), m, alpha0_max);
  r.time = ring.middle_time();
  return r;
}

double conormal_sup(const TimeRing& ring, const Selector& sel, int m, int alpha0_max) {
  return conormal_l2(ring, sel, m, alpha0_max).sup_total;
}

namespace {

// Per-level derived quantities feeding the N_m blocks.
struct Derived {
  Field v1, v2, b1, b2m1, pm1;
  Field v1y, v2y, b1y, py;
  Field v1yy, v2yy, b1yy, pyy;
  Field v1x, v2x, div;
  Field v1yyy, v2yyy;
};

Derived derive(const State& s) {
  Derived d;
  const Field p = pressure(s.rho, s.params.gamma);
  d.v1 = s.v1;
  d.v2 = s.v2;
  d.b1 = s.b1;
  d.b2m1 = s.b2 - 1.0;
  d.pm1 = p - 1.0;
  d.v1y = ddy(s.v1);
  d.v2y = ddy(s.v2);
  d.b1y = ddy(s.b1);
  d.py = ddy(p);
  d.v1yy = ddy2(s.v1);
  d.v2yy = ddy2(s.v2);
  d.b1yy = ddy2(s.b1);
  d.pyy = ddy2(p);
  d.v1x = ddx(s.v1);
  d.v2x = ddx(s.v2);
  d.div = d.v1x + d.v2y;
  d.v1yyy = ddy(d.v1yy);
  d.v2yyy = ddy(d.v2yy);
  return d;
}

}  // namespace

EnergyIntegrands energy_integrands(const TimeRing& ring, int m, int alpha0_max) {
  const int a0max = std::min(m, alpha0_max);
  if (ring.size() < 2 * static_cast<std::size_t>(a0max) + 1) {
    throw std::out_of_range("energy_integrands requires a ring depth of at least " +
                            std::to_string(2 * a0max + 1));
  }
  const std::size_t c = ring.middle_index();
  const double dt = ring.spacing();
  const State& mid = ring.middle();
  const PhysicalParams& par = mid.params;

  std::vector<Derived> lv(ring.size());
  for (std::size_t k = c - a0max; k <= c + a0max; ++k) lv[k] = derive(ring.level(k));

  auto levels_of = [&](Field Derived::*member) {
    std::vector<Field> out(lv.size());
    for (std::size_t k = c - a0max; k <= c + a0max; ++k) out[k] = lv[k].*member;
    return out;
  };
  auto norm_sum = [&](Field Derived::*member, int order) {
    if (order < 0) return 0.0;
    const auto levels = levels_of(member);
    double total = 0.0;
    for (const MultiIndex& a : multi_indices(order, alpha0_max)) {
      total += l2_squared(apply_multi(levels, c, dt, a));
    }
    return total;
  };

  EnergyIntegrands e;
  e.time = mid.time;
  e.indices = multi_indices(m, alpha0_max);

  const Field p_mid = pressure(mid.rho, par.gamma);
  Field inv_gp(p_mid.grid_ptr());
  for (std::size_t k = 0; k < p_mid.size(); ++k) inv_gp[k] = 1.0 / (par.gamma * p_mid[k]);

  const auto v1 = levels_of(&Derived::v1);
  const auto v2 = levels_of(&Derived::v2);
  const auto b1 = levels_of(&Derived::b1);
  const auto b2 = levels_of(&Derived::b2m1);
  const auto pm = levels_of(&Derived::pm1);
  for (const MultiIndex& a : e.indices) {
    e.kinetic.push_back(weighted_l2_squared(apply_multi(v1, c, dt, a), mid.rho) +
                        weighted_l2_squared(apply_multi(v2, c, dt, a), mid.rho));
    e.magnetic.push_back(l2_squared(apply_multi(b1, c, dt, a)) +
                         l2_squared(apply_multi(b2, c, dt, a)));
    e.acoustic.push_back(weighted_l2_squared(apply_multi(pm, c, dt, a), inv_gp));
  }

  e.dy = norm_sum(&Derived::v1y, m - 1) + norm_sum(&Derived::v2y, m - 1) +
         norm_sum(&Derived::b1y, m - 1) + norm_sum(&Derived::py, m - 1);
  e.dyy = norm_sum(&Derived::v1yy, m - 2) + norm_sum(&Derived::v2yy, m - 2) +
          norm_sum(&Derived::b1yy, m - 2) + norm_sum(&Derived::pyy, m - 2);

  if (par.epsilon > 0.0) {
    const double eps = par.epsilon;
    e.eps_grad = eps * par.mu *
                 (norm_sum(&Derived::v1x, m) + norm_sum(&Derived::v1y, m) +
                  norm_sum(&Derived::v2x, m) + norm_sum(&Derived::v2y, m));
    e.eps_div = eps * (par.mu + par.lambda) * norm_sum(&Derived::div, m);
    const double c1 = eps * par.mu;
    const double c2 = eps * (2.0 * par.mu + par.lambda);
    e.eps2_v1 = c1 * c1 * (norm_sum(&Derived::v1yy, m - 1) + norm_sum(&Derived::v1yyy, m - 2));
    e.eps2_v2 = c2 * c2 * (norm_sum(&Derived::v2yy, m - 1) + norm_sum(&Derived::v2yyy, m - 2));
  }
  return e;
}

std::vector<std::string> EnergyReport::column_names() {
  return {"time",     "m",        "kinetic", "magnetic", "acoustic", "sup_energy", "dy",
          "dyy",      "eps_grad", "eps_div", "eps2_v1",  "eps2_v2",  "total"};
}

std::vector<double> EnergyReport::columns() const {
  return {time, static_cast<double>(m), kinetic, magnetic, acoustic, sup_energy, dy,
          dyy,  eps_grad,              eps_div, eps2_v1,  eps2_v2,  total};
}

void EnergyAccumulator::add(const EnergyIntegrands& e) {
  const std::size_t n = e.indices.size();
  if (sup_.empty()) sup_.assign(n, 0.0);
  if (sup_.size() != n) throw std::invalid_argument("EnergyAccumulator: index set changed");

  EnergyReport& r = report_;
  r.time = e.time;
  r.m = m_;
  r.kinetic = r.magnetic = r.acoustic = 0.0;
  r.sup_energy = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    r.kinetic += e.kinetic[k];
    r.magnetic += e.magnetic[k];
    r.acoustic += e.acoustic[k];
    sup_[k] = std::max(sup_[k], e.kinetic[k] + e.magnetic[k] + e.acoustic[k]);
    r.sup_energy += sup_[k];
  }
  if (have_last_) {
    const double h = 0.5 * (e.time - last_.time);
    if (!(h > 0.0)) throw std::invalid_argument("EnergyAccumulator: time must increase");
    r.dy += h * (last_.dy + e.dy);
    r.dyy += h * (last_.dyy + e.dyy);
    r.eps_grad += h * (last_.eps_grad + e.eps_grad);
    r.eps_div += h * (last_.eps_div + e.eps_div);
    r.eps2_v1 += h * (last_.eps2_v1 + e.eps2_v1);
    r.eps2_v2 += h * (last_.eps2_v2 + e.eps2_v2);
  }
  r.total = r.sup_energy + r.dy + r.dyy + r.eps_grad + r.eps_div + r.eps2_v1 + r.eps2_v2;
  last_ = e;
  have_last_ = true;
}

}  // namespace conormhd
