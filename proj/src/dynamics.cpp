#include "conormhd/dynamics.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <sstream>

namespace conormhd {

bool RhsBundle::all_finite() const {
  return d_rho.all_finite() && d_v1.all_finite() && d_v2.all_finite() && d_b1.all_finite() &&
         d_b2.all_finite();
}

RhsBundle& RhsBundle::operator+=(const RhsBundle& o) {
  d_rho += o.d_rho;
  d_v1 += o.d_v1;
  d_v2 += o.d_v2;
  d_b1 += o.d_b1;
  d_b2 += o.d_b2;
  return *this;
}

RhsBundle zero_bundle(const GridPtr& grid) {
  return {Field(grid), Field(grid), Field(grid), Field(grid), Field(grid)};
}

void StepControl::validate() const {
  if (!(cfl_adv > 0.0 && cfl_adv <= 1.0)) throw std::invalid_argument("cfl_adv must lie in (0, 1]");
  if (!(cfl_visc > 0.0 && cfl_visc <= 1.0)) {
    throw std::invalid_argument("cfl_visc must lie in (0, 1]");
  }
  if (!(dt_cap > 0.0)) throw std::invalid_argument("dt_cap must be positive");
}

std::pair<Field, Field> lorentz_force(const Field& b1, const Field& b2) {
  const Field j = ddx(b2) - ddy(b1);
  return {-(j * b2), j * b1};
}

std::pair<Field, Field> induction_emf(const Field& v1, const Field& v2, const Field& b1,
                                      const Field& b2) {
  const Field e = v1 * b2 - v2 * b1;
  return {ddy(e), -ddx(e)};
}

namespace {

void check_density(const State& s) {
  const Grid& g = s.grid();
  for (int j = 0; j < g.ny(); ++j) {
    for (int i = 0; i < g.nx(); ++i) {
      if (!(s.rho(i, j) > 0.0)) {
        std::ostringstream os;
        os << "non-positive density " << s.rho(i, j) << " at node (" << i << ", " << j
           << "), t = " << s.time;
        throw SolverAbort(os.str(), s.time);
      }
    }
  }
}

RhsBundle assemble(const State& s, double eps, const RhsBundle* forcing, WallCondition wall) {
  check_density(s);
  const PhysicalParams& par = s.params;
  const Field p = pressure(s.rho, par.gamma);

  const Field rho_x = ddx(s.rho), rho_y = ddy(s.rho);
  const Field v1x = ddx(s.v1), v1y = ddy(s.v1);
  const Field v2x = ddx(s.v2), v2y = ddy(s.v2);
  const Field div = v1x + v2y;

  RhsBundle r;
  r.d_rho = -(s.v1 * rho_x + s.v2 * rho_y) - s.rho * div;

  Field m1 = -(s.rho * (s.v1 * v1x + s.v2 * v1y)) - ddx(p);
  Field m2 = -(s.rho * (s.v1 * v2x + s.v2 * v2y)) - ddy(p);
  auto [f1, f2] = lorentz_force(s.b1, s.b2);
  m1 += f1;
  m2 += f2;
  if (eps > 0.0) {
    const double shear = eps * par.mu;
    const double bulk = eps * (par.mu + par.lambda);
    const Field v1xx = ddx2(s.v1), v2xx = ddx2(s.v2);
    const Field v1yy = ddy2(s.v1), v2yy = ddy2(s.v2);
    const Field v1xy = ddy(v1x), v2xy = ddx(v2y);
    m1 += shear * (v1xx + v1yy) + bulk * (v1xx + v2xy);
    m2 += shear * (v2xx + v2yy) + bulk * (v1xy + v2yy);
  }
  r.d_v1 = divide(std::move(m1), s.rho);
  r.d_v2 = divide(std::move(m2), s.rho);

  auto [db1, db2] = induction_emf(s.v1, s.v2, s.b1, s.b2);
  r.d_b1 = std::move(db1);
  r.d_b2 = std::move(db2);

  if (forcing != nullptr) r += *forcing;

  const Grid& g = s.grid();
  for (int i = 0; i < g.nx(); ++i) {
    if (wall == WallCondition::no_slip) r.d_v1(i, 0) = 0.0;
    r.d_v2(i, 0) = 0.0;
  }
  return r;
}

}  // namespace

RhsBundle viscous_rhs(const State& s, const RhsBundle* forcing) {
  if (!(s.params.epsilon > 0.0)) {
    throw std::invalid_argument("viscous_rhs requires epsilon > 0");
  }
  return assemble(s, s.params.epsilon, forcing, WallCondition::no_slip);
}

RhsBundle ideal_rhs(const State& s, const RhsBundle* forcing, WallCondition wall) {
  return assemble(s, 0.0, forcing, wall);
}

double cfl(const State& s, const StepControl& ctl) {
  const PhysicalParams& par = s.params;
  double speed = 0.0;
  for (std::size_t k = 0; k < s.rho.size(); ++k) {
    const double rho = s.rho[k];
    const double v = std::hypot(s.v1[k], s.v2[k]);
    const double c = std::sqrt(par.gamma * std::pow(rho, par.gamma - 1.0));
    const double va = std::hypot(s.b1[k], s.b2[k]) / std::sqrt(rho);
    speed = std::max(speed, v + c + va);
  }
  if (!std::isfinite(speed)) throw SolverAbort("non-finite wave speed", s.time);
  const double h = s.grid().h_min();
  double dt = ctl.cfl_adv * h / speed;
  const double nu = par.epsilon * (2.0 * par.mu + par.lambda);
  if (nu > 0.0) dt = std::min(dt, ctl.cfl_visc * h * h / nu);
  return std::min(dt, ctl.dt_cap);
}

Field div_b(const State& s) { return ddx(s.b1) + ddy(s.b2); }

RhsBundle mms_forcing(const ManufacturedSolution& sol, const PhysicalParams& par,
                      const GridPtr& grid, double t) {
  RhsBundle r = zero_bundle(grid);
  const Grid& g = *grid;
  const long double eps = par.epsilon;
  const long double mu = par.mu;
  const long double lam = par.lambda;
  const long double gam = par.gamma;
  const long double tt = t;
  auto at = [&](const AnalyticField& f, int nt, int nx, int ny) {
    return f.sample_ld(g, tt, nt, nx, ny);
  };
  const auto rho = at(sol.rho, 0, 0, 0), rho_t = at(sol.rho, 1, 0, 0);
  const auto rho_x = at(sol.rho, 0, 1, 0), rho_y = at(sol.rho, 0, 0, 1);
  const auto v1 = at(sol.v1, 0, 0, 0), v1_t = at(sol.v1, 1, 0, 0);
  const auto v1_x = at(sol.v1, 0, 1, 0), v1_y = at(sol.v1, 0, 0, 1);
  const auto v2 = at(sol.v2, 0, 0, 0), v2_t = at(sol.v2, 1, 0, 0);
  const auto v2_x = at(sol.v2, 0, 1, 0), v2_y = at(sol.v2, 0, 0, 1);
  const auto b1 = at(sol.b1, 0, 0, 0), b1_t = at(sol.b1, 1, 0, 0);
  const auto b1_x = at(sol.b1, 0, 1, 0), b1_y = at(sol.b1, 0, 0, 1);
  const auto b2 = at(sol.b2, 0, 0, 0), b2_t = at(sol.b2, 1, 0, 0);
  const auto b2_x = at(sol.b2, 0, 1, 0), b2_y = at(sol.b2, 0, 0, 1);
  std::vector<long double> visc1(g.size(), 0.0L), visc2(g.size(), 0.0L);
  if (eps > 0.0L) {
    const auto v1_xx = at(sol.v1, 0, 2, 0), v1_yy = at(sol.v1, 0, 0, 2);
    const auto v2_xx = at(sol.v2, 0, 2, 0), v2_yy = at(sol.v2, 0, 0, 2);
    const auto v1_xy = at(sol.v1, 0, 1, 1), v2_xy = at(sol.v2, 0, 1, 1);
    for (std::size_t k = 0; k < g.size(); ++k) {
      visc1[k] = eps * mu * (v1_xx[k] + v1_yy[k]) + eps * (mu + lam) * (v1_xx[k] + v2_xy[k]);
      visc2[k] = eps * mu * (v2_xx[k] + v2_yy[k]) + eps * (mu + lam) * (v1_xy[k] + v2_yy[k]);
    }
  }
  for (std::size_t k = 0; k < g.size(); ++k) {
    const long double dpdrho = gam * std::pow(rho[k], gam - 1.0L);
    const long double p_x = dpdrho * rho_x[k];
    const long double p_y = dpdrho * rho_y[k];
    const long double div = v1_x[k] + v2_y[k];
    const long double cur = b2_x[k] - b1_y[k];
    const long double f1 = -cur * b2[k];
    const long double f2 = cur * b1[k];
    const long double e_x = v1_x[k] * b2[k] + v1[k] * b2_x[k] - v2_x[k] * b1[k] - v2[k] * b1_x[k];
    const long double e_y = v1_y[k] * b2[k] + v1[k] * b2_y[k] - v2_y[k] * b1[k] - v2[k] * b1_y[k];

    r.d_rho[k] =
        static_cast<double>(rho_t[k] + v1[k] * rho_x[k] + v2[k] * rho_y[k] + rho[k] * div);
    r.d_v1[k] = static_cast<double>(v1_t[k] + v1[k] * v1_x[k] + v2[k] * v1_y[k] -
                                    (-p_x + visc1[k] + f1) / rho[k]);
    r.d_v2[k] = static_cast<double>(v2_t[k] + v1[k] * v2_x[k] + v2[k] * v2_y[k] -
                                    (-p_y + visc2[k] + f2) / rho[k]);
    r.d_b1[k] = static_cast<double>(b1_t[k] - e_y);
    r.d_b2[k] = static_cast<double>(b2_t[k] + e_x);
  }
  return r;
}

// ---- Solver ----------------------------------------------------------------

Solver::Solver(SolverOptions opts) : opts_(std::move(opts)) {
  opts_.control.validate();
  if (!(opts_.filter_coeff >= 0.0 && opts_.filter_coeff < 1.0 / 32.0)) {
    throw std::invalid_argument("filter_coeff must lie in [0, 1/32)");
  }
  if (!(opts_.sponge_rate >= 0.0)) throw std::invalid_argument("sponge_rate must be >= 0");
  if (!(opts_.sponge_start > 0.0 && opts_.sponge_start <= 1.0)) {
    throw std::invalid_argument("sponge_start must lie in (0, 1]");
  }
}

namespace {

State far_field_target(const SolverOptions& o, const State& s) {
  if (o.manufactured) return o.manufactured->sample(s.grid_ptr(), s.params, s.time);
  return equilibrium(s.grid_ptr(), s.params);
}

void axpy(State& out, const State& base, double a, const RhsBundle& k) {
  out.rho = base.rho + a * k.d_rho;
  out.v1 = base.v1 + a * k.d_v1;
  out.v2 = base.v2 + a * k.d_v2;
  out.b1 = base.b1 + a * k.d_b1;
  out.b2 = base.b2 + a * k.d_b2;
}

void check_finite(const State& s, int stage) {
  if (!s.all_finite()) {
    throw SolverAbort("non-finite state after RK stage " + std::to_string(stage), s.time, stage);
  }
}

}  // namespace

RhsBundle Solver::rhs(const State& s) const {
  std::optional<RhsBundle> forcing;
  if (opts_.manufactured) {
    PhysicalParams par = s.params;
    if (opts_.ideal) par.epsilon = 0.0;
    forcing = mms_forcing(*opts_.manufactured, par, s.grid_ptr(), s.time);
  }
  const RhsBundle* fp = forcing ? &*forcing : nullptr;
  RhsBundle r = opts_.ideal ? ideal_rhs(s, fp, opts_.wall) : viscous_rhs(s, fp);

  const Grid& g = s.grid();
  const int ny = g.ny();
  const auto sc = g.s();
  bool any_sponge = false;
  for (int j = 0; j < ny; ++j) any_sponge |= sc[j] > opts_.sponge_start;
  if (opts_.sponge_rate > 0.0 && any_sponge) {
    const State target = far_field_target(opts_, s);
    for (int j = 0; j < ny; ++j) {
      if (sc[j] <= opts_.sponge_start) continue;
      const double z = (sc[j] - opts_.sponge_start) / (1.0 - opts_.sponge_start);
      const double rate = opts_.sponge_rate * z * z;
      for (int i = 0; i < g.nx(); ++i) {
        r.d_rho(i, j) -= rate * (s.rho(i, j) - target.rho(i, j));
        r.d_v1(i, j) -= rate * (s.v1(i, j) - target.v1(i, j));
        r.d_v2(i, j) -= rate * (s.v2(i, j) - target.v2(i, j));
      }
    }
  }
  for (int i = 0; i < g.nx(); ++i) {
    r.d_rho(i, ny - 1) = 0.0;
    r.d_v1(i, ny - 1) = 0.0;
    r.d_v2(i, ny - 1) = 0.0;
  }
  return r;
}

void Solver::apply_boundary(State& s) const {
  const Grid& g = s.grid();
  const int top = g.ny() - 1;
  std::optional<State> target;
  if (opts_.manufactured) target = far_field_target(opts_, s);
  for (int i = 0; i < g.nx(); ++i) {
    if (!opts_.ideal || opts_.wall == WallCondition::no_slip) {
      s.v1(i, 0) = target ? target->v1(i, 0) : 0.0;
    }
    s.v2(i, 0) = target ? target->v2(i, 0) : 0.0;
    s.rho(i, top) = target ? target->rho(i, top) : 1.0;
    s.v1(i, top) = target ? target->v1(i, top) : 0.0;
    s.v2(i, top) = target ? target->v2(i, top) : 0.0;
  }
}

void Solver::filter(State& s) const {
  const double c = opts_.filter_coeff;
  if (c == 0.0) return;
  const Grid& g = s.grid();
  const int nx = g.nx();
  const int ny = g.ny();
  // b is left alone: any stencil applied to it breaks the discrete div B identity
  for (Field* f : {&s.rho, &s.v1, &s.v2}) {
    const Field old = *f;
    for (int j = 2; j <= ny - 3; ++j) {
      for (int i = 0; i < nx; ++i) {
        const int ip = (i + 1) % nx, ip2 = (i + 2) % nx;
        const int im = (i + nx - 1) % nx, im2 = (i + nx - 2) % nx;
        const double c0 = old(i, j);
        const double dx4 = (old(ip2, j) - c0) - 4.0 * (old(ip, j) - c0) - 4.0 * (old(im, j) - c0) +
                           (old(im2, j) - c0);
        const double dy4 = (old(i, j + 2) - c0) - 4.0 * (old(i, j + 1) - c0) -
                           4.0 * (old(i, j - 1) - c0) + (old(i, j - 2) - c0);
        (*f)(i, j) = c0 - c * (dx4 + dy4);
      }
    }
  }
}

State Solver::step(const State& s, double dt) const {
  const double t0 = s.time;
  const RhsBundle k1 = rhs(s);
  State st = s;

  axpy(st, s, 0.5 * dt, k1);
  st.time = t0 + 0.5 * dt;
  apply_boundary(st);
  check_finite(st, 1);
  const RhsBundle k2 = rhs(st);

  axpy(st, s, 0.5 * dt, k2);
  apply_boundary(st);
  check_finite(st, 2);
  const RhsBundle k3 = rhs(st);

  axpy(st, s, dt, k3);
  st.time = t0 + dt;
  apply_boundary(st);
  check_finite(st, 3);
  const RhsBundle k4 = rhs(st);

  State out = s;
  const double w = dt / 6.0;
  auto combine = [&](Field& dst, const Field& base, const Field& a, const Field& b,
                     const Field& c, const Field& d) {
    for (std::size_t k = 0; k < dst.size(); ++k) {
      dst[k] = base[k] + w * (a[k] + 2.0 * b[k] + 2.0 * c[k] + d[k]);
    }
  };
  combine(out.rho, s.rho, k1.d_rho, k2.d_rho, k3.d_rho, k4.d_rho);
  combine(out.v1, s.v1, k1.d_v1, k2.d_v1, k3.d_v1, k4.d_v1);
  combine(out.v2, s.v2, k1.d_v2, k2.d_v2, k3.d_v2, k4.d_v2);
  combine(out.b1, s.b1, k1.d_b1, k2.d_b1, k3.d_b1, k4.d_b1);
  combine(out.b2, s.b2, k1.d_b2, k2.d_b2, k3.d_b2, k4.d_b2);
  out.time = t0 + dt;
  apply_boundary(out);
  filter(out);
  apply_boundary(out);
  check_finite(out, 4);
  return out;
}

double Solver::stable_dt(const State& s) const {
  StepControl ctl = opts_.control;
  State probe = s;
  if (opts_.ideal) probe.params.epsilon = 0.0;
  return cfl(probe, ctl);
}

State Solver::advance_to(State s, double t_target, const StepHook& on_step) const {
  steps_ = 0;
  while (s.time < t_target) {
    const double remaining = t_target - s.time;
    double dt = stable_dt(s);
    bool last = false;
    if (dt >= remaining * (1.0 - 1e-12)) {
      dt = remaining;
      last = true;
    } else if (dt > 0.5 * remaining) {
      // two nearly equal steps instead of one full and one sliver
      dt = 0.5 * remaining;
    }
    s = step(s, dt);
    ++steps_;
    if (last) s.time = t_target;
    if (on_step) on_step(s);
  }
  return s;
}

// ---- field dump ------------------------------------------------------------

namespace {

void put_le(std::ostream& os, double v) {
  std::uint64_t bits;
  std::memcpy(&bits, &v, sizeof bits);
  if constexpr (std::endian::native == std::endian::big) {
    bits = ((bits & 0x00000000000000FFull) << 56) | ((bits & 0x000000000000FF00ull) << 40) |
           ((bits & 0x0000000000FF0000ull) << 24) | ((bits & 0x00000000FF000000ull) << 8) |
           ((bits & 0x000000FF00000000ull) >> 8) | ((bits & 0x0000FF0000000000ull) >> 24) |
           ((bits & 0x00FF000000000000ull) >> 40) | ((bits & 0xFF00000000000000ull) >> 56);
  }
  unsigned char buf[8];
  for (int b = 0; b < 8; ++b) buf[b] = static_cast<unsigned char>((bits >> (8 * b)) & 0xFF);
  os.write(reinterpret_cast<const char*>(buf), 8);
}

double get_le(std::istream& is) {
  unsigned char buf[8];
  is.read(reinterpret_cast<char*>(buf), 8);
  if (!is) throw std::runtime_error("field dump: truncated data");
  std::uint64_t bits = 0;
  for (int b = 0; b < 8; ++b) bits |= static_cast<std::uint64_t>(buf[b]) << (8 * b);
  double v;
  std::memcpy(&v, &bits, sizeof v);
  return v;
}

}  // namespace

void write_field_dump(const std::string& path, const State& s) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("cannot open " + path);
  char header[128];
  std::snprintf(header, sizeof header, "MHDC1 %d %d %.17g\n", s.grid().nx(), s.grid().ny(), s.time);
  os << header;
  for (const Field* f : {&s.rho, &s.v1, &s.v2, &s.b1, &s.b2}) {
    for (double v : f->values()) put_le(os, v);
  }
}

State read_field_dump(const std::string& path, const GridPtr& grid) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw std::runtime_error("cannot open " + path);
  std::string line;
  std::getline(is, line);
  std::istringstream hs(line);
  std::string magic;
  int nx = 0, ny = 0;
  double t = 0.0;
  hs >> magic >> nx >> ny >> t;
  if (magic != "MHDC1") throw std::runtime_error("field dump: bad magic in " + path);
  if (nx != grid->nx() || ny != grid->ny()) throw std::runtime_error("field dump: grid mismatch");
  State s = equilibrium(grid, PhysicalParams{});
  s.time = t;
  for (Field* f : {&s.rho, &s.v1, &s.v2, &s.b1, &s.b2}) {
    for (double& v : f->values()) v = get_le(is);
  }
  return s;
}

}  // namespace conormhd
