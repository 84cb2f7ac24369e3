#include "conormhd/state.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "conormhd/conormal.hpp"

namespace conormhd {

void PhysicalParams::validate(bool allow_ideal) const {
  if (!(mu > 0.0)) throw std::invalid_argument("physics: mu must be > 0");
  if (!(mu + lambda > 0.0)) throw std::invalid_argument("physics: mu + lambda must be > 0");
  if (!(gamma >= 1.0)) throw std::invalid_argument("physics: gamma must be >= 1");
  if (allow_ideal && epsilon == 0.0) return;
  if (!(epsilon > 0.0 && epsilon <= 1.0)) {
    throw std::invalid_argument("physics: epsilon must lie in (0, 1]");
  }
}

bool State::all_finite() const {
  return rho.all_finite() && v1.all_finite() && v2.all_finite() && b1.all_finite() &&
         b2.all_finite();
}

const char* to_string(Profile p) {
  switch (p) {
    case Profile::wall: return "wall";
    case Profile::gauss: return "gauss";
    case Profile::wall3: return "wall3";
  }
  return "wall";
}

Profile profile_from_string(const std::string& name) {
  if (name == "wall") return Profile::wall;
  if (name == "gauss") return Profile::gauss;
  if (name == "wall3") return Profile::wall3;
  throw std::invalid_argument("unknown profile '" + name + "' (expected wall, wall3 or gauss)");
}

double profile_value(Profile p, double y, int derivative) {
  if (p == Profile::wall) {
    const double e = std::exp(-y);
    switch (derivative) {
      case 0: return y * y * e;
      case 1: return (2.0 * y - y * y) * e;
      case 2: return (2.0 - 4.0 * y + y * y) * e;
      case 3: return (-6.0 + 6.0 * y - y * y) * e;
      default: break;
    }
  } else if (p == Profile::wall3) {
    const double e = std::exp(-y);
    const double y2 = y * y;
    switch (derivative) {
      case 0: return y2 * y * e;
      case 1: return (3.0 * y2 - y2 * y) * e;
      case 2: return (6.0 * y - 6.0 * y2 + y2 * y) * e;
      case 3: return (6.0 - 18.0 * y + 9.0 * y2 - y2 * y) * e;
      default: break;
    }
  } else {
    const double e = std::exp(-y * y);
    switch (derivative) {
      case 0: return e;
      case 1: return -2.0 * y * e;
      case 2: return (4.0 * y * y - 2.0) * e;
      case 3: return (12.0 * y - 8.0 * y * y * y) * e;
      default: break;
    }
  }
  throw std::invalid_argument("profile derivative order must be 0..3");
}

void InitialDataSpec::validate() const {
  if (!(amplitude >= 0.0) || !std::isfinite(amplitude)) {
    throw std::invalid_argument("initial: amplitude must be >= 0");
  }
  for (const Mode& m : modes) {
    if (m.kx < 0) throw std::invalid_argument("initial: kx must be >= 0");
    if (m.profile == Profile::gauss) {
      if (m.coeffs.v1 != 0.0 || m.coeffs.v2 != 0.0) {
        throw std::invalid_argument(
            "initial: velocity modes need a wall profile (no-slip at y = 0)");
      }
      if (m.coeffs.psi != 0.0 && m.kx != 0) {
        throw std::invalid_argument(
            "initial: psi modes with kx != 0 need a wall profile (b2 = 1 at y = 0)");
      }
    }
  }
}

State equilibrium(const GridPtr& grid, const PhysicalParams& params) {
  State s;
  s.rho = Field(grid, 1.0);
  s.v1 = Field(grid, 0.0);
  s.v2 = Field(grid, 0.0);
  s.b1 = Field(grid, 0.0);
  s.b2 = Field(grid, 1.0);
  s.params = params;
  s.time = 0.0;
  return s;
}

Field pressure(const Field& rho, double gamma) {
  Field p(rho.grid_ptr());
  for (std::size_t k = 0; k < rho.size(); ++k) {
    if (!(rho[k] > 0.0)) throw std::domain_error("pressure: non-positive density");
    p[k] = std::pow(rho[k], gamma);
  }
  return p;
}

State make_initial(const GridPtr& grid, const PhysicalParams& params,
                   const InitialDataSpec& spec) {
  spec.validate();
  State s = equilibrium(grid, params);
  if (spec.amplitude == 0.0) return s;

  const Grid& g = *grid;
  Field drho(grid), dv1(grid), dv2(grid), db1(grid), db2(grid);
  for (const Mode& mode : spec.modes) {
    const double k = 2.0 * std::numbers::pi * mode.kx / g.spec().length_x;
    for (int j = 0; j < g.ny(); ++j) {
      const double y = g.y()[j];
      const double p0 = profile_value(mode.profile, y, 0);
      const double p1 = profile_value(mode.profile, y, 1);
      for (int i = 0; i < g.nx(); ++i) {
        const double arg = k * g.x()[i];
        const double c = std::cos(arg);
        const double sn = std::sin(arg);
        drho(i, j) += mode.coeffs.rho * c * p0;
        dv1(i, j) += mode.coeffs.v1 * c * p0;
        dv2(i, j) += mode.coeffs.v2 * c * p0;
        db1(i, j) += mode.coeffs.psi * c * p1;
        db2(i, j) += mode.coeffs.psi * k * sn * p0;
      }
    }
  }
  s.rho += spec.amplitude * drho;
  s.v1 = spec.amplitude * dv1;
  s.v2 = spec.amplitude * dv2;
  s.b1 = spec.amplitude * db1;
  s.b2 += spec.amplitude * db2;
  const int top = g.ny() - 1;
  for (int i = 0; i < g.nx(); ++i) {
    s.v1(i, 0) = 0.0;
    s.v2(i, 0) = 0.0;
    s.b2(i, 0) = 1.0;
    // the far-field row holds the background density and velocity
    s.rho(i, top) = 1.0;
    s.v1(i, top) = 0.0;
    s.v2(i, top) = 0.0;
  }
  for (std::size_t k = 0; k < s.rho.size(); ++k) {
    if (!(s.rho[k] > 0.0)) throw std::invalid_argument("initial: density perturbation too large");
  }
  return s;
}

double initial_data_norm(const State& s, int m) {
  const std::vector<Field> base = {s.rho - 1.0, s.v1, s.v2, s.b1, s.b2 - 1.0};
  double total = 0.0;
  for (int i = 0; i <= 2 && i <= m; ++i) {
    for (const Field& f0 : base) {
      Field f = f0;
      for (int d = 0; d < i; ++d) f = ddy(f);
      total += spatial_norm_squared(f, m - i);
    }
  }
  return total;
}

}  // namespace conormhd
