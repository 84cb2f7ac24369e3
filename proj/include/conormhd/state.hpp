#pragma once

#include <string>
#include <vector>

#include "conormhd/grid.hpp"

namespace conormhd {

/// Viscosity scale and fluid constants. epsilon == 0 selects the ideal system.
struct PhysicalParams {
  double epsilon = 0.0;
  double mu = 1.0;
  double lambda = 0.0;
  double gamma = 1.4;

  /// Throws std::invalid_argument unless mu > 0, mu + lambda > 0, gamma >= 1
  /// and epsilon in (0, 1] (or epsilon == 0 when allow_ideal is set).
  void validate(bool allow_ideal) const;
  bool ideal() const { return epsilon == 0.0; }
  bool operator==(const PhysicalParams&) const = default;
};

/// Density, velocity and magnetic field at one time.
struct State {
  Field rho, v1, v2, b1, b2;
  PhysicalParams params;
  double time = 0.0;

  const GridPtr& grid_ptr() const { return rho.grid_ptr(); }
  const Grid& grid() const { return rho.grid(); }
  bool all_finite() const;
};

/// Wall-normal shapes available to initial perturbation modes.
enum class Profile {
  wall,   ///< y^2 exp(-y): vanishes to second order at y = 0
  gauss,  ///< exp(-y^2)
  wall3,  ///< y^3 exp(-y): also d_y^2 = 0 at y = 0, so viscous and Lorentz
          ///< terms vanish on the wall at t = 0
};

const char* to_string(Profile p);
Profile profile_from_string(const std::string& name);

/// Evaluates the profile's n-th derivative (n <= 3) at y.
double profile_value(Profile p, double y, int derivative = 0);

struct ModeCoefficients {
  double rho = 0.0;
  double v1 = 0.0;
  double v2 = 0.0;
  /// Magnetic potential: (db1, db2) = (d_y psi, -d_x psi).
  double psi = 0.0;
  bool operator==(const ModeCoefficients&) const = default;
};

/// One perturbation mode cos(2 pi kx x / L_x) * profile(y) per field.
struct Mode {
  int kx = 1;
  Profile profile = Profile::wall;
  ModeCoefficients coeffs;
  bool operator==(const Mode&) const = default;
};

struct InitialDataSpec {
  double amplitude = 0.0;
  std::vector<Mode> modes;

  void validate() const;
  bool operator==(const InitialDataSpec&) const = default;
};

/// rho = 1, v = 0, B = (0, 1) at t = 0.
State equilibrium(const GridPtr& grid, const PhysicalParams& params);

/// p = rho^gamma pointwise; throws std::domain_error on rho <= 0.
Field pressure(const Field& rho, double gamma);

/// Background plus amplitude-scaled modes; the wall row holds v = 0 and
/// b2 = 1, the top row the background rho and v.
State make_initial(const GridPtr& grid, const PhysicalParams& params,
                   const InitialDataSpec& spec);

/// sum_{i=0..2} || d_y^i (rho - 1, v, B - e_y) ||^2_{m-i} over the spatial
/// conormal multi-indices (alpha_0 = 0) of the given state.
double initial_data_norm(const State& s, int m);

}  // namespace conormhd
