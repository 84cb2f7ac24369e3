#pragma once

#include <vector>

#include "conormhd/grid.hpp"
#include "conormhd/state.hpp"

namespace conormhd {

/// Wall-normal factor poly(y) * exp(-rate y - gauss y^2), differentiable to
/// any order in closed form.
struct ExpPolyProfile {
  std::vector<long double> poly;  ///< coefficients of y^0, y^1, ...
  long double rate = 0.0L;
  long double gauss = 0.0L;

  long double derivative(long double y, int n) const;
};

/// amplitude * cos(kx x + omega t + phase) * profile^(dy_offset)(y), with an
/// extra dx_offset x-derivatives folded in. Offsets let a magnetic potential
/// psi produce (b1, b2) = (d_y psi, -d_x psi) without new closed forms.
struct SeparableTerm {
  long double amplitude = 0.0L;
  long double kx = 0.0L;
  long double omega = 0.0L;
  long double phase = 0.0L;
  ExpPolyProfile profile;
  int dx_offset = 0;
  int dy_offset = 0;

  /// d_t^nt d_x^nx d_y^ny of the term.
  long double eval(long double t, long double x, long double y, int nt, int nx, int ny) const;
};

/// A constant plus separable terms.
struct AnalyticField {
  long double base = 0.0L;
  std::vector<SeparableTerm> terms;

  long double eval(long double t, long double x, long double y, int nt = 0, int nx = 0,
                   int ny = 0) const;
  Field sample(const GridPtr& grid, double t) const;

  /// d_t^nt d_x^nx d_y^ny at every node, row by row, in extended precision.
  /// Exploits separability: one profile evaluation per row and one cosine
  /// per column for each term.
  std::vector<long double> sample_ld(const Grid& grid, long double t, int nt, int nx,
                                     int ny) const;
};

/// Closed-form (rho, v1, v2, b1, b2), periodic in x.
struct ManufacturedSolution {
  AnalyticField rho, v1, v2, b1, b2;

  State sample(const GridPtr& grid, const PhysicalParams& params, double t) const;
};

/// The background state rho = 1, v = 0, B = e_y.
ManufacturedSolution equilibrium_solution();

/// The manufactured solution used by the convergence study. With
/// k = 2 pi / L_x and a = 0.1:
///   rho = 1 + a cos(k x - t) exp(-y/2)
///   v1  = a cos(k x + 2t) y exp(-y/2)
///   v2  = a/2 cos(k x - t + 0.5) y^2 exp(-y/2)
///   psi = a cos(k x + t + 1) y exp(-y/2),  (b1, b2) = (d_y psi, 1 - d_x psi)
/// Velocity vanishes on the wall for all t; div B = 0 identically.
ManufacturedSolution default_manufactured_solution(double length_x, double amplitude = 0.1);

}  // namespace conormhd
