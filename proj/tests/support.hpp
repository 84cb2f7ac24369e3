#pragma once

#include <cmath>
#include <utility>

#include "conormhd/grid.hpp"
#include "conormhd/state.hpp"

namespace testsupport {

using conormhd::Field;
using conormhd::GridPtr;
using conormhd::GridSpec;

inline GridSpec square(int n) {
  GridSpec g;
  g.nx = n;
  g.ny = n;
  return g;
}

/// f(x, y) sampled at every node.
template <class F>
Field sample(const GridPtr& g, F&& f) {
  Field out(g);
  for (int j = 0; j < g->ny(); ++j) {
    for (int i = 0; i < g->nx(); ++i) out(i, j) = f(g->x()[i], g->y()[j]);
  }
  return out;
}

/// Max |f - exact| over rows j0 <= j < ny - j1.
template <class F>
double max_error(const Field& f, F&& exact, int j0 = 0, int j1 = 0) {
  const conormhd::Grid& g = f.grid();
  double e = 0.0;
  for (int j = j0; j < g.ny() - j1; ++j) {
    for (int i = 0; i < g.nx(); ++i) {
      e = std::max(e, std::abs(f(i, j) - exact(g.x()[i], g.y()[j])));
    }
  }
  return e;
}

inline double max_state_diff(const conormhd::State& a, const conormhd::State& b) {
  using conormhd::max_abs_diff;
  return std::max({max_abs_diff(a.rho, b.rho), max_abs_diff(a.v1, b.v1),
                   max_abs_diff(a.v2, b.v2), max_abs_diff(a.b1, b.b1),
                   max_abs_diff(a.b2, b.b2)});
}

}  // namespace testsupport
