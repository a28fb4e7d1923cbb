// Test-only geodesic machinery: RK4 integration of the geodesic equation in
// a chart, u'' = -Gamma(u)(u', u').  Used by the shooting oracles that
// validate the closed-form distances; deliberately independent of those
// formulas.

#pragma once

#include <utility>

#include "biorth/curvature.hpp"

namespace biorth::testing {

template <class F>
std::pair<Vec4d, Vec4d> geodesic_rhs(F&& field, const Vec4d& u, const Vec4d& v) {
  const ChristoffelData cd = christoffel_from_jets(field(u));
  Vec4d acc{};
  for (int k = 0; k < 4; ++k) {
    double s = 0.0;
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j) s += cd.gamma[k][i][j] * v[i] * v[j];
    acc[k] = -s;
  }
  return {v, acc};
}

template <class F>
std::pair<Vec4d, Vec4d> integrate_geodesic(F&& field, Vec4d u, Vec4d v, double time, int steps) {
  const double h = time / steps;
  for (int n = 0; n < steps; ++n) {
    const auto [k1u, k1v] = geodesic_rhs(field, u, v);
    Vec4d u2, v2;
    for (int i = 0; i < 4; ++i) { u2[i] = u[i] + 0.5 * h * k1u[i]; v2[i] = v[i] + 0.5 * h * k1v[i]; }
    const auto [k2u, k2v] = geodesic_rhs(field, u2, v2);
    Vec4d u3, v3;
    for (int i = 0; i < 4; ++i) { u3[i] = u[i] + 0.5 * h * k2u[i]; v3[i] = v[i] + 0.5 * h * k2v[i]; }
    const auto [k3u, k3v] = geodesic_rhs(field, u3, v3);
    Vec4d u4, v4;
    for (int i = 0; i < 4; ++i) { u4[i] = u[i] + h * k3u[i]; v4[i] = v[i] + h * k3v[i]; }
    const auto [k4u, k4v] = geodesic_rhs(field, u4, v4);
    for (int i = 0; i < 4; ++i) {
      u[i] += h / 6.0 * (k1u[i] + 2 * k2u[i] + 2 * k3u[i] + k4u[i]);
      v[i] += h / 6.0 * (k1v[i] + 2 * k2v[i] + 2 * k3v[i] + k4v[i]);
    }
  }
  return {u, v};
}

}  // namespace biorth::testing
