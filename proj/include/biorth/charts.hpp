// Stereographic charts on S^2 x S^2.
//
// Four charts cover the manifold: per factor, projection either from the
// north pole (0,0,1) or the south pole (0,0,-1).  Points are canonically
// stored embedded; charts only exist to give the jet arithmetic four
// coordinates to differentiate against.
//
//   north chart:  x = (p_x, p_y) / (1 - p_z),  p = (2x, |x|^2 - 1) / (1 + |x|^2)
//   south chart:  x = (p_x, p_y) / (1 + p_z),  p = (2x, 1 - |x|^2) / (1 + |x|^2)
//
// so the chart center u = 0 maps to the antipode of the projection pole.

#pragma once

#include <array>
#include <cmath>

#include "biorth/errors.hpp"
#include "biorth/geometry.hpp"
#include "biorth/jet.hpp"

namespace biorth {

enum class Pole { north, south };

struct ChartId {
  Pole pole1 = Pole::north;
  Pole pole2 = Pole::north;

  int index() const {
    return (pole1 == Pole::south ? 2 : 0) + (pole2 == Pole::south ? 1 : 0);
  }
  static ChartId from_index(int i) {
    return {(i & 2) ? Pole::south : Pole::north, (i & 1) ? Pole::south : Pole::north};
  }
  bool operator==(const ChartId&) const = default;
};

inline constexpr double kPoleMargin = 0.1;

template <class T>
Vec3<T> factor_embed(Pole pole, const T& a, const T& b) {
  const T d = inverse(a * a + b * b + 1.0);
  const T z = 1.0 - 2.0 * d;  // (|x|^2 - 1) / (|x|^2 + 1)
  if (pole == Pole::north) return {2.0 * a * d, 2.0 * b * d, z};
  return {2.0 * a * d, 2.0 * b * d, -z};
}

// Columns of the embedding Jacobian, derived once from the formulas above.
template <class T>
std::array<Vec3<T>, 2> factor_jacobian(Pole pole, const T& a, const T& b) {
  const T d = inverse(a * a + b * b + 1.0);
  const T d2 = d * d;
  const double zs = (pole == Pole::north) ? 1.0 : -1.0;
  Vec3<T> da{2.0 * d - 4.0 * a * a * d2, -4.0 * a * b * d2, zs * 4.0 * a * d2};
  Vec3<T> db{-4.0 * a * b * d2, 2.0 * d - 4.0 * b * b * d2, zs * 4.0 * b * d2};
  return {da, db};
}

inline Vec3d pole_point(Pole pole) { return {0.0, 0.0, pole == Pole::north ? 1.0 : -1.0}; }

inline std::array<double, 2> factor_coords(Pole pole, const Vec3d& p) {
  const double den = (pole == Pole::north) ? 1.0 - p.z : 1.0 + p.z;
  return {p.x / den, p.y / den};
}

inline PointPair chart_to_point(const ChartId& chart, const Vec4d& u) {
  return {factor_embed<double>(chart.pole1, u[0], u[1]),
          factor_embed<double>(chart.pole2, u[2], u[3])};
}

inline Vec4d point_to_chart(const PointPair& p, const ChartId& chart) {
  if (norm(p.p1 - pole_point(chart.pole1)) <= kPoleMargin ||
      norm(p.p2 - pole_point(chart.pole2)) <= kPoleMargin)
    throw PoleProximityError("point_to_chart: factor within 0.1 of the projection pole");
  const auto c1 = factor_coords(chart.pole1, p.p1);
  const auto c2 = factor_coords(chart.pole2, p.p2);
  return {c1[0], c1[1], c2[0], c2[1]};
}

// Chart whose projection poles are farthest from the point (ties resolve to
// the north chart, matching enumeration order).
inline ChartId select_chart(const PointPair& p) {
  return {p.p1.z <= 0.0 ? Pole::north : Pole::south,
          p.p2.z <= 0.0 ? Pole::north : Pole::south};
}

// The embedding with all six ambient coordinates carried as Jet2 in u.
// Directions 0,1 differentiate the first factor, 2,3 the second.
inline PointPairT<Jet2> chart_jets(const ChartId& chart, const Vec4d& u) {
  const Jet2 a1 = Jet2::variable(u[0], 0), b1 = Jet2::variable(u[1], 1);
  const Jet2 a2 = Jet2::variable(u[2], 2), b2 = Jet2::variable(u[3], 3);
  return {factor_embed<Jet2>(chart.pole1, a1, b1), factor_embed<Jet2>(chart.pole2, a2, b2)};
}

// Coordinate frame d/du_i as tangent pairs; scalar type T keeps the frame
// usable both at value level and inside the jet pipeline.
template <class T>
std::array<TangentPairT<T>, 4> chart_coordinate_frame(const ChartId& chart,
                                                      const std::array<T, 4>& u) {
  const auto j1 = factor_jacobian<T>(chart.pole1, u[0], u[1]);
  const auto j2 = factor_jacobian<T>(chart.pole2, u[2], u[3]);
  const Vec3<T> zero{};
  return {TangentPairT<T>{j1[0], zero}, TangentPairT<T>{j1[1], zero},
          TangentPairT<T>{zero, j2[0]}, TangentPairT<T>{zero, j2[1]}};
}

inline std::array<TangentPair, 4> chart_frame(const ChartId& chart, const Vec4d& u) {
  return chart_coordinate_frame<double>(chart, u);
}

inline std::array<Jet2, 4> seed_chart_coords(const Vec4d& u) {
  return {Jet2::variable(u[0], 0), Jet2::variable(u[1], 1), Jet2::variable(u[2], 2),
          Jet2::variable(u[3], 3)};
}

// Ambient tangent pair -> chart-basis components.  The frame is block
// diagonal per factor, so two 2x2 normal-equation solves suffice.
inline Vec4d tangent_to_chart(const ChartId& chart, const Vec4d& u, const TangentPair& v) {
  const auto frame = chart_frame(chart, u);
  Vec4d c{};
  for (int f = 0; f < 2; ++f) {
    const Vec3d e0 = f == 0 ? frame[0].v1 : frame[2].v2;
    const Vec3d e1 = f == 0 ? frame[1].v1 : frame[3].v2;
    const Vec3d w = f == 0 ? v.v1 : v.v2;
    const double a = dot(e0, e0), b = dot(e0, e1), d = dot(e1, e1);
    const double r0 = dot(e0, w), r1 = dot(e1, w);
    const double det = a * d - b * b;
    c[2 * f + 0] = (d * r0 - b * r1) / det;
    c[2 * f + 1] = (a * r1 - b * r0) / det;
  }
  return c;
}

inline TangentPair chart_to_tangent(const ChartId& chart, const Vec4d& u, const Vec4d& c) {
  const auto frame = chart_frame(chart, u);
  Vec3<double> v1 = frame[0].v1 * c[0] + frame[1].v1 * c[1];
  Vec3<double> v2 = frame[2].v2 * c[2] + frame[3].v2 * c[3];
  return {v1, v2};
}

}  // namespace biorth
