// Small fixed-size linear algebra templated over the scalar type, plus the
// embedded point/tangent representations for S^2 x S^2 in R^3 (+) R^3.
//
// Vec3/Mat3 exist (rather than Eigen) so the same expressions evaluate over
// double and over Jet2; Eigen handles the double-only decompositions
// elsewhere.

#pragma once

#include <array>
#include <cmath>
#include <stdexcept>

#include "biorth/jet.hpp"

namespace biorth {

template <class T>
struct Vec3 {
  T x{}, y{}, z{};

  Vec3() = default;
  Vec3(T a, T b, T c) : x(a), y(b), z(c) {}

  T& operator[](int i) { return i == 0 ? x : (i == 1 ? y : z); }
  const T& operator[](int i) const { return i == 0 ? x : (i == 1 ? y : z); }
};

template <class T> Vec3<T> operator+(const Vec3<T>& a, const Vec3<T>& b) {
  return {a.x + b.x, a.y + b.y, a.z + b.z};
}
template <class T> Vec3<T> operator-(const Vec3<T>& a, const Vec3<T>& b) {
  return {a.x - b.x, a.y - b.y, a.z - b.z};
}
template <class T> Vec3<T> operator-(const Vec3<T>& a) { return {-a.x, -a.y, -a.z}; }
template <class T, class S> Vec3<T> operator*(const Vec3<T>& a, const S& c) {
  return {a.x * c, a.y * c, a.z * c};
}
template <class T, class S> Vec3<T> operator*(const S& c, const Vec3<T>& a) { return a * c; }

template <class T> T dot(const Vec3<T>& a, const Vec3<T>& b) {
  return a.x * b.x + a.y * b.y + a.z * b.z;
}
template <class T> Vec3<T> cross(const Vec3<T>& a, const Vec3<T>& b) {
  return {a.y * b.z - a.z * b.y, a.z * b.x - a.x * b.z, a.x * b.y - a.y * b.x};
}
template <class T> T norm2(const Vec3<T>& a) { return dot(a, a); }

using Vec3d = Vec3<double>;

inline double norm(const Vec3d& a) { return std::sqrt(norm2(a)); }
inline Vec3d normalized(const Vec3d& a) {
  const double n = norm(a);
  return {a.x / n, a.y / n, a.z / n};
}

template <class T>
struct Mat3 {
  std::array<std::array<T, 3>, 3> m{};

  static Mat3 identity() {
    Mat3 r;
    for (int i = 0; i < 3; ++i) r.m[i][i] = T(1.0);
    return r;
  }

  Vec3<T> apply(const Vec3<T>& v) const {
    return {m[0][0] * v.x + m[0][1] * v.y + m[0][2] * v.z,
            m[1][0] * v.x + m[1][1] * v.y + m[1][2] * v.z,
            m[2][0] * v.x + m[2][1] * v.y + m[2][2] * v.z};
  }
};

// Adjugate-based inverse; composes with jet arithmetic.
template <class T>
Mat3<T> inverse(const Mat3<T>& a) {
  const auto& m = a.m;
  Mat3<T> c;
  c.m[0][0] = m[1][1] * m[2][2] - m[1][2] * m[2][1];
  c.m[0][1] = m[0][2] * m[2][1] - m[0][1] * m[2][2];
  c.m[0][2] = m[0][1] * m[1][2] - m[0][2] * m[1][1];
  c.m[1][0] = m[1][2] * m[2][0] - m[1][0] * m[2][2];
  c.m[1][1] = m[0][0] * m[2][2] - m[0][2] * m[2][0];
  c.m[1][2] = m[0][2] * m[1][0] - m[0][0] * m[1][2];
  c.m[2][0] = m[1][0] * m[2][1] - m[1][1] * m[2][0];
  c.m[2][1] = m[0][1] * m[2][0] - m[0][0] * m[2][1];
  c.m[2][2] = m[0][0] * m[1][1] - m[0][1] * m[1][0];
  const T det = m[0][0] * c.m[0][0] + m[0][1] * c.m[1][0] + m[0][2] * c.m[2][0];
  const T idet = inverse(det);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) c.m[i][j] = c.m[i][j] * idet;
  return c;
}

using Vec4d = std::array<double, 4>;

// ---------------------------------------------------------------------------
// Points and tangent vectors of S^2 x S^2, stored embedded.

template <class T>
struct PointPairT {
  Vec3<T> p1, p2;
};

template <class T>
struct TangentPairT {
  Vec3<T> v1, v2;  // components tangent to the first / second factor
};

using PointPair = PointPairT<double>;
using TangentPair = TangentPairT<double>;

inline constexpr double kUnitTol = 1e-12;
inline constexpr double kTangencyTol = 1e-10;

inline PointPair make_point_pair(const Vec3d& p1, const Vec3d& p2) {
  if (std::abs(norm(p1) - 1.0) > kUnitTol || std::abs(norm(p2) - 1.0) > kUnitTol)
    throw std::invalid_argument("make_point_pair: factors must be unit vectors");
  return {p1, p2};
}

struct TangentVec {
  Vec3d v1, v2;
  PointPair base;
};

inline TangentVec make_tangent(const PointPair& p, const Vec3d& v1, const Vec3d& v2) {
  if (std::abs(dot(v1, p.p1)) > kTangencyTol || std::abs(dot(v2, p.p2)) > kTangencyTol)
    throw std::invalid_argument("make_tangent: components must be tangent to the factors");
  return {v1, v2, p};
}

inline TangentPair as_pair(const TangentVec& x) { return {x.v1, x.v2}; }

inline double g0_pair(const TangentPair& a, const TangentPair& b) {
  return dot(a.v1, b.v1) + dot(a.v2, b.v2);
}

// Rotation by angle t about unit axis x (Rodrigues).
inline Vec3d rotate_axis(const Vec3d& axis, double t, const Vec3d& p) {
  const double c = std::cos(t), s = std::sin(t);
  return p * c + cross(axis, p) * s + axis * (dot(axis, p) * (1.0 - c));
}

}  // namespace biorth
