// Second-order forward-mode scalar over the four chart directions.
//
// A Jet2 carries a value, its gradient and its (symmetric) Hessian with
// respect to the four coordinates of whatever chart is currently active.
// All metric component functions are evaluated in this arithmetic, which
// makes first and second derivatives of the metric exact up to roundoff;
// the curvature tensor then needs no numerical differentiation at all.

#pragma once

#include <array>
#include <cmath>
#include <cstddef>

namespace biorth {

inline constexpr int kChartDim = 4;

// Packed index into the upper triangle of a symmetric 4x4 matrix,
// row-major over i <= j:  (0,0)(0,1)(0,2)(0,3)(1,1)(1,2)(1,3)(2,2)(2,3)(3,3).
constexpr int sym4_index(int i, int j) {
  return (i <= j) ? i * (7 - i) / 2 + j : j * (7 - j) / 2 + i;
}

struct Jet2 {
  double v = 0.0;
  std::array<double, 4> g{};
  std::array<double, 10> h{};  // upper triangle, see sym4_index

  Jet2() = default;
  explicit Jet2(double value) : v(value) {}

  static Jet2 constant(double c) { return Jet2(c); }

  // Seed coordinate `dir` at `value`: unit gradient slot, zero Hessian.
  static Jet2 variable(double value, int dir) {
    Jet2 j(value);
    j.g[static_cast<std::size_t>(dir)] = 1.0;
    return j;
  }

  double grad(int i) const { return g[static_cast<std::size_t>(i)]; }
  double hess(int i, int j) const { return h[static_cast<std::size_t>(sym4_index(i, j))]; }

  Jet2& operator+=(const Jet2& o) {
    v += o.v;
    for (int i = 0; i < 4; ++i) g[i] += o.g[i];
    for (int i = 0; i < 10; ++i) h[i] += o.h[i];
    return *this;
  }
  Jet2& operator-=(const Jet2& o) {
    v -= o.v;
    for (int i = 0; i < 4; ++i) g[i] -= o.g[i];
    for (int i = 0; i < 10; ++i) h[i] -= o.h[i];
    return *this;
  }
  Jet2& operator+=(double c) {
    v += c;
    return *this;
  }
  Jet2& operator-=(double c) {
    v -= c;
    return *this;
  }
  Jet2& operator*=(double c) {
    v *= c;
    for (int i = 0; i < 4; ++i) g[i] *= c;
    for (int i = 0; i < 10; ++i) h[i] *= c;
    return *this;
  }
};

inline Jet2 operator+(Jet2 a, const Jet2& b) { return a += b; }
inline Jet2 operator-(Jet2 a, const Jet2& b) { return a -= b; }
inline Jet2 operator-(const Jet2& a) {
  Jet2 r;
  r.v = -a.v;
  for (int i = 0; i < 4; ++i) r.g[i] = -a.g[i];
  for (int i = 0; i < 10; ++i) r.h[i] = -a.h[i];
  return r;
}
inline Jet2 operator+(Jet2 a, double c) { a.v += c; return a; }
inline Jet2 operator+(double c, Jet2 a) { a.v += c; return a; }
inline Jet2 operator-(Jet2 a, double c) { a.v -= c; return a; }
inline Jet2 operator-(double c, const Jet2& a) { return -a + c; }
inline Jet2 operator*(Jet2 a, double c) { return a *= c; }
inline Jet2 operator*(double c, Jet2 a) { return a *= c; }

inline Jet2 operator*(const Jet2& a, const Jet2& b) {
  Jet2 r;
  r.v = a.v * b.v;
  for (int i = 0; i < 4; ++i) r.g[i] = a.g[i] * b.v + a.v * b.g[i];
  for (int i = 0, k = 0; i < 4; ++i)
    for (int j = i; j < 4; ++j, ++k)
      r.h[k] = a.h[k] * b.v + a.g[i] * b.g[j] + a.g[j] * b.g[i] + a.v * b.h[k];
  return r;
}

// f(a) with caller-supplied value and first two derivatives of f at a.v.
inline Jet2 compose(const Jet2& a, double f0, double f1, double f2) {
  Jet2 r;
  r.v = f0;
  for (int i = 0; i < 4; ++i) r.g[i] = f1 * a.g[i];
  for (int i = 0, k = 0; i < 4; ++i)
    for (int j = i; j < 4; ++j, ++k)
      r.h[k] = f1 * a.h[k] + f2 * a.g[i] * a.g[j];
  return r;
}

inline double inverse(double a) { return 1.0 / a; }
inline Jet2 inverse(const Jet2& a) {
  const double iv = 1.0 / a.v;
  return compose(a, iv, -iv * iv, 2.0 * iv * iv * iv);
}
inline Jet2 operator/(const Jet2& a, const Jet2& b) { return a * inverse(b); }
inline Jet2 operator/(const Jet2& a, double c) { return a * (1.0 / c); }
inline Jet2 operator/(double c, const Jet2& b) { return inverse(b) * c; }

inline Jet2 sqrt(const Jet2& a) {
  const double s = std::sqrt(a.v);
  return compose(a, s, 0.5 / s, -0.25 / (s * a.v));
}
inline Jet2 exp(const Jet2& a) {
  const double e = std::exp(a.v);
  return compose(a, e, e, e);
}
inline Jet2 log(const Jet2& a) {
  return compose(a, std::log(a.v), 1.0 / a.v, -1.0 / (a.v * a.v));
}
inline Jet2 sin(const Jet2& a) {
  const double s = std::sin(a.v), c = std::cos(a.v);
  return compose(a, s, c, -s);
}
inline Jet2 cos(const Jet2& a) {
  const double s = std::sin(a.v), c = std::cos(a.v);
  return compose(a, c, -s, -c);
}

// Value extraction usable from code templated over double / Jet2.
inline double value_of(double x) { return x; }
inline double value_of(const Jet2& x) { return x.v; }

}  // namespace biorth
