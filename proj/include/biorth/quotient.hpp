// CP^2 # CP^2-bar realized as (S^3 x S^2)/S^1: the circle acts by the Hopf
// action on S^3 (q -> e^{i tau} q) and by rotation about e3 on S^2.  The
// submersion metric of the unit product metric is evaluated in gauge-fixed
// charts: on the set where a designated complex coordinate of q is nonzero,
// the phase is rotated to make it real-positive; two gauges cover S^3, and
// crossed with the two stereographic charts of the S^2 factor they give four
// quotient charts.
//
// In a gauge-fixed section s(u) the quotient metric is
//   G_ij = <E_i, E_j> - <E_i, V><E_j, V> / <V, V>,
// E_i the section's coordinate fields and V = (iq, e3 x r) the action field
// (never zero: the Hopf part has unit norm).  The local conformal
// deformation g_s = (1 + s phi_Q) g_Q mirrors the S^2 x S^2 one with the
// polar angle beta of r as the distance to the singular orbits r = +-e3.

#pragma once

#include <Eigen/Dense>
#include <array>
#include <cmath>
#include <stdexcept>

#include "biorth/charts.hpp"
#include "biorth/conformal.hpp"
#include "biorth/errors.hpp"
#include "biorth/metric.hpp"

namespace biorth {

// Quotient defaults: the S^2 x S^2 cutoff radii scaled by the ratio of the
// orbit-space diameters (pi here versus pi/sqrt2 there).
inline constexpr double kQuotientRin = 0.3 * std::numbers::sqrt2;
inline constexpr double kQuotientRout = 0.6 * std::numbers::sqrt2;

struct QuotientChart {
  int fixed_coord = 0;  // which complex coordinate of q is gauge-fixed real-positive
  Pole pole = Pole::north;

  int index() const { return 2 * fixed_coord + (pole == Pole::south ? 1 : 0); }
  static QuotientChart from_index(int i) {
    return {i / 2, (i % 2) ? Pole::south : Pole::north};
  }
  bool operator==(const QuotientChart&) const = default;
};

// q in S^3 stored as (Re q0, Im q0, Re q1, Im q1).
template <class T>
using Quat = std::array<T, 4>;

template <class T>
T dot4(const Quat<T>& a, const Quat<T>& b) {
  return a[0] * b[0] + a[1] * b[1] + a[2] * b[2] + a[3] * b[3];
}

struct BundlePoint {
  Quat<double> q{1.0, 0.0, 0.0, 0.0};
  Vec3d r{0.0, 0.0, 1.0};
};

inline BundlePoint make_bundle_point(const Quat<double>& q, const Vec3d& r) {
  if (std::abs(std::sqrt(dot4(q, q)) - 1.0) > kUnitTol || std::abs(norm(r) - 1.0) > kUnitTol)
    throw std::invalid_argument("make_bundle_point: factors must be unit");
  return {q, r};
}

// The action field (iq, e3 x r); the Hopf part has unit norm, so the action
// is free.
inline std::pair<Quat<double>, Vec3d> s1_action_field(const BundlePoint& p) {
  return {{-p.q[1], p.q[0], -p.q[3], p.q[2]}, cross({0, 0, 1}, p.r)};
}

// Rotate by the circle parameter tau: Hopf phase on q, rotation about e3 on r.
inline BundlePoint s1_rotate(const BundlePoint& p, double tau) {
  const double c = std::cos(tau), s = std::sin(tau);
  return {{p.q[0] * c - p.q[1] * s, p.q[0] * s + p.q[1] * c,
           p.q[2] * c - p.q[3] * s, p.q[2] * s + p.q[3] * c},
          {p.r.x * c - p.r.y * s, p.r.x * s + p.r.y * c, p.r.z}};
}

// Gauge-fixed section: for fixed_coord 0,
//   q(u) = (m, 0, u0, u1),  m = sqrt(1 - u0^2 - u1^2),
// and symmetrically for 1; r is stereographic in (u2, u3).
template <class T>
struct SectionPoint {
  Quat<T> q;
  Vec3<T> r;
};

template <class T>
SectionPoint<T> section_embed(const QuotientChart& chart, const std::array<T, 4>& u) {
  using std::sqrt;
  const T m = sqrt(1.0 - u[0] * u[0] - u[1] * u[1]);
  SectionPoint<T> s;
  if (chart.fixed_coord == 0)
    s.q = {m, T{}, u[0], u[1]};
  else
    s.q = {u[0], u[1], m, T{}};
  s.r = factor_embed<T>(chart.pole, u[2], u[3]);
  return s;
}

// Columns of the section Jacobian (4 of them; the last two touch only r).
template <class T>
std::array<SectionPoint<T>, 4> section_jacobian(const QuotientChart& chart,
                                                const std::array<T, 4>& u) {
  using std::sqrt;
  const T m = sqrt(1.0 - u[0] * u[0] - u[1] * u[1]);
  const T im = inverse(m);
  std::array<SectionPoint<T>, 4> e{};
  if (chart.fixed_coord == 0) {
    e[0].q = {-1.0 * u[0] * im, T{}, T(1.0), T{}};
    e[1].q = {-1.0 * u[1] * im, T{}, T{}, T(1.0)};
  } else {
    e[0].q = {T(1.0), T{}, -1.0 * u[0] * im, T{}};
    e[1].q = {T{}, T(1.0), -1.0 * u[1] * im, T{}};
  }
  const auto jr = factor_jacobian<T>(chart.pole, u[2], u[3]);
  e[2].r = jr[0];
  e[3].r = jr[1];
  return e;
}

inline BundlePoint quotient_chart_to_point(const QuotientChart& chart, const Vec4d& u) {
  if (u[0] * u[0] + u[1] * u[1] >= 1.0)
    throw std::invalid_argument("quotient_chart_to_point: coordinates outside the gauge disk");
  const auto s = section_embed<double>(chart, {u[0], u[1], u[2], u[3]});
  return {s.q, s.r};
}

inline constexpr double kGaugeMargin = 0.1;

// Rotate the point into the chart's gauge and read off coordinates.
inline Vec4d quotient_point_to_chart(const BundlePoint& p, const QuotientChart& chart) {
  const double re = p.q[2 * chart.fixed_coord], im = p.q[2 * chart.fixed_coord + 1];
  if (std::hypot(re, im) <= kGaugeMargin)
    throw PoleProximityError("quotient_point_to_chart: gauge coordinate too small");
  const BundlePoint g = s1_rotate(p, -std::atan2(im, re));
  if (norm(g.r - pole_point(chart.pole)) <= kPoleMargin)
    throw PoleProximityError("quotient_point_to_chart: r too close to the projection pole");
  const auto rc = factor_coords(chart.pole, g.r);
  const int o = 2 * (1 - chart.fixed_coord);
  return {g.q[o], g.q[o + 1], rc[0], rc[1]};
}

inline QuotientChart select_quotient_chart(const BundlePoint& p) {
  const double n0 = std::hypot(p.q[0], p.q[1]);
  const double n1 = std::hypot(p.q[2], p.q[3]);
  return {n0 >= n1 ? 0 : 1, p.r.z <= 0.0 ? Pole::north : Pole::south};
}

// phi_Q from the polar angle beta of r: squared distances to the singular
// orbits are beta^2 and (pi - beta)^2 (unit transverse speed; validated by
// quadrature and a shooting oracle).
template <class T>
T quotient_conformal_factor(const Vec3<T>& r, double r_in, double r_out) {
  const T c = r.z;
  const double beta = std::acos(std::clamp(value_of(c), -1.0, 1.0));
  T out{};
  if (beta < r_out) out += tube_term(acos_sq(c), beta, r_in, r_out);
  if (M_PI - beta < r_out) out += tube_term(acos_sq(-1.0 * c), M_PI - beta, r_in, r_out);
  return out;
}

struct QuotientSpec {
  double s = 0.0;
  double r_in = kQuotientRin;
  double r_out = kQuotientRout;

  static QuotientSpec base() { return {}; }
  static QuotientSpec deformed(double s, double r_in = kQuotientRin,
                               double r_out = kQuotientRout) {
    if (!(0.0 < r_in && r_in < r_out && r_out < M_PI / 2.0))
      throw std::invalid_argument("QuotientSpec: need 0 < r_in < r_out < pi/2");
    if (std::abs(s) * r_out * r_out >= 1.0)
      throw std::invalid_argument("QuotientSpec: |s| too large for positive definiteness");
    return {s, r_in, r_out};
  }
};

// Jet-valued chart components of the (possibly deformed) quotient metric.
inline MetricJets quotient_metric_jets(const QuotientSpec& spec, const QuotientChart& chart,
                                       const Vec4d& u) {
  const auto coords = seed_chart_coords(u);
  const SectionPoint<Jet2> s = section_embed<Jet2>(chart, coords);
  const auto e = section_jacobian<Jet2>(chart, coords);
  // Action field along the section.
  SectionPoint<Jet2> v;
  v.q = {-1.0 * s.q[1], s.q[0], -1.0 * s.q[3], s.q[2]};
  v.r = cross(Vec3<Jet2>{Jet2(0.0), Jet2(0.0), Jet2(1.0)}, s.r);
  auto pair7 = [](const SectionPoint<Jet2>& a, const SectionPoint<Jet2>& b) {
    return dot4(a.q, b.q) + dot(a.r, b.r);
  };
  const Jet2 vv = pair7(v, v);
  const Jet2 ivv = inverse(vv);
  MetricJets m;
  std::array<Jet2, 4> ev;
  for (int i = 0; i < 4; ++i) ev[i] = pair7(e[i], v);
  for (int i = 0; i < 4; ++i)
    for (int j = i; j < 4; ++j) {
      m[i][j] = pair7(e[i], e[j]) - ev[i] * ev[j] * ivv;
      if (j != i) m[j][i] = m[i][j];
    }
  if (spec.s != 0.0) {
    const Jet2 factor = 1.0 + spec.s * quotient_conformal_factor(s.r, spec.r_in, spec.r_out);
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j) m[i][j] = factor * m[i][j];
  }
  return m;
}

struct QuotientMetricField {
  QuotientSpec spec;
  QuotientChart chart;
  MetricJets operator()(const Vec4d& u) const { return quotient_metric_jets(spec, chart, u); }
};

inline MetricAt quotient_metric_components(const QuotientSpec& spec, const QuotientChart& chart,
                                           const Vec4d& u) {
  MetricAt out{quotient_metric_jets(spec, chart, u), ChartId{}, u};
  require_spd(out.value(), "quotient_metric_components");
  return out;
}

// ---------------------------------------------------------------------------
// Distance to the singular orbits by quadrature of the transverse arc-length
// element over the polar angle (cohomogeneity-one reduction).

// Speed of the beta-transversal [q fixed, r = (sin b, 0, cos b)] in the
// quotient metric.
inline double transverse_element(double beta) {
  const Vec3d r{std::sin(beta), 0.0, std::cos(beta)};
  const Vec3d dr{std::cos(beta), 0.0, -std::sin(beta)};
  const Vec3d vr = cross({0, 0, 1}, r);
  const double vv = 1.0 + norm2(vr);  // Hopf part contributes 1
  const double tv = dot(dr, vr);
  return std::sqrt(norm2(dr) - tv * tv / vv);
}

namespace detail {
inline double simpson(double a, double b, int n) {
  // n even
  const double h = (b - a) / n;
  double s = transverse_element(a) + transverse_element(b);
  for (int k = 1; k < n; ++k) s += transverse_element(a + k * h) * (k % 2 ? 4.0 : 2.0);
  return s * h / 3.0;
}
}  // namespace detail

enum class SingularOrbit { plus, minus };  // r = +e3 / r = -e3

inline double singular_orbit_distance(const BundlePoint& p, SingularOrbit which) {
  const double beta = std::acos(std::clamp(p.r.z, -1.0, 1.0));
  const double a = (which == SingularOrbit::plus) ? 0.0 : beta;
  const double b = (which == SingularOrbit::plus) ? beta : M_PI;
  if (b - a < 1e-14) return 0.0;
  int n = 8;
  double prev = detail::simpson(a, b, n);
  for (int it = 0; it < 16; ++it) {
    n *= 2;
    const double cur = detail::simpson(a, b, n);
    if (std::abs(cur - prev) < 1e-8) return cur;
    prev = cur;
  }
  return prev;
}

}  // namespace biorth
