// Metric families on S^2 x S^2 and their chart-basis components.
//
//   Product            g0, unit round factors
//   Cheeger(t)         g_t = g0(C_t . , .)
//   Deformed(t, s, r)  g_s = (1 + s phi) g_t
//
// Components are produced as Jet2 matrices so the curvature assembly needs
// no numerical differentiation.

#pragma once

#include <Eigen/Dense>
#include <array>
#include <cmath>
#include <stdexcept>

#include "biorth/charts.hpp"
#include "biorth/cheeger.hpp"
#include "biorth/conformal.hpp"
#include "biorth/errors.hpp"

namespace biorth {

enum class MetricFamily { product, cheeger, deformed };

inline constexpr double kMaxCutoffRadius = M_PI / (2.0 * std::sqrt(2.0));
inline constexpr double kSpdTol = 1e-10;

// Default cutoff radii for the conformal tubes.  The transition is kept
// wide so that the first-variation integrand over the flat torus is
// resolvable by moderate periodic trapezoid grids.
inline constexpr double kDefaultRin = 0.2;
inline constexpr double kDefaultRout = 0.9;

struct MetricSpec {
  MetricFamily family = MetricFamily::product;
  double t = 0.0;
  double s = 0.0;
  double r_in = kDefaultRin;
  double r_out = kDefaultRout;

  static MetricSpec product() { return {}; }

  static MetricSpec cheeger(double t) {
    if (t < 0.0) throw std::invalid_argument("MetricSpec: Cheeger time must be >= 0");
    MetricSpec m;
    m.family = MetricFamily::cheeger;
    m.t = t;
    return m;
  }

  static MetricSpec deformed(double t, double s, double r_in = kDefaultRin,
                             double r_out = kDefaultRout) {
    if (t <= 0.0) throw std::invalid_argument("MetricSpec: Deformed requires t > 0");
    if (!(0.0 < r_in && r_in < r_out && r_out < kMaxCutoffRadius))
      throw std::invalid_argument("MetricSpec: need 0 < r_in < r_out < pi/(2 sqrt 2)");
    // |phi| <= r_out^2, so this keeps 1 + s phi away from zero.
    if (std::abs(s) * r_out * r_out >= 1.0)
      throw std::invalid_argument("MetricSpec: |s| too large for positive definiteness");
    MetricSpec m;
    m.family = MetricFamily::deformed;
    m.t = t;
    m.s = s;
    m.r_in = r_in;
    m.r_out = r_out;
    return m;
  }
};

template <class T>
T metric_pair_at(const MetricSpec& spec, const PointPairT<T>& p, const TangentPairT<T>& x,
                 const TangentPairT<T>& y) {
  switch (spec.family) {
    case MetricFamily::product:
      return g0_pair_at(x, y);
    case MetricFamily::cheeger:
      return cheeger_pair_at(spec.t, p, x, y);
    case MetricFamily::deformed: {
      const T base = cheeger_pair_at(spec.t, p, x, y);
      return (1.0 + spec.s * conformal_factor_at(p, spec.r_in, spec.r_out)) * base;
    }
  }
  return T{};
}

inline double metric_pair(const MetricSpec& spec, const PointPair& p, const TangentVec& x,
                          const TangentVec& y) {
  return metric_pair_at<double>(spec, {p.p1, p.p2}, {x.v1, x.v2}, {y.v1, y.v2});
}

using MetricJets = std::array<std::array<Jet2, 4>, 4>;

inline Eigen::Matrix4d value_matrix(const MetricJets& m) {
  Eigen::Matrix4d g;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) g(i, j) = m[i][j].v;
  return g;
}

inline void require_spd(const Eigen::Matrix4d& g, const char* who) {
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix4d> es(g, Eigen::EigenvaluesOnly);
  if (es.eigenvalues().minCoeff() < kSpdTol)
    throw SingularMetricError(std::string(who) + ": metric value matrix not positive definite");
}

struct MetricAt {
  MetricJets components;
  ChartId chart;
  Vec4d u{};

  Eigen::Matrix4d value() const { return value_matrix(components); }
};

// Chart components g_ij(u) carried as Jet2, from the templated pair form
// evaluated on the jet-valued coordinate frame.
inline MetricJets metric_component_jets(const MetricSpec& spec, const ChartId& chart,
                                        const Vec4d& u) {
  const PointPairT<Jet2> p = chart_jets(chart, u);
  const auto frame = chart_coordinate_frame<Jet2>(chart, seed_chart_coords(u));
  MetricJets m;
  for (int i = 0; i < 4; ++i)
    for (int j = i; j < 4; ++j) {
      m[i][j] = metric_pair_at<Jet2>(spec, p, frame[i], frame[j]);
      if (j != i) m[j][i] = m[i][j];
    }
  return m;
}

inline MetricAt metric_components(const MetricSpec& spec, const ChartId& chart, const Vec4d& u) {
  MetricAt out{metric_component_jets(spec, chart, u), chart, u};
  require_spd(out.value(), "metric_components");
  return out;
}

// Field functor with the chart bound, the shape every curvature entry point
// consumes; quotient-bundle metrics provide the same signature.
struct SpecMetricField {
  MetricSpec spec;
  ChartId chart;
  MetricJets operator()(const Vec4d& u) const { return metric_component_jets(spec, chart, u); }
};

}  // namespace biorth
