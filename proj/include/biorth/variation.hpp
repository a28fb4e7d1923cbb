// First variation of sectional curvature under metric deformations, and the
// unnormalized curvature k_c(t) along the Cheeger reparametrization.
//
// For g_s = g + s h at a g-flat plane spanned by g-orthonormal X, Y:
//
//   d/ds sec|0 = (n2h)(X,Y;X,Y) - (n2h)(Y,Y;X,X)/2 - (n2h)(X,X;Y,Y)/2
//
// with n2h the second covariant derivative of h; for h = phi g this
// collapses to -Hess phi(X,X)/2 - Hess phi(Y,Y)/2.

#pragma once

#include <Eigen/Dense>
#include <vector>

#include "biorth/cheeger.hpp"
#include "biorth/conformal.hpp"
#include "biorth/curvature.hpp"
#include "biorth/errors.hpp"
#include "biorth/metric.hpp"
#include "biorth/plane.hpp"

namespace biorth {

inline constexpr double kFlatGate = 1e-6;

// Hessian of phi in the Levi-Civita connection of Cheeger(t), as a bilinear
// form in chart components.
inline Eigen::Matrix4d phi_hessian(double t, double r_in, double r_out, const ChartId& chart,
                                   const Vec4d& u) {
  const ChristoffelData cd =
      christoffel_from_jets(metric_component_jets(MetricSpec::cheeger(t), chart, u));
  const Jet2 phi = conformal_factor_at<Jet2>(chart_jets(chart, u), r_in, r_out);
  return hessian_scalar(cd, phi);
}

// The eq-dds combination on a g-orthonormal frame; no flatness gate.
inline double first_variation_formula(const Eigen::Matrix4d& hess_phi, const Frame42& frame) {
  const Eigen::Vector4d x = frame.col(0), y = frame.col(1);
  return -0.5 * x.dot(hess_phi * x) - 0.5 * y.dot(hess_phi * y);
}

// d/ds sec_{g_s}(sigma)|_0 for the conformal family g_s = (1 + s phi) g_t.
// Requires a g_t-flat plane.
inline double first_variation_analytic(double t, double r_in, double r_out,
                                       const ChartId& chart, const Vec4d& u,
                                       const Frame42& raw_frame) {
  const CurvatureAt c = riemann(MetricSpec::cheeger(t), chart, u);
  const Frame42 frame = g_orthonormalize_frame(raw_frame, c.g);
  const double sec = sectional(c, frame);
  if (std::abs(sec) >= kFlatGate)
    throw NotFlatError("first_variation_analytic: plane is not g-flat");
  return first_variation_formula(phi_hessian(t, r_in, r_out, chart, u), frame);
}

inline double first_variation_analytic(const MetricSpec& deformed, const ChartId& chart,
                                       const Vec4d& u, const Frame42& raw_frame) {
  return first_variation_analytic(deformed.t, deformed.r_in, deformed.r_out, chart, u,
                                  raw_frame);
}

// General-tensor route, h given as a jet-valued component
// field over the same chart.  Validated against finite differences; the
// h = phi g case must reproduce the analytic route.
template <class GField, class HField>
double first_variation_general(GField&& gfield, HField&& hfield, const Vec4d& u,
                               const Frame42& raw_frame) {
  const MetricJets gj = gfield(u);
  const ChristoffelData cd = christoffel_from_jets(gj);
  const CurvatureAt c = riemann_from_jets(gj, u);
  const Frame42 frame = g_orthonormalize_frame(raw_frame, c.g);
  const double sec = sectional(c, frame);
  if (std::abs(sec) >= kFlatGate)
    throw NotFlatError("first_variation_general: plane is not g-flat");
  const Nabla2Tensor n2 = second_covariant_derivative(cd, hfield(u));
  const Eigen::Vector4d x = frame.col(0), y = frame.col(1);
  return nabla2_eval(n2, x, y, x, y) - 0.5 * nabla2_eval(n2, x, x, y, y) -
         0.5 * nabla2_eval(n2, y, y, x, x);
}

// ---------------------------------------------------------------------------
// Cheeger curvature evolution.

// Unnormalized g0-sectional curvature of a mixed-type ambient frame: both
// factors are unit round spheres.
inline double g0_sec_numerator(const TangentPair& x, const TangentPair& y) {
  const double a = norm2(x.v1) * norm2(y.v1) - dot(x.v1, y.v1) * dot(x.v1, y.v1);
  const double b = norm2(x.v2) * norm2(y.v2) - dot(x.v2, y.v2) * dot(x.v2, y.v2);
  return a + b;
}

// [P0 X_m, P0 Y_m] under the so(3) <-> R^3 identification (cross product);
// P0 X_m is the projection of a_p(X) onto the slice m_p.
inline Vec3d kc_bracket(const PointPair& p, const TangentVec& x, const TangentVec& y) {
  const VerticalFrame vf = vertical_frame(p);
  auto proj_m = [&](const Vec3d& a) {
    Vec3d out{};
    for (const Vec3d& s : vf.slice_basis) out = out + dot(a, s) * s;
    return out;
  };
  const Vec3d ax = proj_m(coisotropy_rep<double>({p.p1, p.p2}, {x.v1, x.v2}));
  const Vec3d ay = proj_m(coisotropy_rep<double>({p.p1, p.p2}, {y.v1, y.v2}));
  return cross(ax, ay);
}

// k_c(t) = g_t(R_t(C_t^-1 X, C_t^-1 Y) C_t^-1 Y, C_t^-1 X) for a g0-flat
// plane; the input frame is g0-orthonormalized first.
inline std::vector<double> kc_curve(const PointPair& p, const TangentVec& x_in,
                                    const TangentVec& y_in, const std::vector<double>& t_grid) {
  TangentVec x = x_in, y = y_in;
  {  // g0 Gram-Schmidt
    const double nx = std::sqrt(g0_pair(as_pair(x), as_pair(x)));
    x.v1 = x.v1 * (1.0 / nx);
    x.v2 = x.v2 * (1.0 / nx);
    const double c = g0_pair(as_pair(x), as_pair(y));
    y.v1 = y.v1 - c * x.v1;
    y.v2 = y.v2 - c * x.v2;
    const double ny = std::sqrt(g0_pair(as_pair(y), as_pair(y)));
    y.v1 = y.v1 * (1.0 / ny);
    y.v2 = y.v2 * (1.0 / ny);
  }
  if (std::abs(g0_sec_numerator(as_pair(x), as_pair(y))) >= kFlatGate)
    throw NotFlatError("kc_curve: plane is not g0-flat");

  const ChartId chart = select_chart(p);
  const Vec4d u = point_to_chart(p, chart);
  std::vector<double> out;
  out.reserve(t_grid.size());
  for (const double t : t_grid) {
    const TangentVec w1 = ct_inv_apply(t, p, x);
    const TangentVec w2 = ct_inv_apply(t, p, y);
    const Vec4d c1 = tangent_to_chart(chart, u, as_pair(w1));
    const Vec4d c2 = tangent_to_chart(chart, u, as_pair(w2));
    const CurvatureAt c = riemann(MetricSpec::cheeger(t), chart, u);
    out.push_back(sec_numerator(c, Eigen::Vector4d(c1[0], c1[1], c1[2], c1[3]),
                                Eigen::Vector4d(c2[0], c2[1], c2[2], c2[3])));
  }
  return out;
}

}  // namespace biorth
