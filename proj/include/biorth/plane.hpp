// Tangent 2-planes, the fiberwise Grassmannian distance, complements and
// geodesics.  All inner products live in the metric value matrix G carried
// by the plane; computations whiten through the Cholesky factor of G so the
// Euclidean formulas apply.

#pragma once

#include <Eigen/Dense>
#include <array>
#include <cmath>
#include <numbers>

#include "biorth/charts.hpp"
#include "biorth/curvature.hpp"
#include "biorth/errors.hpp"

namespace biorth {

struct Plane {
  Frame42 frame;       // g-orthonormal columns spanning the plane
  ChartId chart;
  Vec4d u{};
  Eigen::Matrix4d G;   // metric values at the base point

  Eigen::Vector4d x() const { return frame.col(0); }
  Eigen::Vector4d y() const { return frame.col(1); }
};

inline constexpr double kMaxPlaneDist = M_PI / std::numbers::sqrt2;

// Gram-Schmidt in the G inner product; DegeneratePlane on dependent input.
inline Frame42 g_orthonormalize_frame(const Frame42& raw, const Eigen::Matrix4d& G) {
  const Eigen::Matrix2d gram = raw.transpose() * G * raw;
  if (gram.determinant() < kGramTol)
    throw DegeneratePlaneError("orthonormalize: spanning vectors are dependent");
  Frame42 f = raw;
  for (int k = 0; k < 2; ++k) {
    Eigen::Vector4d v = f.col(k);
    for (int j = 0; j < k; ++j) v -= f.col(j).dot(G * v) * f.col(j);
    f.col(k) = v / std::sqrt(v.dot(G * v));
  }
  return f;
}

inline Plane orthonormalize(const Frame42& raw, const Eigen::Matrix4d& G, const ChartId& chart,
                            const Vec4d& u) {
  return {g_orthonormalize_frame(raw, G), chart, u, G};
}

inline Plane orthonormalize(const Frame42& raw, const MetricSpec& spec, const ChartId& chart,
                            const Vec4d& u) {
  return orthonormalize(raw, metric_components(spec, chart, u).value(), chart, u);
}

namespace detail {

// Principal angles between G-orthonormal frames, cosine route for large
// angles and sine route for small ones (atan2 pairing keeps both accurate).
inline std::array<double, 2> principal_angles(const Frame42& fa, const Frame42& fb,
                                              const Eigen::Matrix4d& G) {
  const Eigen::LLT<Eigen::Matrix4d> llt(G);
  const Eigen::Matrix4d lt = llt.matrixL().transpose();
  const Frame42 qa = lt * fa, qb = lt * fb;
  const Eigen::Matrix2d ctb = qa.transpose() * qb;
  Eigen::JacobiSVD<Eigen::Matrix2d> svc(ctb);
  const Eigen::Vector2d c = svc.singularValues();                 // descending
  Eigen::JacobiSVD<Frame42> svs(qa - qb * ctb.transpose().eval());
  const Eigen::Vector2d s = svs.singularValues().reverse();       // ascending
  std::array<double, 2> th;
  for (int i = 0; i < 2; ++i)
    th[i] = std::atan2(std::min(1.0, s(i)), std::min(1.0, std::max(0.0, c(i))));
  return th;
}

// Deterministic frame ordering so dist(a,b) and dist(b,a) run the
// identical arithmetic (symmetry holds exactly).
inline bool frame_less(const Frame42& a, const Frame42& b) {
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 2; ++j) {
      if (a(i, j) < b(i, j)) return true;
      if (a(i, j) > b(i, j)) return false;
    }
  return false;
}

}  // namespace detail

inline double grassmann_dist(const Plane& a, const Plane& b) {
  const Frame42 *fa = &a.frame, *fb = &b.frame;
  if (detail::frame_less(*fb, *fa)) std::swap(fa, fb);
  const auto th = detail::principal_angles(*fa, *fb, a.G);
  return std::hypot(th[0], th[1]);
}

inline Plane orth_complement(const Plane& p) {
  const Eigen::LLT<Eigen::Matrix4d> llt(p.G);
  const Eigen::Matrix4d lt = llt.matrixL().transpose();
  const Frame42 q = lt * p.frame;
  Eigen::JacobiSVD<Eigen::Matrix<double, 2, 4>> svd(q.transpose(), Eigen::ComputeFullV);
  Frame42 nperp = svd.matrixV().rightCols<2>();
  Frame42 back = lt.triangularView<Eigen::Upper>().solve(nperp);
  return orthonormalize(back, p.G, p.chart, p.u);
}

// Plane whose principal angles relative to `a` are phi[i], rotating along
// the directions determined by `b` where those are defined.  phi pairs with
// the angles of b in ascending order; each phi must lie in [0, pi/2].
inline Plane plane_at_angles(const Plane& a, const Plane& b, std::array<double, 2> phi) {
  const Eigen::LLT<Eigen::Matrix4d> llt(a.G);
  const Eigen::Matrix4d lt = llt.matrixL().transpose();
  const Frame42 qa = lt * a.frame, qb = lt * b.frame;
  Eigen::JacobiSVD<Eigen::Matrix2d> svd(qa.transpose() * qb,
                                        Eigen::ComputeFullU | Eigen::ComputeFullV);
  const Frame42 pa = qa * svd.matrixU();
  const Frame42 pb = qb * svd.matrixV();

  // Normal directions; synthesized from the complement when b does not
  // determine them (zero principal angle).
  Eigen::Vector4d w[2];
  bool have[2] = {false, false};
  for (int i = 0; i < 2; ++i) {
    const double ci = std::min(1.0, svd.singularValues()(i));
    const double thi = std::acos(ci);
    if (thi > 1e-9) {
      w[i] = (pb.col(i) - ci * pa.col(i)) / std::sin(thi);
      have[i] = true;
    }
  }
  if (!have[0] || !have[1]) {
    Eigen::JacobiSVD<Eigen::Matrix<double, 2, 4>> nsvd(qa.transpose(), Eigen::ComputeFullV);
    const Eigen::Matrix<double, 4, 2> n = nsvd.matrixV().rightCols<2>();
    for (int i = 0; i < 2; ++i) {
      if (have[i]) continue;
      const int o = 1 - i;
      Eigen::Vector4d cand = n.col(0);
      if (have[o]) {
        // Pick the complement direction orthogonal to the other normal.
        Eigen::Vector4d c0 = n.col(0) - w[o] * w[o].dot(n.col(0));
        Eigen::Vector4d c1 = n.col(1) - w[o] * w[o].dot(n.col(1));
        cand = (c0.norm() >= c1.norm()) ? c0 : c1;
      }
      w[i] = cand / cand.norm();
      have[i] = true;
    }
  }

  Frame42 out;
  // Column 0 pairs with the smaller principal angle of b (c descending).
  for (int i = 0; i < 2; ++i)
    out.col(i) = std::cos(phi[i]) * pa.col(i) + std::sin(phi[i]) * w[i];
  Frame42 back = lt.triangularView<Eigen::Upper>().solve(out);
  return orthonormalize(back, a.G, a.chart, a.u);
}

// Point at parameter tau on the Grassmannian geodesic from a through b
// (tau = 0 gives a, tau = 1 gives b); dist(a, .) grows linearly in tau while
// the scaled principal angles stay below pi/2.
inline Plane grassmann_geodesic(const Plane& a, const Plane& b, double tau) {
  const auto th = detail::principal_angles(a.frame, b.frame, a.G);
  return plane_at_angles(a, b, {tau * th[0], tau * th[1]});
}

inline double sec_of(const CurvatureAt& c, const Plane& p) { return sectional(c, p.frame); }

// sec^perp(sigma) = (sec sigma + sec sigma^perp) / 2.
inline double sec_perp(const CurvatureAt& c, const Plane& p) {
  return 0.5 * (sec_of(c, p) + sec_of(c, orth_complement(p)));
}

}  // namespace biorth
