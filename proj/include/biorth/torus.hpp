// The totally geodesic flat torus through a diagonal point and the
// Gauss-Bonnet balance of the first variation over it.
//
// For p1 on S^2 and a unit axis x orthogonal to p1, the torus is
//   i(u, v) = (exp(u x) p1, exp(v x) p1),   u, v in [0, 2 pi),
// whose tangent planes are exactly the sigma_pi(x) planes along it.  Under
// g_t it is flat and totally geodesic, so the variation of the induced
// curvature matches the ambient one and integrates to zero against the
// induced area (the induced Gauss-Bonnet total is 2 pi chi(T^2) = 0 for
// every s).

#pragma once

#include <Eigen/Dense>
#include <array>
#include <cmath>

#include "biorth/cheeger.hpp"
#include "biorth/curvature.hpp"
#include "biorth/metric.hpp"
#include "biorth/variation.hpp"

namespace biorth {

struct TorusFrame {
  Vec3d p1;    // diagonal base point (p1, p1)
  Vec3d axis;  // unit rotation axis, orthogonal to p1
};

template <class T>
Vec3<T> torus_factor(const TorusFrame& tf, const T& angle) {
  using std::cos;
  using std::sin;
  const Vec3<T> a{T(tf.p1.x), T(tf.p1.y), T(tf.p1.z)};
  const Vec3d w = cross(tf.axis, tf.p1);
  const Vec3<T> b{T(w.x), T(w.y), T(w.z)};
  return a * cos(angle) + b * sin(angle);
}

inline PointPair torus_point(const TorusFrame& tf, double u, double v) {
  return {torus_factor<double>(tf, u), torus_factor<double>(tf, v)};
}

// Tangent frame of the torus: (x ^ q1, 0) and (0, x ^ q2).
inline std::array<TangentVec, 2> torus_tangent(const TorusFrame& tf, double u, double v) {
  const PointPair p = torus_point(tf, u, v);
  return {TangentVec{cross(tf.axis, p.p1), {0, 0, 0}, p},
          TangentVec{{0, 0, 0}, cross(tf.axis, p.p2), p}};
}

// Induced metric of the torus under Cheeger(t), carried as Jet2 in (u, v)
// (directions 0 and 1).
inline std::array<std::array<Jet2, 2>, 2> torus_induced_jets(const TorusFrame& tf, double t,
                                                             double u, double v) {
  const Jet2 ju = Jet2::variable(u, 0), jv = Jet2::variable(v, 1);
  const Vec3<Jet2> q1 = torus_factor<Jet2>(tf, ju);
  const Vec3<Jet2> q2 = torus_factor<Jet2>(tf, jv);
  const Vec3<Jet2> ax{Jet2(tf.axis.x), Jet2(tf.axis.y), Jet2(tf.axis.z)};
  const PointPairT<Jet2> p{q1, q2};
  const TangentPairT<Jet2> xu{cross(ax, q1), Vec3<Jet2>{}};
  const TangentPairT<Jet2> xv{Vec3<Jet2>{}, cross(ax, q2)};
  std::array<std::array<Jet2, 2>, 2> h;
  h[0][0] = cheeger_pair_at<Jet2>(t, p, xu, xu);
  h[0][1] = cheeger_pair_at<Jet2>(t, p, xu, xv);
  h[1][0] = h[0][1];
  h[1][1] = cheeger_pair_at<Jet2>(t, p, xv, xv);
  return h;
}

// Gauss curvature of a 2D metric given with first and second derivatives in
// jet directions 0, 1.
inline double gauss_curvature_2d(const std::array<std::array<Jet2, 2>, 2>& h) {
  double g[2][2], dg[2][2][2], ddg[2][2][2][2];
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) {
      g[i][j] = h[i][j].v;
      for (int k = 0; k < 2; ++k) {
        dg[k][i][j] = h[i][j].grad(k);
        for (int l = 0; l < 2; ++l) ddg[k][l][i][j] = h[i][j].hess(k, l);
      }
    }
  const double det = g[0][0] * g[1][1] - g[0][1] * g[0][1];
  double ginv[2][2] = {{g[1][1] / det, -g[0][1] / det}, {-g[0][1] / det, g[0][0] / det}};
  double low[2][2][2], dlow[2][2][2][2], gamma[2][2][2], dgamma[2][2][2][2];
  for (int l = 0; l < 2; ++l)
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) {
        low[l][i][j] = 0.5 * (dg[i][j][l] + dg[j][i][l] - dg[l][i][j]);
        for (int m = 0; m < 2; ++m)
          dlow[m][l][i][j] = 0.5 * (ddg[m][i][j][l] + ddg[m][j][i][l] - ddg[m][l][i][j]);
      }
  double dginv[2][2][2];
  for (int k = 0; k < 2; ++k)
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) {
        double s = 0.0;
        for (int a = 0; a < 2; ++a)
          for (int b = 0; b < 2; ++b) s -= ginv[i][a] * dg[k][a][b] * ginv[b][j];
        dginv[k][i][j] = s;
      }
  for (int k = 0; k < 2; ++k)
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) {
        double s = 0.0, ds0 = 0.0, ds1 = 0.0;
        for (int l = 0; l < 2; ++l) {
          s += ginv[k][l] * low[l][i][j];
          ds0 += dginv[0][k][l] * low[l][i][j] + ginv[k][l] * dlow[0][l][i][j];
          ds1 += dginv[1][k][l] * low[l][i][j] + ginv[k][l] * dlow[1][l][i][j];
        }
        gamma[k][i][j] = s;
        dgamma[0][k][i][j] = ds0;
        dgamma[1][k][i][j] = ds1;
      }
  // R^l_{010} -> lowered R_{0 1 0 l}; K = R(d0,d1,d1,d0)/det.
  double r0101 = 0.0;
  for (int l = 0; l < 2; ++l) {
    double rup = dgamma[0][l][1][1] - dgamma[1][l][0][1];
    for (int m = 0; m < 2; ++m)
      rup += gamma[l][0][m] * gamma[m][1][1] - gamma[l][1][m] * gamma[m][0][1];
    r0101 += g[0][l] * rup;  // R(d0,d1,d1,d0) with the lowered index first
  }
  return r0101 / det;
}

struct GaussBonnetResult {
  double integral = 0.0;
  double integrand_origin = 0.0;
  double integrand_min = 0.0;
  double integrand_max = 0.0;
  double max_ii_norm = 0.0;
  double max_gauss = 0.0;
  std::vector<std::array<double, 2>> profile;  // (u, integrand along v = 0)
};

// Norm of the second fundamental form of the torus at (u, v) under
// Cheeger(t), computed in the per-point chart.
inline double torus_ii_norm(const TorusFrame& tf, double t, double u, double v) {
  const PointPair p = torus_point(tf, u, v);
  const ChartId chart = select_chart(p);

  // Chart coordinates of the immersion as 2D jets.
  const Jet2 ju = Jet2::variable(u, 0), jv = Jet2::variable(v, 1);
  const Vec3<Jet2> q1 = torus_factor<Jet2>(tf, ju);
  const Vec3<Jet2> q2 = torus_factor<Jet2>(tf, jv);
  std::array<Jet2, 4> U;
  {
    const Jet2 den1 = (chart.pole1 == Pole::north) ? (1.0 - q1.z) : (1.0 + q1.z);
    const Jet2 den2 = (chart.pole2 == Pole::north) ? (1.0 - q2.z) : (1.0 + q2.z);
    U[0] = q1.x * inverse(den1);
    U[1] = q1.y * inverse(den1);
    U[2] = q2.x * inverse(den2);
    U[3] = q2.y * inverse(den2);
  }
  Vec4d u0;
  for (int i = 0; i < 4; ++i) u0[i] = U[i].v;
  const ChristoffelData cd =
      christoffel_from_jets(metric_component_jets(MetricSpec::cheeger(t), chart, u0));

  Eigen::Matrix<double, 4, 2> tang;  // dU/du, dU/dv
  for (int i = 0; i < 4; ++i)
    for (int a = 0; a < 2; ++a) tang(i, a) = U[i].grad(a);

  Eigen::Matrix2d h = tang.transpose() * cd.g * tang;
  const Eigen::Matrix2d hinv = h.inverse();

  double norm2_sum = 0.0;
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b) {
      Eigen::Vector4d w;
      for (int k = 0; k < 4; ++k) {
        double s = U[k].hess(a, b);
        for (int i = 0; i < 4; ++i)
          for (int j = 0; j < 4; ++j)
            s += cd.gamma[k][i][j] * U[i].grad(a) * U[j].grad(b);
        w(k) = s;
      }
      // Remove the tangential part.
      Eigen::Vector2d coef = hinv * (tang.transpose() * cd.g * w);
      const Eigen::Vector4d nrm = w - tang * coef;
      norm2_sum += nrm.dot(cd.g * nrm);
    }
  return std::sqrt(norm2_sum);
}

inline double torus_variation_integrand(const TorusFrame& tf, double t, double r_in,
                                        double r_out, double u, double v) {
  const PointPair p = torus_point(tf, u, v);
  const ChartId chart = select_chart(p);
  const Vec4d uc = point_to_chart(p, chart);
  const auto tang = torus_tangent(tf, u, v);
  const Vec4d c0 = tangent_to_chart(chart, uc, as_pair(tang[0]));
  const Vec4d c1 = tangent_to_chart(chart, uc, as_pair(tang[1]));
  Frame42 f;
  f << c0[0], c1[0], c0[1], c1[1], c0[2], c1[2], c0[3], c1[3];
  return first_variation_analytic(t, r_in, r_out, chart, uc, f);
}

// grid_checks drives the pointwise totally-geodesic / flatness checks;
// grid_integral the periodic trapezoid rule for the variation integral
// (finer, so that the cutoff transition is resolved).
inline GaussBonnetResult gauss_bonnet_torus(const TorusFrame& tf, double t, double r_in,
                                            double r_out, int grid_checks,
                                            int grid_integral) {
  GaussBonnetResult out;
  out.integrand_min = std::numeric_limits<double>::infinity();
  out.integrand_max = -std::numeric_limits<double>::infinity();

  const double hc = 2.0 * M_PI / grid_checks;
  for (int i = 0; i < grid_checks; ++i)
    for (int j = 0; j < grid_checks; ++j) {
      const auto h = torus_induced_jets(tf, t, i * hc, j * hc);
      out.max_gauss = std::max(out.max_gauss, std::abs(gauss_curvature_2d(h)));
      out.max_ii_norm = std::max(out.max_ii_norm, torus_ii_norm(tf, t, i * hc, j * hc));
    }

  // The integrand depends on the points only through the pair (u, v); the
  // induced area element is evaluated alongside.
  const double hi = 2.0 * M_PI / grid_integral;
  double total = 0.0;
  for (int i = 0; i < grid_integral; ++i) {
    const auto row = parallel_map(grid_integral, [&](int j) {
      const auto h = torus_induced_jets(tf, t, i * hi, j * hi);
      const double det = h[0][0].v * h[1][1].v - h[0][1].v * h[0][1].v;
      const double fv = torus_variation_integrand(tf, t, r_in, r_out, i * hi, j * hi);
      return std::pair<double, double>(fv, std::sqrt(det));
    });
    for (int j = 0; j < grid_integral; ++j) {
      const auto [fv, area] = row[j];
      if (i == 0 && j == 0) out.integrand_origin = fv;
      out.integrand_min = std::min(out.integrand_min, fv);
      out.integrand_max = std::max(out.integrand_max, fv);
      total += fv * area;
      if (i == 0) out.profile.push_back({j * hi, fv});
    }
  }
  out.integral = total * hi * hi;
  return out;
}

}  // namespace biorth
