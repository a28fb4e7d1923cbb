// Whitened fiber operations for the inner optimization loops.
//
// At a fixed evaluation point the metric G = lt^T lt is constant, so planes
// are carried as Euclidean-orthonormal 4x2 frames in the whitened
// coordinates q = lt * (chart frame).  The curvature operator is rotated
// into the same coordinates once; after that a sectional evaluation is a
// wedge plus a 6x6 quadratic form and needs no decompositions.  Distances
// here use the cosine route only (adequate away from machine-small angles;
// the public grassmann_dist keeps the accurate hybrid).

#pragma once

#include <Eigen/Dense>
#include <array>
#include <cmath>

#include "biorth/plane.hpp"

namespace biorth {

struct FastFiber {
  Eigen::Matrix4d G;
  Eigen::Matrix4d lt;       // G = lt^T lt (upper factor)
  Eigen::Matrix4d lt_inv;
  double rw[6][6];          // whitened sec-numerator operator
  ChartId chart;
  Vec4d u{};

  FastFiber(const Eigen::Matrix4d& g, const CurvatureAt& curv, const ChartId& chart_,
            const Vec4d& u_)
      : G(g), chart(chart_), u(u_) {
    const Eigen::LLT<Eigen::Matrix4d> llt(G);
    lt = llt.matrixL().transpose();
    lt_inv = lt.inverse();
    // Induced map on bivectors: wedge(W x, W y) = L2(W) wedge(x, y).
    Eigen::Matrix<double, 6, 6> l2;
    for (int a = 0; a < 6; ++a) {
      const int i = kWedgePairs[a][0], j = kWedgePairs[a][1];
      for (int b = 0; b < 6; ++b) {
        const int k = kWedgePairs[b][0], l = kWedgePairs[b][1];
        l2(a, b) = lt_inv(i, k) * lt_inv(j, l) - lt_inv(i, l) * lt_inv(j, k);
      }
    }
    Eigen::Matrix<double, 6, 6> rop;
    for (int a = 0; a < 6; ++a)
      for (int b = 0; b < 6; ++b) rop(a, b) = curv.Rop[a][b];
    const Eigen::Matrix<double, 6, 6> rwm = l2.transpose() * rop * l2;
    for (int a = 0; a < 6; ++a)
      for (int b = 0; b < 6; ++b) rw[a][b] = rwm(a, b);
  }

  using Q = Eigen::Matrix<double, 4, 2>;  // Euclidean-orthonormal columns

  Q whiten(const Frame42& chart_frame) const { return orthonormalize_q(lt * chart_frame); }

  Plane unwhiten(const Q& q) const {
    return orthonormalize(lt_inv * q, G, chart, u);
  }

  static Q orthonormalize_q(const Q& raw) {
    Q f = raw;
    for (int k = 0; k < 2; ++k) {
      Eigen::Vector4d v = f.col(k);
      for (int j = 0; j < k; ++j) v -= f.col(j).dot(v) * f.col(j);
      f.col(k) = v / v.norm();
    }
    return f;
  }

  double sec(const Q& q) const {
    const Eigen::Vector4d x = q.col(0), y = q.col(1);
    double w[6];
    for (int a = 0; a < 6; ++a) {
      const int i = kWedgePairs[a][0], j = kWedgePairs[a][1];
      w[a] = x(i) * y(j) - x(j) * y(i);
    }
    double s = 0.0;
    for (int a = 0; a < 6; ++a) {
      double row = 0.0;
      for (int b = 0; b < 6; ++b) row += rw[a][b] * w[b];
      s += w[a] * row;
    }
    return s;  // orthonormal span: the Gram determinant is 1
  }

  // Principal cosines of two orthonormal frames (closed-form 2x2 singular
  // values of qa^T qb), descending.
  static std::array<double, 2> cosines(const Q& qa, const Q& qb) {
    const Eigen::Matrix2d m = qa.transpose() * qb;
    const double a = m(0, 0), b = m(0, 1), c = m(1, 0), d = m(1, 1);
    const double f = a * a + b * b + c * c + d * d;
    const double det = a * d - b * c;
    const double disc = std::sqrt(std::max(0.0, f * f - 4.0 * det * det));
    const double s1 = std::sqrt(std::max(0.0, 0.5 * (f + disc)));
    const double s2 = std::sqrt(std::max(0.0, 0.5 * (f - disc)));
    return {std::min(1.0, s1), std::min(1.0, s2)};
  }

  static double dist(const Q& qa, const Q& qb) {
    const auto c = cosines(qa, qb);
    return std::hypot(std::acos(c[0]), std::acos(c[1]));
  }

  static Q complement(const Q& q) {
    const Eigen::HouseholderQR<Q> qr(q);
    const Eigen::Matrix4d full = qr.householderQ();
    Q out = full.rightCols<2>();
    return out;
  }

  static Q perturb(const Q& q, const Q& comp, const std::array<double, 4>& a) {
    Q raw;
    raw.col(0) = q.col(0) + a[0] * comp.col(0) + a[1] * comp.col(1);
    raw.col(1) = q.col(1) + a[2] * comp.col(0) + a[3] * comp.col(1);
    return orthonormalize_q(raw);
  }

  // Frame at prescribed principal angles from qa in the directions of qb
  // (missing directions synthesized from the complement); phi ascending,
  // each in [0, pi/2].
  static Q at_angles(const Q& qa, const Q& qb, std::array<double, 2> phi) {
    Eigen::JacobiSVD<Eigen::Matrix2d> svd(qa.transpose() * qb,
                                          Eigen::ComputeFullU | Eigen::ComputeFullV);
    const Q pa = qa * svd.matrixU();
    const Q pb = qb * svd.matrixV();
    Eigen::Vector4d w[2];
    bool have[2] = {false, false};
    for (int i = 0; i < 2; ++i) {
      const double ci = std::min(1.0, svd.singularValues()(i));
      const double th = std::acos(ci);
      if (th > 1e-9) {
        w[i] = (pb.col(i) - ci * pa.col(i)).normalized();
        have[i] = true;
      }
    }
    if (!have[0] || !have[1]) {
      const Q n = complement(qa);
      for (int i = 0; i < 2; ++i) {
        if (have[i]) continue;
        const int o = 1 - i;
        Eigen::Vector4d cand = n.col(0);
        if (have[o]) {
          const Eigen::Vector4d c0 = n.col(0) - w[o] * w[o].dot(n.col(0));
          const Eigen::Vector4d c1 = n.col(1) - w[o] * w[o].dot(n.col(1));
          cand = (c0.norm() >= c1.norm()) ? c0 : c1;
        }
        w[i] = cand.normalized();
        have[i] = true;
      }
    }
    Q out;
    for (int i = 0; i < 2; ++i)
      out.col(i) = std::cos(phi[i]) * pa.col(i) + std::sin(phi[i]) * w[i];
    return orthonormalize_q(out);
  }

  static Q project_to_sphere(const Q& qa, const Q& qb, double theta) {
    const auto c = cosines(qa, qb);
    std::array<double, 2> th{std::acos(c[0]), std::acos(c[1])};  // ascending
    double d = std::hypot(th[0], th[1]);
    Q dir = qb;
    if (d < 1e-8) {
      dir = complement(qa);
      th = {M_PI / 2.0, M_PI / 2.0};
      d = kMaxPlaneDist;
    }
    const double tau = theta / d;
    std::array<double, 2> phi{tau * th[0], tau * th[1]};
    if (phi[1] > M_PI / 2.0) {
      phi[1] = M_PI / 2.0;
      phi[0] = std::sqrt(std::max(0.0, theta * theta - phi[1] * phi[1]));
    }
    return at_angles(qa, dir, phi);
  }
};

}  // namespace biorth
