// Cheeger deformation of S^2 x S^2 under the diagonal SO(3)-action.
//
// so(3) is identified with R^3 (bracket = cross product), so the action
// field of z is Z*_p = (z x p1, z x p2).  Writing
//
//   a_p(X) = p1 x x1 + p2 x x2         (g0(X, Z*_p) = <a_p(X), z>)
//   P0 z   = 2z - <z,p1> p1 - <z,p2> p2
//
// the deformed metric and the reparametrization operator have the closed
// forms
//
//   g_t(X,Y) = g0(X,Y) - t <(Id + t P0)^-1 a_p(X), a_p(Y)>
//   C_t X    = X - t ((Id + t P0)^-1 a_p(X))*_p
//   C_t^-1 X = X + t (a_p(X))*_p
//
// which are smooth across the singular orbits and evaluate in jet
// arithmetic (the 3x3 inverse is closed-form).

#pragma once

#include <Eigen/Dense>
#include <array>
#include <vector>

#include "biorth/geometry.hpp"
#include "biorth/jet.hpp"

namespace biorth {

template <class T>
TangentPairT<T> action_field_at(const Vec3<T>& z, const PointPairT<T>& p) {
  return {cross(z, p.p1), cross(z, p.p2)};
}

inline TangentVec action_field(const Vec3d& z, const PointPair& p) {
  return {cross(z, p.p1), cross(z, p.p2), p};
}

// a_p(X): the vector representing g0(X, .*) on the Lie algebra.
template <class T>
Vec3<T> coisotropy_rep(const PointPairT<T>& p, const TangentPairT<T>& x) {
  return cross(p.p1, x.v1) + cross(p.p2, x.v2);
}

template <class T>
Vec3<T> p0_apply_at(const PointPairT<T>& p, const Vec3<T>& z) {
  return 2.0 * z - p.p1 * dot(z, p.p1) - p.p2 * dot(z, p.p2);
}

inline Vec3d p0_apply(const Vec3d& z, const PointPair& p) { return p0_apply_at<double>({p.p1, p.p2}, z); }

template <class T>
Mat3<T> id_plus_t_p0(const PointPairT<T>& p, double t) {
  Mat3<T> m;
  const Vec3<T>& p1 = p.p1;
  const Vec3<T>& p2 = p.p2;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      m.m[i][j] = -t * (p1[i] * p1[j] + p2[i] * p2[j]);
      if (i == j) m.m[i][j] += 1.0 + 2.0 * t;
    }
  return m;
}

template <class T>
T g0_pair_at(const TangentPairT<T>& x, const TangentPairT<T>& y) {
  return dot(x.v1, y.v1) + dot(x.v2, y.v2);
}

template <class T>
T cheeger_pair_at(double t, const PointPairT<T>& p, const TangentPairT<T>& x,
                  const TangentPairT<T>& y) {
  T g0 = g0_pair_at(x, y);
  if (t == 0.0) return g0;
  const Vec3<T> ax = coisotropy_rep(p, x);
  const Vec3<T> ay = coisotropy_rep(p, y);
  const Vec3<T> bx = inverse(id_plus_t_p0(p, t)).apply(ax);
  return g0 - t * dot(bx, ay);
}

inline TangentVec ct_apply(double t, const PointPair& p, const TangentVec& x) {
  const PointPairT<double> pp{p.p1, p.p2};
  const Vec3d a = coisotropy_rep<double>(pp, {x.v1, x.v2});
  const Vec3d b = inverse(id_plus_t_p0(pp, t)).apply(a);
  return {x.v1 - t * cross(b, p.p1), x.v2 - t * cross(b, p.p2), p};
}

inline TangentVec ct_inv_apply(double t, const PointPair& p, const TangentVec& x) {
  const Vec3d a = coisotropy_rep<double>({p.p1, p.p2}, {x.v1, x.v2});
  return {x.v1 + t * cross(a, p.p1), x.v2 + t * cross(a, p.p2), p};
}

// ---------------------------------------------------------------------------
// Orbit frames (value level; Eigen does the rank-revealing work).

inline Eigen::Matrix<double, 6, 1> stack6(const TangentVec& v) {
  Eigen::Matrix<double, 6, 1> r;
  r << v.v1.x, v.v1.y, v.v1.z, v.v2.x, v.v2.y, v.v2.z;
  return r;
}

inline constexpr double kRankTol = 1e-9;

struct VerticalFrame {
  std::vector<TangentVec> basis;    // g0-orthonormal basis of the vertical space
  std::vector<Vec3d> slice_basis;   // orthonormal basis of m_p in R^3
  int dim = 0;                      // 3 at regular points, 2 on the singular orbits
};

inline VerticalFrame vertical_frame(const PointPair& p) {
  Eigen::Matrix<double, 6, 3> m;
  for (int k = 0; k < 3; ++k) {
    Vec3d ek{k == 0 ? 1.0 : 0.0, k == 1 ? 1.0 : 0.0, k == 2 ? 1.0 : 0.0};
    m.col(k) = stack6(action_field(ek, p));
  }
  Eigen::JacobiSVD<Eigen::Matrix<double, 6, 3>> svd(
      m, Eigen::ComputeFullU | Eigen::ComputeFullV);
  VerticalFrame out;
  for (int k = 0; k < 3; ++k) {
    if (svd.singularValues()(k) <= kRankTol) break;
    ++out.dim;
    const auto c = svd.matrixU().col(k);
    out.basis.push_back({{c(0), c(1), c(2)}, {c(3), c(4), c(5)}, p});
    const auto v = svd.matrixV().col(k);
    out.slice_basis.push_back({v(0), v(1), v(2)});
  }
  return out;
}

// Axes x in {p1,p2}^perp, i.e. the null space of the 2x3 matrix [p1; p2].
inline std::vector<Vec3d> biperp_axes(const PointPair& p) {
  Eigen::Matrix<double, 2, 3> m;
  m << p.p1.x, p.p1.y, p.p1.z, p.p2.x, p.p2.y, p.p2.z;
  Eigen::JacobiSVD<Eigen::Matrix<double, 2, 3>> svd(m, Eigen::ComputeFullV);
  int rank = 0;
  for (int k = 0; k < 2; ++k)
    if (svd.singularValues()(k) > kRankTol) ++rank;
  std::vector<Vec3d> axes;
  for (int k = rank; k < 3; ++k) {
    const auto v = svd.matrixV().col(k);
    axes.push_back({v(0), v(1), v(2)});
  }
  return axes;
}

// g0-orthonormal basis of the horizontal space (X*_{p1}, -X*_{p2}),
// x in {p1,p2}^perp.  Dimension 1 at regular points, 2 on +-Delta.
inline std::vector<TangentVec> horizontal_frame(const PointPair& p) {
  std::vector<TangentVec> out;
  for (const Vec3d& x : biperp_axes(p)) {
    TangentVec h{cross(x, p.p1), -1.0 * cross(x, p.p2), p};
    for (const TangentVec& prev : out) {
      const double c = g0_pair(as_pair(h), as_pair(prev));
      h.v1 = h.v1 - c * prev.v1;
      h.v2 = h.v2 - c * prev.v2;
    }
    const double n = std::sqrt(g0_pair(as_pair(h), as_pair(h)));
    h.v1 = h.v1 * (1.0 / n);
    h.v2 = h.v2 * (1.0 / n);
    out.push_back(h);
  }
  return out;
}

// Unique z in m_p with (z)*_p equal to the vertical part of X:
// solve P0 z = proj_m a_p(X) in the slice basis.
inline Vec3d slice_rep(const PointPair& p, const TangentVec& x) {
  const VerticalFrame vf = vertical_frame(p);
  const int k = vf.dim;
  const Vec3d a = coisotropy_rep<double>({p.p1, p.p2}, {x.v1, x.v2});
  Eigen::MatrixXd sys(k, k);
  Eigen::VectorXd rhs(k);
  for (int i = 0; i < k; ++i) {
    const Vec3d pz = p0_apply(vf.slice_basis[i], p);
    for (int j = 0; j < k; ++j) sys(j, i) = dot(pz, vf.slice_basis[j]);
    rhs(i) = dot(a, vf.slice_basis[i]);
  }
  const Eigen::VectorXd c = sys.ldlt().solve(rhs);
  Vec3d z{};
  for (int i = 0; i < k; ++i) z = z + c(i) * vf.slice_basis[i];
  return z;
}

inline TangentVec vertical_part(const PointPair& p, const TangentVec& x) {
  return action_field(slice_rep(p, x), p);
}

inline TangentVec horizontal_part(const PointPair& p, const TangentVec& x) {
  const TangentVec v = vertical_part(p, x);
  return {x.v1 - v.v1, x.v2 - v.v2, p};
}

// Distance between two 2-dim subspaces of the ambient R^6 in the g0 inner
// product, sqrt(theta1^2 + theta2^2).  Small angles come from the sine-based
// formula so exact span equality resolves below 1e-12 (acos of a cosine
// saturates near 1e-8).
inline double ambient_span_distance(const Eigen::Matrix<double, 6, 2>& a,
                                    const Eigen::Matrix<double, 6, 2>& b) {
  using M62 = Eigen::Matrix<double, 6, 2>;
  const M62 qa = Eigen::HouseholderQR<M62>(a).householderQ() * M62::Identity();
  const M62 qb = Eigen::HouseholderQR<M62>(b).householderQ() * M62::Identity();
  const Eigen::Matrix2d ctb = qa.transpose() * qb;
  Eigen::JacobiSVD<Eigen::Matrix2d> svc(ctb);
  Eigen::Vector2d c = svc.singularValues();  // descending
  Eigen::JacobiSVD<M62> svs(qa - qb * ctb.transpose().eval());
  Eigen::Vector2d s = svs.singularValues().reverse();  // ascending
  double d2 = 0.0;
  for (int i = 0; i < 2; ++i) {
    const double th = std::atan2(std::min(1.0, s(i)), std::min(1.0, c(i)));
    d2 += th * th;
  }
  return std::sqrt(d2);
}

inline double ambient_span_distance(const std::array<TangentVec, 2>& a,
                                    const std::array<TangentVec, 2>& b) {
  Eigen::Matrix<double, 6, 2> ma, mb;
  for (int k = 0; k < 2; ++k) {
    ma.col(k) = stack6(a[k]);
    mb.col(k) = stack6(b[k]);
  }
  return ambient_span_distance(ma, mb);
}

// The mixed plane sigma_{pi(x)} = span{(X*_{p1}, 0), (0, X*_{p2})},
// x in {p1,p2}^perp; the planes that stay flat for all t.
inline std::array<TangentVec, 2> sigma_pi_frame(const PointPair& p, const Vec3d& x) {
  return {TangentVec{cross(x, p.p1), {0.0, 0.0, 0.0}, p},
          TangentVec{{0.0, 0.0, 0.0}, cross(x, p.p2), p}};
}

}  // namespace biorth
