// Curvature assembly from jet-valued metric components.
//
// Conventions (frozen by the round-sphere calibration test):
//   R(X,Y)Z        = nabla_X nabla_Y Z - nabla_Y nabla_X Z - nabla_[X,Y] Z
//   R^l_{ijk}      = d_i Gamma^l_{jk} - d_j Gamma^l_{ik}
//                    + Gamma^l_{im} Gamma^m_{jk} - Gamma^l_{jm} Gamma^m_{ik}
//   R_{ijkl}       = g_{lm} R^m_{ijk}        (all indices lowered)
//   sec(X,Y)       = R(X,Y,Y,X) / (|X|^2 |Y|^2 - <X,Y>^2)
// so the unit round sphere has sec = +1.

#pragma once

#include <Eigen/Dense>
#include <array>
#include <cmath>
#include <utility>

#include "biorth/errors.hpp"
#include "biorth/metric.hpp"
#include "biorth/util.hpp"

namespace biorth {

inline constexpr double kGramTol = 1e-12;

using Frame42 = Eigen::Matrix<double, 4, 2>;

// Index pairs of the bivector basis e_i ^ e_j, i < j.
inline constexpr int kWedgePairs[6][2] = {{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3}};

struct ChristoffelData {
  Eigen::Matrix4d g, g_inv;
  double gamma[4][4][4];        // Gamma^k_{ij} -> gamma[k][i][j]
  double dgamma[4][4][4][4];    // d_m Gamma^k_{ij} -> dgamma[m][k][i][j]
};

inline ChristoffelData christoffel_from_jets(const MetricJets& m) {
  ChristoffelData cd;
  cd.g = value_matrix(m);
  require_spd(cd.g, "christoffel");
  cd.g_inv = cd.g.inverse();

  double dg[4][4][4];     // dg[k][i][j] = d_k g_ij
  double ddg[4][4][4][4];  // ddg[k][l][i][j] = d_k d_l g_ij
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) {
      for (int k = 0; k < 4; ++k) {
        dg[k][i][j] = m[i][j].grad(k);
        for (int l = 0; l < 4; ++l) ddg[k][l][i][j] = m[i][j].hess(k, l);
      }
    }

  Eigen::Matrix4d dginv[4];
  for (int k = 0; k < 4; ++k) {
    Eigen::Matrix4d dgk;
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j) dgk(i, j) = dg[k][i][j];
    dginv[k] = -cd.g_inv * dgk * cd.g_inv;
  }

  double low[4][4][4];      // Gamma_{ij,l} = (d_i g_jl + d_j g_il - d_l g_ij)/2
  double dlow[4][4][4][4];  // d_m of the above
  for (int l = 0; l < 4; ++l)
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j) {
        low[l][i][j] = 0.5 * (dg[i][j][l] + dg[j][i][l] - dg[l][i][j]);
        for (int mm = 0; mm < 4; ++mm)
          dlow[mm][l][i][j] =
              0.5 * (ddg[mm][i][j][l] + ddg[mm][j][i][l] - ddg[mm][l][i][j]);
      }

  for (int k = 0; k < 4; ++k)
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j) {
        double s = 0.0;
        for (int l = 0; l < 4; ++l) s += cd.g_inv(k, l) * low[l][i][j];
        cd.gamma[k][i][j] = s;
        for (int mm = 0; mm < 4; ++mm) {
          double d = 0.0;
          for (int l = 0; l < 4; ++l)
            d += dginv[mm](k, l) * low[l][i][j] + cd.g_inv(k, l) * dlow[mm][l][i][j];
          cd.dgamma[mm][k][i][j] = d;
        }
      }
  return cd;
}

struct CurvatureAt {
  Eigen::Matrix4d g, g_inv;
  double R[4][4][4][4];   // lowered R_{ijkl}
  double Rop[6][6];       // operator on bivectors: sec numerator = w^T Rop w
  Vec4d u{};
};

inline CurvatureAt riemann_from_jets(const MetricJets& m, const Vec4d& u) {
  const ChristoffelData cd = christoffel_from_jets(m);
  CurvatureAt c;
  c.g = cd.g;
  c.g_inv = cd.g_inv;
  c.u = u;

  double rup[4][4][4][4];  // R^l_{ijk} -> rup[l][i][j][k]
  for (int l = 0; l < 4; ++l)
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j)
        for (int k = 0; k < 4; ++k) {
          double s = cd.dgamma[i][l][j][k] - cd.dgamma[j][l][i][k];
          for (int mm = 0; mm < 4; ++mm)
            s += cd.gamma[l][i][mm] * cd.gamma[mm][j][k] -
                 cd.gamma[l][j][mm] * cd.gamma[mm][i][k];
          rup[l][i][j][k] = s;
        }

  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j)
      for (int k = 0; k < 4; ++k)
        for (int l = 0; l < 4; ++l) {
          double s = 0.0;
          for (int mm = 0; mm < 4; ++mm) s += c.g(l, mm) * rup[mm][i][j][k];
          c.R[i][j][k][l] = s;
        }

  for (int a = 0; a < 6; ++a)
    for (int b = 0; b < 6; ++b)
      c.Rop[a][b] = -c.R[kWedgePairs[a][0]][kWedgePairs[a][1]]
                      [kWedgePairs[b][0]][kWedgePairs[b][1]];
  return c;
}

template <class F>
CurvatureAt riemann_at(F&& field, const Vec4d& u) {
  return riemann_from_jets(field(u), u);
}

inline CurvatureAt riemann(const MetricSpec& spec, const ChartId& chart, const Vec4d& u) {
  return riemann_from_jets(metric_component_jets(spec, chart, u), u);
}

inline std::array<double, 6> wedge(const Eigen::Vector4d& x, const Eigen::Vector4d& y) {
  std::array<double, 6> w;
  for (int a = 0; a < 6; ++a) {
    const int i = kWedgePairs[a][0], j = kWedgePairs[a][1];
    w[a] = x(i) * y(j) - x(j) * y(i);
  }
  return w;
}

// Unnormalized sectional curvature R(X,Y,Y,X).
inline double sec_numerator(const CurvatureAt& c, const Eigen::Vector4d& x,
                            const Eigen::Vector4d& y) {
  const auto w = wedge(x, y);
  double s = 0.0;
  for (int a = 0; a < 6; ++a) {
    double row = 0.0;
    for (int b = 0; b < 6; ++b) row += c.Rop[a][b] * w[b];
    s += w[a] * row;
  }
  return s;
}

inline double sectional(const CurvatureAt& c, const Eigen::Vector4d& x,
                        const Eigen::Vector4d& y) {
  const double xx = x.dot(c.g * x), yy = y.dot(c.g * y), xy = x.dot(c.g * y);
  const double den = xx * yy - xy * xy;
  if (den < kGramTol) throw DegeneratePlaneError("sectional: degenerate span");
  return sec_numerator(c, x, y) / den;
}

inline double sectional(const CurvatureAt& c, const Frame42& frame) {
  return sectional(c, frame.col(0), frame.col(1));
}

// Full contraction R(X,Y,Z,W); used for the isotropic cross term.
inline double riemann_4form(const CurvatureAt& c, const Eigen::Vector4d& x,
                            const Eigen::Vector4d& y, const Eigen::Vector4d& z,
                            const Eigen::Vector4d& w) {
  const auto a = wedge(x, y);
  const auto b = wedge(z, w);
  double s = 0.0;
  for (int i = 0; i < 6; ++i)
    for (int j = 0; j < 6; ++j)
      s += c.R[kWedgePairs[i][0]][kWedgePairs[i][1]][kWedgePairs[j][0]][kWedgePairs[j][1]] *
           a[i] * b[j];
  return s;
}

inline std::pair<Eigen::Matrix4d, double> ricci_and_scalar(const CurvatureAt& c) {
  Eigen::Matrix4d ric = Eigen::Matrix4d::Zero();
  for (int j = 0; j < 4; ++j)
    for (int k = 0; k < 4; ++k) {
      double s = 0.0;
      for (int i = 0; i < 4; ++i)
        for (int l = 0; l < 4; ++l) s += c.g_inv(i, l) * c.R[i][j][k][l];
      ric(j, k) = s;
    }
  double scal = 0.0;
  for (int j = 0; j < 4; ++j)
    for (int k = 0; k < 4; ++k) scal += c.g_inv(j, k) * ric(j, k);
  return {ric, scal};
}

// Eigenvalues of Ric in a g-orthonormal frame (generalized problem Ric v = a g v).
inline Eigen::Vector4d ricci_eigenvalues(const CurvatureAt& c) {
  const auto [ric, scal] = ricci_and_scalar(c);
  (void)scal;
  Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::Matrix4d> es(ric, c.g,
                                                               Eigen::EigenvaluesOnly);
  return es.eigenvalues();
}

// ---------------------------------------------------------------------------
// Isotropic curvature: K(e) = R1313 + R1414 + R2323 + R2424 - 2 R1234 over
// g-orthonormal 4-frames e.  Frame search is witness-finding, not certified
// global optimization.

inline double isotropic_of_frame(const CurvatureAt& c, const Eigen::Matrix4d& e) {
  const Eigen::Vector4d e1 = e.col(0), e2 = e.col(1), e3 = e.col(2), e4 = e.col(3);
  return sec_numerator(c, e1, e3) + sec_numerator(c, e1, e4) + sec_numerator(c, e2, e3) +
         sec_numerator(c, e2, e4) - 2.0 * riemann_4form(c, e1, e2, e3, e4);
}

// Gram-Schmidt in the g inner product; returns false on rank deficiency.
inline bool g_orthonormalize(const Eigen::Matrix4d& g, Eigen::Matrix4d& e) {
  for (int k = 0; k < 4; ++k) {
    Eigen::Vector4d v = e.col(k);
    for (int j = 0; j < k; ++j) v -= e.col(j).dot(g * v) * e.col(j);
    const double n2 = v.dot(g * v);
    if (n2 < kGramTol) return false;
    e.col(k) = v / std::sqrt(n2);
  }
  return true;
}

inline double isotropic_min(const CurvatureAt& c, int n_frames, int n_refine,
                            std::uint64_t seed) {
  Rng rng(seed);
  double best = std::numeric_limits<double>::infinity();
  Eigen::Matrix4d best_e = Eigen::Matrix4d::Identity();
  for (int it = 0; it < n_frames; ++it) {
    Eigen::Matrix4d e;
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j) e(i, j) = rng.gaussian();
    if (!g_orthonormalize(c.g, e)) continue;
    const double k = isotropic_of_frame(c, e);
    if (k < best) {
      best = k;
      best_e = e;
    }
  }
  // Coordinate descent over the six rotation planes of the frame.
  double step = 0.2;
  for (int it = 0; it < n_refine; ++it) {
    bool moved = false;
    for (int a = 0; a < 6; ++a) {
      const int i = kWedgePairs[a][0], j = kWedgePairs[a][1];
      for (const double sgn : {+1.0, -1.0}) {
        Eigen::Matrix4d e = best_e;
        const double cth = std::cos(sgn * step), sth = std::sin(sgn * step);
        const Eigen::Vector4d ci = e.col(i), cj = e.col(j);
        e.col(i) = cth * ci + sth * cj;
        e.col(j) = -sth * ci + cth * cj;
        const double k = isotropic_of_frame(c, e);
        if (k < best) {
          best = k;
          best_e = e;
          moved = true;
        }
      }
    }
    if (!moved) {
      step *= 0.5;
      if (step < 1e-7) break;
    }
  }
  return best;
}

// ---------------------------------------------------------------------------
// Covariant Hessian of a scalar given as a Jet2 (value/grad/hess in the
// chart):  Hess f (d_i, d_j) = d_i d_j f - Gamma^k_{ij} d_k f.

inline Eigen::Matrix4d hessian_scalar(const ChristoffelData& cd, const Jet2& f) {
  Eigen::Matrix4d h;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) {
      double s = f.hess(i, j);
      for (int k = 0; k < 4; ++k) s -= cd.gamma[k][i][j] * f.grad(k);
      h(i, j) = s;
    }
  return h;
}

// Second covariant derivative of a (0,2)-tensor with Jet2 components:
// returns (nabla_l nabla_k h)_{ij} indexed [l][k][i][j].
struct Nabla2Tensor {
  double v[4][4][4][4];
};

inline Nabla2Tensor second_covariant_derivative(const ChristoffelData& cd,
                                                const MetricJets& h) {
  double nh[4][4][4];   // (nabla_k h)_{ij}
  double dnh[4][4][4][4];  // d_l (nabla_k h)_{ij}
  for (int k = 0; k < 4; ++k)
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j) {
        double s = h[i][j].grad(k);
        for (int mm = 0; mm < 4; ++mm)
          s -= cd.gamma[mm][k][i] * h[mm][j].v + cd.gamma[mm][k][j] * h[i][mm].v;
        nh[k][i][j] = s;
        for (int l = 0; l < 4; ++l) {
          double d = h[i][j].hess(l, k);
          for (int mm = 0; mm < 4; ++mm)
            d -= cd.dgamma[l][mm][k][i] * h[mm][j].v + cd.gamma[mm][k][i] * h[mm][j].grad(l) +
                 cd.dgamma[l][mm][k][j] * h[i][mm].v + cd.gamma[mm][k][j] * h[i][mm].grad(l);
          dnh[l][k][i][j] = d;
        }
      }
  Nabla2Tensor out;
  for (int l = 0; l < 4; ++l)
    for (int k = 0; k < 4; ++k)
      for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) {
          double s = dnh[l][k][i][j];
          for (int mm = 0; mm < 4; ++mm)
            s -= cd.gamma[mm][l][k] * nh[mm][i][j] + cd.gamma[mm][l][i] * nh[k][mm][j] +
                 cd.gamma[mm][l][j] * nh[k][i][mm];
          out.v[l][k][i][j] = s;
        }
  return out;
}

// (nabla_A nabla_B h)(Z, W) from the precomputed tensor.
inline double nabla2_eval(const Nabla2Tensor& n2, const Eigen::Vector4d& a,
                          const Eigen::Vector4d& b, const Eigen::Vector4d& z,
                          const Eigen::Vector4d& w) {
  double s = 0.0;
  for (int l = 0; l < 4; ++l)
    for (int k = 0; k < 4; ++k)
      for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) s += n2.v[l][k][i][j] * a(l) * b(k) * z(i) * w(j);
  return s;
}

}  // namespace biorth
