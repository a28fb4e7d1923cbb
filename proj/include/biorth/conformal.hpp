// The local conformal factor phi supported in tubes around the diagonal
// and anti-diagonal, and the scalar pieces it is built from.
//
// With alpha = arccos<p1,p2>, the g_t-distances to the singular orbits are
//   d+ = alpha / sqrt(2),   d- = (pi - alpha) / sqrt(2)
// for every t >= 0 (the minimizing geodesic is horizontal and Cheeger
// deformation preserves horizontal lengths; validated against a geodesic
// shooting oracle in the tests).  The squared distances are
//   psi+- = d+-^2 = arccos(+-c)^2 / 2,  c = <p1,p2>,
// and      phi   = -chi(d+) psi+  -  chi(d-) psi-
// with chi a smooth bump profile equal to 1 for d <= r_in and 0 for
// d >= r_out.

#pragma once

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "biorth/geometry.hpp"
#include "biorth/jet.hpp"

namespace biorth {

inline double apply_univariate(double, double f0, double, double) { return f0; }
inline Jet2 apply_univariate(const Jet2& a, double f0, double f1, double f2) {
  return compose(a, f0, f1, f2);
}

// arccos(c)^2, smooth through c = 1.  Near c = 1 the direct formula loses
// its derivatives (arccos has a square-root singularity), so we switch to
// the series in w = 1 - c,
//   arccos(1-w)^2 = 2 sum_{n>=1} (2w)^n / (n^2 binom(2n,n))
//                 = 2w + w^2/3 + 4w^3/45 + w^4/35 + ...
// truncated after n = 8 (error < 1e-24 for w <= 1e-3).  Not valid near
// c = -1, where arccos^2 genuinely fails to be smooth.
template <class T>
T acos_sq(const T& c) {
  const double cv = value_of(c);
  if (cv < -(1.0 - 1e-3))
    throw std::domain_error("acos_sq: not smooth near c = -1");
  if (cv > 1.0 - 1e-3) {
    const T w = 1.0 - c;
    constexpr double k5 = 16.0 / 1575.0, k6 = 8.0 / 2079.0, k7 = 32.0 / 21021.0,
                     k8 = 4.0 / 6435.0;
    T s = k8 * w + k7;
    s = s * w + k6;
    s = s * w + k5;
    s = s * w + 1.0 / 35.0;
    s = s * w + 4.0 / 45.0;
    s = s * w + 1.0 / 3.0;
    s = s * w + 2.0;
    return s * w;
  }
  const double alpha = std::acos(cv);
  const double q = 1.0 - cv * cv;
  const double f1 = -2.0 * alpha / std::sqrt(q);
  const double f2 = 2.0 / q - 2.0 * alpha * cv / (q * std::sqrt(q));
  return apply_univariate(c, alpha * alpha, f1, f2);
}

// Squared distance to the diagonal (plus) / anti-diagonal (minus).
template <class T>
T psi_plus(const PointPairT<T>& p) { return acos_sq(dot(p.p1, p.p2)) * 0.5; }
template <class T>
T psi_minus(const PointPairT<T>& p) { return acos_sq(-dot(p.p1, p.p2)) * 0.5; }

enum class DiagonalSide { plus, minus };

inline double dist_to_diagonal(const PointPair& p, DiagonalSide which) {
  const double c = std::clamp(dot(p.p1, p.p2), -1.0, 1.0);
  const double alpha = std::acos(c);
  const double a = (which == DiagonalSide::plus) ? alpha : M_PI - alpha;
  return a / std::sqrt(2.0);
}

// Smooth step S(x) = sigma(x) / (sigma(x) + sigma(1-x)), sigma = exp(-1/x);
// only evaluated for 0 < x < 1 (the flat tails are handled by branching).
template <class T>
T smoothstep01(const T& x) {
  using std::exp;
  const T sa = exp(-1.0 * inverse(x));
  const T sb = exp(-1.0 * inverse(1.0 - x));
  return sa * inverse(sa + sb);
}

// One tube's contribution -chi(d) * psi evaluated from the squared
// distance; branches follow the (exactly flat) pieces of the bump.
template <class T>
T tube_term(const T& psi, double dval, double r_in, double r_out) {
  using std::sqrt;
  if (dval >= r_out) return T{};
  if (dval <= r_in) return -1.0 * psi;
  const T d = sqrt(psi);
  const T x = (r_out - d) * (1.0 / (r_out - r_in));
  return -1.0 * (smoothstep01(x) * psi);
}

// phi = -(chi+ psi+) - (chi- psi-).  Nonpositive, equal to -psi+- inside
// the inner tubes, identically zero outside g-radius r_out.
template <class T>
T conformal_factor_at(const PointPairT<T>& p, double r_in, double r_out) {
  const T c = dot(p.p1, p.p2);
  const double cv = std::clamp(value_of(c), -1.0, 1.0);
  const double alpha = std::acos(cv);
  const double dplus = alpha / std::sqrt(2.0);
  const double dminus = (M_PI - alpha) / std::sqrt(2.0);
  T out{};
  if (dplus < r_out) out += tube_term(acos_sq(c) * 0.5, dplus, r_in, r_out);
  if (dminus < r_out) out += tube_term(acos_sq(-c) * 0.5, dminus, r_in, r_out);
  return out;
}

inline double conformal_factor(const PointPair& p, double r_in, double r_out) {
  return conformal_factor_at<double>({p.p1, p.p2}, r_in, r_out);
}

}  // namespace biorth
