// Searches over the Grassmannian fibers: plane sampling, multistart descent
// for minimum sectional curvature, the theta-constrained quantities sec^theta
// and the pairwise minimum over K_theta, flat-locus classification, and the
// theta_g constant.  Witness-finding, not certified global optimization;
// budgets and seeds make every run reproducible.

#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <optional>
#include <vector>

#include "biorth/cheeger.hpp"
#include "biorth/fast_fiber.hpp"
#include "biorth/metric.hpp"
#include "biorth/plane.hpp"
#include "biorth/util.hpp"

namespace biorth {

struct SearchBudget {
  int n_samples = 4096;
  int n_refine = 200;
  int n_starts = 8;
};

// One evaluation site with everything the plane searches need.
struct PointContext {
  ChartId chart;
  Vec4d u{};
  CurvatureAt curv;
  Eigen::Matrix4d G;
};

inline PointContext make_context(const MetricSpec& spec, const PointPair& p) {
  PointContext ctx;
  ctx.chart = select_chart(p);
  ctx.u = point_to_chart(p, ctx.chart);
  ctx.curv = riemann(spec, ctx.chart, ctx.u);
  ctx.G = ctx.curv.g;
  return ctx;
}

template <class F>
PointContext make_context_from_field(F&& field, const ChartId& chart, const Vec4d& u) {
  PointContext ctx;
  ctx.chart = chart;
  ctx.u = u;
  ctx.curv = riemann_at(field, u);
  ctx.G = ctx.curv.g;
  return ctx;
}

// Transversal through the orbits of the diagonal action: alpha is the angle
// between the factors, 0 on the diagonal, pi on the anti-diagonal.
inline PointPair transversal_point(double alpha) {
  const double h = 0.5 * alpha;
  return {{std::sin(h), 0.0, std::cos(h)}, {-std::sin(h), 0.0, std::cos(h)}};
}

inline std::vector<Plane> sample_planes(const PointContext& ctx, int n, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<Plane> out;
  out.reserve(static_cast<std::size_t>(n));
  while (static_cast<int>(out.size()) < n) {
    Frame42 raw;
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 2; ++j) raw(i, j) = rng.gaussian();
    try {
      out.push_back(orthonormalize(raw, ctx.G, ctx.chart, ctx.u));
    } catch (const DegeneratePlaneError&) {
      // resample; the stream stays deterministic
    }
  }
  return out;
}

// Tilt the spanning vectors toward a (precomputed) orthogonal complement;
// the four parameters are a local chart of Gr_2(4) around the plane.
inline Plane perturb_with(const Plane& p, const Plane& comp, const std::array<double, 4>& a) {
  Frame42 raw;
  raw.col(0) = p.frame.col(0) + a[0] * comp.frame.col(0) + a[1] * comp.frame.col(1);
  raw.col(1) = p.frame.col(1) + a[2] * comp.frame.col(0) + a[3] * comp.frame.col(1);
  return orthonormalize(raw, p.G, p.chart, p.u);
}

inline Plane perturb_plane(const Plane& p, const std::array<double, 4>& a) {
  return perturb_with(p, orth_complement(p), a);
}

namespace detail {

using Q = FastFiber::Q;

// Gradient descent with Armijo backtracking in the local plane chart,
// followed by a shrinking compass polish that nails flat minima to ~1e-12.
// Operates on whitened frames; the objective sees whitened frames too.
template <class Obj>
std::pair<Q, double> descend_q(const Obj& value, Q q, int n_iters) {
  const double fd_step = 1e-4;
  double v = value(q);
  for (int it = 0; it < n_iters; ++it) {
    const Q comp = FastFiber::complement(q);
    std::array<double, 4> grad{};
    double gnorm = 0.0;
    for (int k = 0; k < 4; ++k) {
      std::array<double, 4> e{};
      e[k] = fd_step;
      const double vp = value(FastFiber::perturb(q, comp, e));
      e[k] = -fd_step;
      const double vm = value(FastFiber::perturb(q, comp, e));
      grad[k] = (vp - vm) / (2.0 * fd_step);
      gnorm += grad[k] * grad[k];
    }
    gnorm = std::sqrt(gnorm);
    if (gnorm < 1e-13) break;
    double step = std::min(0.5, 0.5 / gnorm);
    bool moved = false;
    for (int bt = 0; bt < 40; ++bt) {
      std::array<double, 4> d{};
      for (int k = 0; k < 4; ++k) d[k] = -step * grad[k];
      const Q p = FastFiber::perturb(q, comp, d);
      const double vq = value(p);
      if (vq < v - 1e-4 * step * gnorm * gnorm) {
        q = p;
        v = vq;
        moved = true;
        break;
      }
      step *= 0.5;
    }
    if (!moved) break;
  }
  double radius = 1e-3;
  while (radius > 1e-10) {
    const Q comp = FastFiber::complement(q);
    bool moved = false;
    for (int k = 0; k < 4; ++k)
      for (const double sgn : {+1.0, -1.0}) {
        std::array<double, 4> e{};
        e[k] = sgn * radius;
        const Q p = FastFiber::perturb(q, comp, e);
        const double vq = value(p);
        if (vq < v) {
          q = p;
          v = vq;
          moved = true;
        }
      }
    if (!moved) radius *= 0.5;
  }
  return {q, v};
}

}  // namespace detail

struct LocalMinimum {
  Plane plane;
  double value = 0.0;
};

// All multistart descent results, best first.
inline std::vector<LocalMinimum> multistart_minima(const PointContext& ctx,
                                                   const SearchBudget& budget,
                                                   std::uint64_t seed) {
  const FastFiber ff(ctx.G, ctx.curv, ctx.chart, ctx.u);
  const auto samples = sample_planes(ctx, budget.n_samples, seed);
  std::vector<FastFiber::Q> qs(samples.size());
  std::vector<int> order(samples.size());
  std::vector<double> vals(samples.size());
  for (std::size_t i = 0; i < samples.size(); ++i) {
    qs[i] = ff.whiten(samples[i].frame);
    vals[i] = ff.sec(qs[i]);
    order[i] = static_cast<int>(i);
  }
  std::stable_sort(order.begin(), order.end(),
                   [&](int a, int b) { return vals[a] < vals[b]; });

  auto objective = [&](const FastFiber::Q& q) { return ff.sec(q); };
  const int n_starts = std::min<int>(budget.n_starts, static_cast<int>(samples.size()));
  auto results = parallel_map(n_starts, [&](int k) {
    auto [q, value] = detail::descend_q(objective, qs[order[k]], budget.n_refine);
    return LocalMinimum{ff.unwhiten(q), value};
  });
  std::stable_sort(results.begin(), results.end(),
                   [](const LocalMinimum& a, const LocalMinimum& b) { return a.value < b.value; });
  return results;
}

inline LocalMinimum min_sectional(const PointContext& ctx, const SearchBudget& budget,
                                  std::uint64_t seed) {
  return multistart_minima(ctx, budget, seed).front();
}

// ---------------------------------------------------------------------------
// Flat locus classification for the Cheeger metrics.

struct FlatLocus {
  std::vector<Plane> witnesses;   // distinct planes with |sec| below tol
  double second_best = 0.0;       // best local minimum away from the witnesses
};

inline constexpr double kFlatTol = 1e-7;
inline constexpr double kWitnessSeparation = 0.12;

inline FlatLocus flat_locus(const PointContext& ctx, const SearchBudget& budget,
                            std::uint64_t seed,
                            double separation = kWitnessSeparation) {
  SearchBudget b = budget;
  b.n_starts = std::max(budget.n_starts, 64);
  const auto results = multistart_minima(ctx, b, seed);
  FlatLocus out;
  out.second_best = std::numeric_limits<double>::infinity();
  for (const auto& r : results) {
    if (r.value < kFlatTol) {
      bool fresh = true;
      for (const auto& w : out.witnesses)
        if (grassmann_dist(w, r.plane) < separation) fresh = false;
      if (fresh) out.witnesses.push_back(r.plane);
    } else {
      out.second_best = std::min(out.second_best, r.value);
    }
  }
  return out;
}

// sigma_pi(x) as a chart-based plane of the given context.
inline Plane sigma_pi_plane(const PointContext& ctx, const PointPair& p, const Vec3d& x) {
  const auto amb = sigma_pi_frame(p, x);
  const Vec4d c0 = tangent_to_chart(ctx.chart, ctx.u, as_pair(amb[0]));
  const Vec4d c1 = tangent_to_chart(ctx.chart, ctx.u, as_pair(amb[1]));
  Frame42 f;
  f << c0[0], c1[0], c0[1], c1[1], c0[2], c1[2], c0[3], c1[3];
  return orthonormalize(f, ctx.G, ctx.chart, ctx.u);
}

// Distance from a plane to the set {sigma_pi(x) : x in {p1,p2}^perp}.
// Regular points have a single candidate; on the singular orbits the family
// is a circle, scanned on a grid and sharpened by ternary search.
inline double dist_to_sigma_pi_family(const PointContext& ctx, const PointPair& p,
                                      const Plane& plane) {
  const auto axes = biperp_axes(p);
  if (axes.size() == 1) return grassmann_dist(plane, sigma_pi_plane(ctx, p, axes[0]));

  auto at = [&](double gamma) {
    const Vec3d x = std::cos(gamma) * axes[0] + std::sin(gamma) * axes[1];
    return grassmann_dist(plane, sigma_pi_plane(ctx, p, x));
  };
  const int n = 64;
  double best = std::numeric_limits<double>::infinity(), best_gamma = 0.0;
  for (int k = 0; k < n; ++k) {
    const double gamma = M_PI * k / n;  // the family is pi-periodic in x
    const double d = at(gamma);
    if (d < best) {
      best = d;
      best_gamma = gamma;
    }
  }
  double lo = best_gamma - M_PI / n, hi = best_gamma + M_PI / n;
  for (int it = 0; it < 60; ++it) {
    const double m1 = lo + (hi - lo) / 3.0, m2 = hi - (hi - lo) / 3.0;
    if (at(m1) < at(m2)) hi = m2; else lo = m1;
  }
  return std::min(best, at(0.5 * (lo + hi)));
}

// ---------------------------------------------------------------------------
// Constrained quantities.

// Push q to distance exactly theta from p, along the geodesic through q
// while the scaled angles stay below pi/2, capping the big angle there and
// growing the small one otherwise (the sphere of radius theta <= pi/sqrt2
// is always reachable this way).
inline Plane project_to_sphere(const Plane& p, const Plane& q, double theta) {
  auto th = detail::principal_angles(p.frame, q.frame, p.G);  // ascending
  double d = std::hypot(th[0], th[1]);
  const Plane* dir = &q;
  Plane comp{};
  if (d < 1e-8) {
    comp = orth_complement(p);  // no direction defined; any maximal one works
    dir = &comp;
    th = {M_PI / 2.0, M_PI / 2.0};
    d = kMaxPlaneDist;
  }
  const double tau = theta / d;
  std::array<double, 2> phi{tau * th[0], tau * th[1]};
  if (phi[1] > M_PI / 2.0) {
    phi[1] = M_PI / 2.0;
    phi[0] = std::sqrt(std::max(0.0, theta * theta - phi[1] * phi[1]));
  }
  return plane_at_angles(p, *dir, phi);
}

// sec^theta(sigma): minimum of (sec sigma + sec sigma')/2 over planes at
// distance >= theta from sigma.  Active-set style: unconstrained minimum if
// feasible, otherwise projected descent on the distance sphere.
inline double sec_theta(const PointContext& ctx, const Plane& sigma, double theta,
                        const SearchBudget& budget, std::uint64_t seed) {
  if (!(theta > 0.0) || theta > kMaxPlaneDist + 1e-12)
    throw std::invalid_argument("sec_theta: theta outside (0, pi/sqrt(2)]");
  const FastFiber ff(ctx.G, ctx.curv, ctx.chart, ctx.u);
  const FastFiber::Q qsig = ff.whiten(sigma.frame);
  const double base = ff.sec(qsig);

  auto objective = [&](const FastFiber::Q& q) {
    const double d = FastFiber::dist(qsig, q);
    return ff.sec(d >= theta ? q : FastFiber::project_to_sphere(qsig, q, theta));
  };

  auto samples = sample_planes(ctx, budget.n_samples, seed);
  samples.push_back(orth_complement(sigma));  // always feasible
  std::vector<FastFiber::Q> qs(samples.size());
  std::vector<std::pair<double, int>> ranked;
  ranked.reserve(samples.size());
  for (std::size_t i = 0; i < samples.size(); ++i) {
    FastFiber::Q q = ff.whiten(samples[i].frame);
    if (FastFiber::dist(qsig, q) < theta) q = FastFiber::project_to_sphere(qsig, q, theta);
    qs[i] = q;
    ranked.emplace_back(ff.sec(q), static_cast<int>(i));
  }
  std::stable_sort(ranked.begin(), ranked.end());

  const int n_starts = std::min<int>(budget.n_starts, static_cast<int>(ranked.size()));
  auto results = parallel_map(n_starts, [&](int k) {
    auto [q, value] = detail::descend_q(objective, qs[ranked[k].second], budget.n_refine);
    (void)q;
    return value;
  });
  const double best = *std::min_element(results.begin(), results.end());
  return 0.5 * (base + best);
}

struct PairSample {
  double alpha = 0.0;  // transversal parameter of the base point
  PointPair point{};
  Plane sigma1, sigma2;
  double dist = 0.0;
  double avg_sec = 0.0;
};

// Minimum of (sec s1 + sec s2)/2 over plane pairs at one point with
// dist(s1, s2) >= theta.
inline std::pair<Plane, Plane> pair_min_at_point(const PointContext& ctx, double theta,
                                                 const SearchBudget& budget, std::uint64_t seed,
                                                 double* out_value) {
  using Q = FastFiber::Q;
  const FastFiber ff(ctx.G, ctx.curv, ctx.chart, ctx.u);
  auto repair = [&](const Q& a, const Q& b) {
    return (FastFiber::dist(a, b) >= theta - 1e-12) ? b
                                                    : FastFiber::project_to_sphere(a, b, theta);
  };
  auto value_of_pair = [&](const Q& a, const Q& b) { return 0.5 * (ff.sec(a) + ff.sec(b)); };

  const auto samples = sample_planes(ctx, budget.n_samples, seed);
  const int n = static_cast<int>(samples.size());
  std::vector<Q> qs(samples.size());
  for (std::size_t i = 0; i < samples.size(); ++i) qs[i] = ff.whiten(samples[i].frame);

  Rng rng(Rng::derive(seed, 0xabc));
  std::vector<std::pair<Q, Q>> cand;
  std::vector<std::pair<double, int>> ranked;
  cand.reserve(samples.size());
  for (int k = 0; k < n; ++k) {
    const int i = static_cast<int>(rng.raw() % static_cast<std::uint64_t>(n));
    const int j = static_cast<int>(rng.raw() % static_cast<std::uint64_t>(n));
    const Q a = qs[i];
    const Q b = repair(a, qs[j]);
    ranked.emplace_back(value_of_pair(a, b), static_cast<int>(cand.size()));
    cand.emplace_back(a, b);
  }
  std::stable_sort(ranked.begin(), ranked.end(),
                   [](const auto& a, const auto& b) { return a.first < b.first; });

  // Joint descent over 8 parameters with feasibility repair on the second
  // plane after every trial step, then a compass polish.
  auto refine = [&](std::pair<Q, Q> pq) {
    Q a = pq.first, b = pq.second;
    double v = value_of_pair(a, b);
    const double fd = 1e-4;
    for (int it = 0; it < budget.n_refine; ++it) {
      const Q ca = FastFiber::complement(a);
      const Q cb = FastFiber::complement(b);
      std::array<double, 8> grad{};
      double gnorm = 0.0;
      for (int k = 0; k < 8; ++k) {
        std::array<double, 4> e{};
        e[k % 4] = fd;
        Q ap = a, bp = b;
        if (k < 4) ap = FastFiber::perturb(a, ca, e); else bp = FastFiber::perturb(b, cb, e);
        bp = repair(ap, bp);
        const double vp = value_of_pair(ap, bp);
        e[k % 4] = -fd;
        Q am = a, bm = b;
        if (k < 4) am = FastFiber::perturb(a, ca, e); else bm = FastFiber::perturb(b, cb, e);
        bm = repair(am, bm);
        const double vm = value_of_pair(am, bm);
        grad[k] = (vp - vm) / (2.0 * fd);
        gnorm += grad[k] * grad[k];
      }
      gnorm = std::sqrt(gnorm);
      if (gnorm < 1e-13) break;
      double step = std::min(0.5, 0.5 / gnorm);
      bool moved = false;
      for (int bt = 0; bt < 40; ++bt) {
        std::array<double, 4> da{}, db{};
        for (int k = 0; k < 4; ++k) {
          da[k] = -step * grad[k];
          db[k] = -step * grad[k + 4];
        }
        const Q an = FastFiber::perturb(a, ca, da);
        const Q bn = repair(an, FastFiber::perturb(b, cb, db));
        const double vn = value_of_pair(an, bn);
        if (vn < v - 1e-4 * step * gnorm * gnorm) {
          a = an;
          b = bn;
          v = vn;
          moved = true;
          break;
        }
        step *= 0.5;
      }
      if (!moved) break;
    }
    double radius = 1e-3;
    while (radius > 1e-10) {
      const Q ca = FastFiber::complement(a);
      const Q cb = FastFiber::complement(b);
      bool moved = false;
      for (int k = 0; k < 8; ++k)
        for (const double sgn : {+1.0, -1.0}) {
          std::array<double, 4> e{};
          e[k % 4] = sgn * radius;
          Q an = a, bn = b;
          if (k < 4) an = FastFiber::perturb(a, ca, e);
          else bn = FastFiber::perturb(b, cb, e);
          bn = repair(an, bn);
          const double vn = value_of_pair(an, bn);
          if (vn < v) {
            a = an;
            b = bn;
            v = vn;
            moved = true;
          }
        }
      if (!moved) radius *= 0.5;
    }
    return std::make_tuple(a, b, v);
  };

  const int n_starts = std::min<int>(budget.n_starts, static_cast<int>(ranked.size()));
  auto refined = parallel_map(n_starts, [&](int k) {
    return refine(cand[static_cast<std::size_t>(ranked[k].second)]);
  });
  int best = 0;
  for (int k = 1; k < n_starts; ++k)
    if (std::get<2>(refined[k]) < std::get<2>(refined[best])) best = k;
  *out_value = std::get<2>(refined[best]);
  return {ff.unwhiten(std::get<0>(refined[best])), ff.unwhiten(std::get<1>(refined[best]))};
}

template <class SpecLike>
std::optional<PairSample> pair_min_over_ktheta(const SpecLike& spec, double theta,
                                               int n_transversal, const SearchBudget& budget,
                                               std::uint64_t seed) {
  if (theta > kMaxPlaneDist + 1e-9) return std::nullopt;
  auto per_point = parallel_map(n_transversal, [&](int k) {
    const double alpha = M_PI * k / std::max(1, n_transversal - 1);
    const PointPair p = transversal_point(alpha);
    const PointContext ctx = make_context(spec, p);
    double value = 0.0;
    auto [a, b] = pair_min_at_point(ctx, theta, budget, Rng::derive(seed, k), &value);
    PairSample s;
    s.alpha = alpha;
    s.point = p;
    s.sigma1 = a;
    s.sigma2 = b;
    s.dist = grassmann_dist(a, b);
    s.avg_sec = value;
    return s;
  });
  int best = 0;
  for (int k = 1; k < n_transversal; ++k)
    if (per_point[k].avg_sec < per_point[best].avg_sec) best = k;
  return per_point[best];
}

// theta_g: the inner minimum of dist(span{v,w1}, span{v,w2}) over
// g-orthonormal triples is pi/2 identically for the adapted distance.
struct ThetaGResult {
  double value = 0.0;
  double spread = 0.0;  // max - min over the sampled triples
};

inline ThetaGResult theta_g(const MetricSpec& spec, int n_points, int n_triples,
                            std::uint64_t seed) {
  auto per_point = parallel_map(n_points, [&](int k) {
    const double alpha = M_PI * (k + 0.5) / n_points;
    const PointContext ctx = make_context(spec, transversal_point(alpha));
    Rng rng(Rng::derive(seed, 100 + k));
    double lo = std::numeric_limits<double>::infinity(), hi = 0.0;
    for (int t = 0; t < n_triples; ++t) {
      Eigen::Matrix4d e;
      for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) e(i, j) = rng.gaussian();
      if (!g_orthonormalize(ctx.G, e)) { --t; continue; }
      Frame42 f1, f2;
      f1.col(0) = e.col(0); f1.col(1) = e.col(1);
      f2.col(0) = e.col(0); f2.col(1) = e.col(2);
      const Plane p1{f1, ctx.chart, ctx.u, ctx.G};
      const Plane p2{f2, ctx.chart, ctx.u, ctx.G};
      const double d = grassmann_dist(p1, p2);
      lo = std::min(lo, d);
      hi = std::max(hi, d);
    }
    return std::make_pair(lo, hi);
  });
  double lo = std::numeric_limits<double>::infinity(), hi = 0.0;
  for (const auto& [a, b] : per_point) {
    lo = std::min(lo, a);
    hi = std::max(hi, b);
  }
  return {lo, hi - lo};
}

}  // namespace biorth
