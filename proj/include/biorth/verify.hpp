// Proposition-level verification suites.  Each driver runs the relevant
// module operations against the configured tolerances and returns a Report;
// numeric failures become failing checks, not crashes.  All randomness is
// seeded from the config.

#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>

#include "biorth/config.hpp"
#include "biorth/optimize.hpp"
#include "biorth/quotient.hpp"
#include "biorth/report.hpp"
#include "biorth/torus.hpp"
#include "biorth/variation.hpp"

namespace biorth {

namespace detail {

inline PointPair random_point_pair(Rng& rng, double min_alpha = 0.0) {
  for (;;) {
    Vec3d a{rng.gaussian(), rng.gaussian(), rng.gaussian()};
    Vec3d b{rng.gaussian(), rng.gaussian(), rng.gaussian()};
    if (norm(a) < 1e-6 || norm(b) < 1e-6) continue;
    const PointPair p{normalized(a), normalized(b)};
    if (min_alpha == 0.0 || std::abs(dot(p.p1, p.p2)) < std::cos(min_alpha)) return p;
  }
}

inline Vec3d random_tangent(Rng& rng, const Vec3d& p) {
  for (;;) {
    Vec3d v{rng.gaussian(), rng.gaussian(), rng.gaussian()};
    v = v - p * dot(v, p);
    if (norm(v) > 1e-6) return v;
  }
}

inline Vec3d random_unit(Rng& rng) {
  for (;;) {
    Vec3d v{rng.gaussian(), rng.gaussian(), rng.gaussian()};
    if (norm(v) > 1e-6) return normalized(v);
  }
}

// Largest g0-normal component of a plane at a diagonal or anti-diagonal
// point; zero iff the plane is tangent to +-Delta.
inline double delta_normal_component(const PointContext& ctx, const PointPair& p,
                                     const Plane& plane, double sign) {
  Eigen::Matrix<double, 6, 2> amb;
  for (int k = 0; k < 2; ++k) {
    Vec4d comp{plane.frame(0, k), plane.frame(1, k), plane.frame(2, k), plane.frame(3, k)};
    const TangentPair v = chart_to_tangent(ctx.chart, ctx.u, comp);
    amb.col(k) << v.v1.x, v.v1.y, v.v1.z, v.v2.x, v.v2.y, v.v2.z;
    amb.col(k).normalize();
  }
  // Normal space of +Delta at (p,p) is {(w, -w)}; of -Delta is {(w, w)}.
  Eigen::Matrix<double, 2, 2> proj_gram = Eigen::Matrix2d::Zero();
  for (int k = 0; k < 2; ++k)
    for (int l = 0; l < 2; ++l) {
      const Vec3d ak{amb(0, k), amb(1, k), amb(2, k)};
      const Vec3d bk{amb(3, k), amb(4, k), amb(5, k)};
      const Vec3d al{amb(0, l), amb(1, l), amb(2, l)};
      const Vec3d bl{amb(3, l), amb(4, l), amb(5, l)};
      const Vec3d nk = 0.5 * (ak - sign * bk);  // normal part, factor-1 leg
      const Vec3d nl = 0.5 * (al - sign * bl);
      proj_gram(k, l) = 2.0 * dot(nk, nl);
    }
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> es(proj_gram, Eigen::EigenvaluesOnly);
  return std::sqrt(std::max(0.0, es.eigenvalues().maxCoeff()));
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Flat locus of the Cheeger metrics.

inline void check_geomcheeger(Report& rep, const RunConfig& cfg) {
  const MetricSpec spec = MetricSpec::cheeger(cfg.metric.t > 0 ? cfg.metric.t : 1.0);

  // Sampled minimum over transversal points x planes.
  const auto mins = parallel_map(cfg.transversal_points, [&](int k) {
    const double alpha = M_PI * k / std::max(1, cfg.transversal_points - 1);
    const PointContext ctx = make_context(spec, transversal_point(alpha));
    double lo = std::numeric_limits<double>::infinity();
    for (const auto& pl : sample_planes(ctx, cfg.plane_samples, Rng::derive(cfg.seed, k)))
      lo = std::min(lo, sec_of(ctx.curv, pl));
    return lo;
  });
  rep.add("sampled_min_sec", *std::min_element(mins.begin(), mins.end()), cfg.tol_sample_min,
          *std::min_element(mins.begin(), mins.end()) >= -cfg.tol_sample_min);

  // Circle family at the singular orbits.
  SearchBudget budget{cfg.plane_samples, cfg.refine_steps, cfg.optimizer_starts};
  int min_witnesses = 1 << 20;
  double worst_match = 0.0, worst_pairwise = 1e9, worst_normal = 1e9;
  for (const double alpha : {0.0, M_PI}) {
    const PointPair p = transversal_point(alpha);
    const PointContext ctx = make_context(spec, p);
    const FlatLocus fl = flat_locus(ctx, budget, Rng::derive(cfg.seed, alpha == 0.0 ? 101 : 102));
    min_witnesses = std::min(min_witnesses, static_cast<int>(fl.witnesses.size()));
    for (std::size_t i = 0; i < fl.witnesses.size(); ++i) {
      worst_match = std::max(worst_match, dist_to_sigma_pi_family(ctx, p, fl.witnesses[i]));
      worst_normal = std::min(worst_normal,
                              detail::delta_normal_component(ctx, p, fl.witnesses[i],
                                                             alpha == 0.0 ? 1.0 : -1.0));
      for (std::size_t j = i + 1; j < fl.witnesses.size(); ++j)
        worst_pairwise = std::min(worst_pairwise,
                                  grassmann_dist(fl.witnesses[i], fl.witnesses[j]));
    }
  }
  rep.add("singular_family_size", min_witnesses, 8, min_witnesses >= 8);
  rep.add("singular_family_spread", worst_pairwise, 0.1, worst_pairwise > 0.1);
  rep.add("singular_family_matches_sigma_pi", worst_match, cfg.tol_family_match,
          worst_match < cfg.tol_family_match);
  rep.add("singular_witness_normal_component", worst_normal, cfg.tol_normal_component,
          worst_normal > cfg.tol_normal_component);

  // Unique flat plane at regular points.
  Rng rng(Rng::derive(cfg.seed, 7));
  int max_witnesses = 0;
  double min_second = 1e9, worst_regular_match = 0.0;
  for (int k = 0; k < cfg.regular_points; ++k) {
    const PointPair p = detail::random_point_pair(rng, 0.35);
    const PointContext ctx = make_context(spec, p);
    const FlatLocus fl = flat_locus(ctx, budget, Rng::derive(cfg.seed, 200 + k));
    max_witnesses = std::max(max_witnesses, static_cast<int>(fl.witnesses.size()));
    min_second = std::min(min_second, fl.second_best);
    for (const auto& w : fl.witnesses)
      worst_regular_match = std::max(worst_regular_match, dist_to_sigma_pi_family(ctx, p, w));
  }
  rep.add("regular_unique_witness", max_witnesses, 1, max_witnesses == 1);
  rep.add("regular_second_minimum", min_second, cfg.tol_second_min,
          min_second > cfg.tol_second_min,
          std::isfinite(min_second) ? "" : "every start converged to the unique flat plane");
  rep.add("regular_witness_matches_sigma_pi", worst_regular_match, cfg.tol_family_match,
          worst_regular_match < cfg.tol_family_match);
}

// ---------------------------------------------------------------------------
// Cheeger reparametrization: the fixed mixed planes and the k_c evolution.

inline void check_kc(Report& rep, const RunConfig& cfg) {
  Rng rng(Rng::derive(cfg.seed, 11));
  const double t = cfg.metric.t > 0 ? cfg.metric.t : 1.0;

  double worst_fix = 0.0;
  double worst_sigma_kc = 0.0;
  const std::vector<double> grid{0.0, 0.1, 0.25, 0.5, 1.0, 1.5, 2.0};
  for (int k = 0; k < cfg.flat_plane_checks; ++k) {
    const PointPair p = detail::random_point_pair(rng, 0.3);
    const auto axes = biperp_axes(p);
    const auto sp = sigma_pi_frame(p, axes[0]);
    const std::array<TangentVec, 2> moved{ct_apply(t, p, sp[0]), ct_apply(t, p, sp[1])};
    worst_fix = std::max(worst_fix, ambient_span_distance(sp, moved));
    for (const double kc : kc_curve(p, sp[0], sp[1], grid))
      worst_sigma_kc = std::max(worst_sigma_kc, std::abs(kc));
  }
  rep.add("ct_fixes_sigma_pi", worst_fix, cfg.tol_span_fix, worst_fix < cfg.tol_span_fix);
  rep.add("kc_zero_on_sigma_pi", worst_sigma_kc, cfg.tol_kc_zero,
          worst_sigma_kc <= cfg.tol_kc_zero);

  // Bracket-nonzero flat planes gain curvature for t >= 0.1.
  double min_pos = 1e9;
  int made = 0;
  std::vector<PlotSeries> curves;
  while (made < cfg.flat_plane_checks) {
    const PointPair p = detail::random_point_pair(rng, 0.3);
    const Vec3d x1 = normalized(detail::random_tangent(rng, p.p1));
    const Vec3d y2 = normalized(detail::random_tangent(rng, p.p2));
    const TangentVec a{x1, {0, 0, 0}, p};
    const TangentVec b{{0, 0, 0}, y2, p};
    if (norm(kc_bracket(p, a, b)) < 1e-3) continue;
    const auto kc = kc_curve(p, a, b, grid);
    for (std::size_t i = 0; i < grid.size(); ++i)
      if (grid[i] >= 0.1) min_pos = std::min(min_pos, kc[i]);
    if (made < 4) {
      PlotSeries s;
      s.name = "k_c plane " + std::to_string(made);
      for (std::size_t i = 0; i < grid.size(); ++i) s.points.push_back({grid[i], kc[i]});
      curves.push_back(std::move(s));
    }
    ++made;
  }
  rep.add("kc_positive_bracket_nonzero", min_pos, cfg.tol_kc_pos, min_pos > cfg.tol_kc_pos);

  // FD slope at t = 0 is nonnegative.
  const double h = 1e-4;
  double min_slope = 1e9;
  for (int k = 0; k < cfg.fd_planes; ++k) {
    const PointPair p = detail::random_point_pair(rng, 0.3);
    const Vec3d x1 = normalized(detail::random_tangent(rng, p.p1));
    const Vec3d y2 = normalized(detail::random_tangent(rng, p.p2));
    const auto kc = kc_curve(p, {x1, {0, 0, 0}, p}, {{0, 0, 0}, y2, p}, {0.0, h});
    min_slope = std::min(min_slope, (kc[1] - kc[0]) / h);
  }
  rep.add("kc_fd_slope_at_zero", min_slope, cfg.tol_kc_slope, min_slope >= -cfg.tol_kc_slope);
  for (auto& c : curves) rep.plots.push_back(std::move(c));
}

// ---------------------------------------------------------------------------
// First variation of the sectional curvature at flat planes.

inline void check_first_variation(Report& rep, const RunConfig& cfg) {
  Rng rng(Rng::derive(cfg.seed, 13));
  const double t = cfg.metric.t > 0 ? cfg.metric.t : 1.0;
  const double r_in = cfg.metric.r_in, r_out = cfg.metric.r_out;
  const double h = 1e-4;

  double worst_fd = 0.0;
  for (int k = 0; k < cfg.flat_plane_checks; ++k) {
    const double alpha = (k % 4 == 0) ? 0.0 : rng.uniform(0.0, M_PI);
    const PointPair p = transversal_point(alpha);
    const auto axes = biperp_axes(p);
    const Vec3d x = axes.size() == 1
                        ? axes[0]
                        : normalized(std::cos(rng.uniform(0.0, M_PI)) * axes[0] +
                                     std::sin(rng.uniform(0.0, M_PI)) * axes[1]);
    const PointContext ctx = make_context(MetricSpec::cheeger(t), p);
    const ChartId chart = ctx.chart;
    const Vec4d u = ctx.u;
    const Plane pl = sigma_pi_plane(ctx, p, x);
    const double fv = first_variation_analytic(t, r_in, r_out, chart, u, pl.frame);
    auto sec_s = [&](double s) {
      return sectional(riemann(MetricSpec::deformed(t, s, r_in, r_out), chart, u), pl.frame);
    };
    const double fd = (sec_s(h) - sec_s(-h)) / (2.0 * h);
    worst_fd = std::max(worst_fd, std::abs(fv - fd));
  }
  rep.add("fv_matches_fd", worst_fd, cfg.tol_fv_fd, worst_fd <= cfg.tol_fv_fd);

  // Value at sigma_pi on the diagonal: |(X*, -X*)|^2_g = 1 on the
  // g-orthonormalized frame.
  double worst_value = 0.0;
  for (int k = 0; k < cfg.diagonal_points; ++k) {
    const Vec3d q = detail::random_unit(rng);
    const PointPair p{q, q};
    const PointContext ctx = make_context(MetricSpec::cheeger(t), p);
    const Plane pl = sigma_pi_plane(ctx, p, normalized(detail::random_tangent(rng, q)));
    const double fv = first_variation_analytic(t, r_in, r_out, ctx.chart, ctx.u, pl.frame);
    worst_value = std::max(worst_value, std::abs(fv - 1.0));
  }
  rep.add("fv_on_diagonal_equals_norm", worst_value, cfg.tol_fv_value,
          worst_value <= cfg.tol_fv_value);

  // Quadratic remainder exponent.
  double worst_exp = 0.0;
  int fitted = 0;
  for (int k = 0; k < cfg.flat_plane_checks && fitted < 10; ++k) {
    const double alpha = rng.uniform(0.05, 0.6);
    const PointPair p = transversal_point(alpha);
    const auto axes = biperp_axes(p);
    const PointContext ctx = make_context(MetricSpec::cheeger(t), p);
    const Plane pl = sigma_pi_plane(ctx, p, axes[0]);
    const double fv = first_variation_analytic(t, r_in, r_out, ctx.chart, ctx.u, pl.frame);
    const double svals[3] = {1e-2, 5e-3, 2.5e-3};
    double r[3];
    for (int i = 0; i < 3; ++i)
      r[i] = std::abs(
          sectional(riemann(MetricSpec::deformed(t, svals[i], r_in, r_out), ctx.chart, ctx.u),
                    pl.frame) - svals[i] * fv);
    if (r[0] < 1e-10) continue;
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (int i = 0; i < 3; ++i) {
      const double lx = std::log(svals[i]), ly = std::log(r[i]);
      sx += lx; sy += ly; sxx += lx * lx; sxy += lx * ly;
    }
    const double slope = (3 * sxy - sx * sy) / (3 * sxx - sx * sx);
    worst_exp = std::max(worst_exp, std::abs(slope - 2.0));
    ++fitted;
  }
  rep.add("quadratic_remainder_exponent_dev", worst_exp, cfg.tol_exponent,
          fitted > 0 && worst_exp <= cfg.tol_exponent);
}

// ---------------------------------------------------------------------------
// Hessian of the squared distance function on the diagonal.

inline void check_hess(Report& rep, const RunConfig& cfg) {
  Rng rng(Rng::derive(cfg.seed, 17));
  const double t = cfg.metric.t > 0 ? cfg.metric.t : 1.0;
  const MetricSpec spec = MetricSpec::cheeger(t);
  double worst_normal = 0.0, worst_tangent = 0.0;
  for (int k = 0; k < cfg.diagonal_points; ++k) {
    const Vec3d q = detail::random_unit(rng);
    const PointPair p{q, q};
    const ChartId chart = select_chart(p);
    const Vec4d u = point_to_chart(p, chart);
    const ChristoffelData cd = christoffel_from_jets(metric_component_jets(spec, chart, u));
    const Eigen::Matrix4d hess = hessian_scalar(cd, psi_plus<Jet2>(chart_jets(chart, u)));

    const Vec3d x = normalized(detail::random_tangent(rng, q));
    TangentVec nrm{x, -1.0 * x, p};
    const double nn = metric_pair(spec, p, nrm, nrm);
    const Vec4d cn = tangent_to_chart(chart, u, {nrm.v1 * (1 / std::sqrt(nn)),
                                                 nrm.v2 * (1 / std::sqrt(nn))});
    const Eigen::Vector4d xn(cn[0], cn[1], cn[2], cn[3]);
    worst_normal = std::max(worst_normal, std::abs(xn.dot(hess * xn) - 2.0));

    const Vec4d ct = tangent_to_chart(chart, u, {x, x});
    const Eigen::Vector4d xt(ct[0], ct[1], ct[2], ct[3]);
    worst_tangent = std::max(worst_tangent, std::abs(xt.dot(hess * xt)));
  }
  rep.add("hess_psi_normal_equals_2", worst_normal, cfg.tol_hess,
          worst_normal <= cfg.tol_hess);
  rep.add("hess_psi_tangent_zero", worst_tangent, cfg.tol_hess, worst_tangent <= cfg.tol_hess);
}

// ---------------------------------------------------------------------------
// theta_g constancy and positive Ricci on the certified metric.

inline void check_ricci(Report& rep, const RunConfig& cfg) {
  const ThetaGResult tg = theta_g(cfg.metric, 8, 256, Rng::derive(cfg.seed, 19));
  rep.add("theta_g_value", tg.value, cfg.tol_theta_g,
          std::abs(tg.value - M_PI / 2.0) <= cfg.tol_theta_g);
  rep.add("theta_g_spread", tg.spread, cfg.tol_theta_g, tg.spread <= cfg.tol_theta_g);

  // Ricci eigenvalues and sec^perp on random samples of the configured
  // metric (positive when the metric is a certified deformation).
  const int pts = std::max(1, cfg.random_points / 10);
  const auto per_point = parallel_map(pts, [&](int k) {
    Rng rng(Rng::derive(cfg.seed, 300 + k));
    const PointPair p = detail::random_point_pair(rng);
    const PointContext ctx = make_context(cfg.metric, p);
    double min_ric = ricci_eigenvalues(ctx.curv).minCoeff();
    double min_perp = std::numeric_limits<double>::infinity();
    for (const auto& pl : sample_planes(ctx, 10, Rng::derive(cfg.seed, 400 + k)))
      min_perp = std::min(min_perp, sec_perp(ctx.curv, pl));
    return std::make_pair(min_ric, min_perp);
  });
  double min_ric = 1e300, min_perp = 1e300;
  for (const auto& [a, b] : per_point) {
    min_ric = std::min(min_ric, a);
    min_perp = std::min(min_perp, b);
  }
  rep.add("ricci_eigen_min", min_ric, 0.0, min_ric > 0.0);
  rep.add("sec_perp_sampled_min", min_perp, 0.0, min_perp > 0.0);
}

// ---------------------------------------------------------------------------
// Sec 4.4: negative sectional curvature witness on the deformed metric.

inline void check_negativity(Report& rep, const RunConfig& cfg) {
  if (cfg.metric.family != MetricFamily::deformed) {
    rep.add("negative_sec_witness", 0.0, cfg.tol_sample_min, false,
            "config metric is not a Deformed family");
    return;
  }
  // The flat tori tangent planes turn negative somewhere once s > 0; scan
  // one torus through the diagonal.
  const TorusFrame tf{{1, 0, 0}, {0, 1, 0}};
  const int n = 96;
  const auto rows = parallel_map(n, [&](int i) {
    double best = 1e300;
    double at = 0.0;
    for (int j = 0; j < n; ++j) {
      const double u = 2.0 * M_PI * i / n, v = 2.0 * M_PI * j / n;
      const PointPair p = torus_point(tf, u, v);
      const ChartId chart = select_chart(p);
      const Vec4d uc = point_to_chart(p, chart);
      const auto tang = torus_tangent(tf, u, v);
      const Vec4d c0 = tangent_to_chart(chart, uc, as_pair(tang[0]));
      const Vec4d c1 = tangent_to_chart(chart, uc, as_pair(tang[1]));
      const CurvatureAt c = riemann(cfg.metric, chart, uc);
      const double s = sectional(c, Eigen::Vector4d(c0[0], c0[1], c0[2], c0[3]),
                                 Eigen::Vector4d(c1[0], c1[1], c1[2], c1[3]));
      if (s < best) {
        best = s;
        at = v;
      }
    }
    return std::make_pair(best, at);
  });
  double best = 1e300;
  std::string witness;
  for (int i = 0; i < n; ++i)
    if (rows[i].first < best) {
      best = rows[i].first;
      witness = "torus (u,v) = (" + std::to_string(2.0 * M_PI * i / n) + ", " +
                std::to_string(rows[i].second) + ")";
    }
  rep.add("negative_sec_witness", best, cfg.tol_sample_min, best < -cfg.tol_sample_min,
          witness);
}

// ---------------------------------------------------------------------------
// Sec 4.6: Z2+Z2 and SO(3) invariance.

inline void check_invariance(Report& rep, const RunConfig& cfg) {
  Rng rng(Rng::derive(cfg.seed, 23));
  double worst_z2 = 0.0;
  for (int k = 0; k < cfg.invariance_points; ++k) {
    const PointPair p = detail::random_point_pair(rng);
    const TangentVec x{detail::random_tangent(rng, p.p1), detail::random_tangent(rng, p.p2), p};
    const TangentVec y{detail::random_tangent(rng, p.p1), detail::random_tangent(rng, p.p2), p};
    const double ref = metric_pair(cfg.metric, p, x, y);
    for (int mask = 1; mask < 4; ++mask) {
      const double s1 = (mask & 1) ? -1.0 : 1.0;
      const double s2 = (mask & 2) ? -1.0 : 1.0;
      const PointPair q{s1 * p.p1, s2 * p.p2};
      const TangentVec xq{s1 * x.v1, s2 * x.v2, q};
      const TangentVec yq{s1 * y.v1, s2 * y.v2, q};
      worst_z2 = std::max(worst_z2, std::abs(metric_pair(cfg.metric, q, xq, yq) - ref));
    }
  }
  rep.add("z2z2_pullback_identity", worst_z2, cfg.tol_z2, worst_z2 <= cfg.tol_z2);

  double worst_so3 = 0.0;
  for (int k = 0; k < cfg.rotation_samples; ++k) {
    const PointPair p = detail::random_point_pair(rng, 0.25);
    const PointContext ctx = make_context(cfg.metric, p);
    const auto pls = sample_planes(ctx, 1, Rng::derive(cfg.seed, 500 + k));
    const double ref = sec_of(ctx.curv, pls[0]);

    const Vec3d axis = detail::random_unit(rng);
    const double ang = rng.uniform(0.0, 2.0 * M_PI);
    const PointPair rp{rotate_axis(axis, ang, p.p1), rotate_axis(axis, ang, p.p2)};
    const PointContext rctx = make_context(cfg.metric, rp);
    // Push the plane's ambient frame through the rotation.
    Frame42 rframe;
    for (int c = 0; c < 2; ++c) {
      const Vec4d comp{pls[0].frame(0, c), pls[0].frame(1, c), pls[0].frame(2, c),
                       pls[0].frame(3, c)};
      const TangentPair amb = chart_to_tangent(ctx.chart, ctx.u, comp);
      const TangentPair rot{rotate_axis(axis, ang, amb.v1), rotate_axis(axis, ang, amb.v2)};
      const Vec4d rcomp = tangent_to_chart(rctx.chart, rctx.u, rot);
      for (int i = 0; i < 4; ++i) rframe(i, c) = rcomp[i];
    }
    worst_so3 = std::max(worst_so3, std::abs(sectional(rctx.curv, rframe) - ref));
  }
  rep.add("so3_sectional_invariance", worst_so3, cfg.tol_so3, worst_so3 <= cfg.tol_so3);
}

// ---------------------------------------------------------------------------
// Sec 4.7: negative isotropic curvature witness.

inline void check_isotropic(Report& rep, const RunConfig& cfg) {
  const auto mins = parallel_map(cfg.transversal_points, [&](int k) {
    const double alpha = M_PI * k / std::max(1, cfg.transversal_points - 1);
    const PointContext ctx = make_context(cfg.metric, transversal_point(alpha));
    return isotropic_min(ctx.curv, cfg.iso_frames, cfg.iso_refine,
                         Rng::derive(cfg.seed, 600 + k));
  });
  int best = 0;
  for (int k = 1; k < cfg.transversal_points; ++k)
    if (mins[k] < mins[best]) best = k;
  rep.add("isotropic_min_witness", mins[best], 0.0, mins[best] < 0.0,
          "alpha = " + std::to_string(M_PI * best / std::max(1, cfg.transversal_points - 1)));
}

// ---------------------------------------------------------------------------
// The quotient-bundle construction.

inline void check_cp2(Report& rep, const RunConfig& cfg) {
  // Base metric nonnegativity over random samples.
  const auto mins = parallel_map(cfg.quotient_sample_points, [&](int k) {
    Rng rng(Rng::derive(cfg.seed, 700 + k));
    Quat<double> q{rng.gaussian(), rng.gaussian(), rng.gaussian(), rng.gaussian()};
    const double n = std::sqrt(dot4(q, q));
    for (auto& x : q) x /= n;
    const double beta = std::acos(rng.uniform(-0.95, 0.95));
    const double phi = rng.uniform(0.0, 2.0 * M_PI);
    const BundlePoint p{q, {std::sin(beta) * std::cos(phi), std::sin(beta) * std::sin(phi),
                            std::cos(beta)}};
    const QuotientChart chart = select_quotient_chart(p);
    const Vec4d u = quotient_point_to_chart(p, chart);
    const PointContext base = make_context_from_field(
        QuotientMetricField{QuotientSpec::base(), chart}, ChartId{}, u);
    double lo = 1e300, lo_perp = 1e300;
    for (const auto& pl : sample_planes(base, cfg.quotient_planes_per_point,
                                        Rng::derive(cfg.seed, 800 + k)))
      lo = std::min(lo, sec_of(base.curv, pl));
    const PointContext def = make_context_from_field(
        QuotientMetricField{
            QuotientSpec::deformed(cfg.quotient_s, cfg.quotient_r_in, cfg.quotient_r_out),
            chart},
        ChartId{}, u);
    for (const auto& pl : sample_planes(def, cfg.quotient_planes_per_point,
                                        Rng::derive(cfg.seed, 900 + k)))
      lo_perp = std::min(lo_perp, sec_perp(def.curv, pl));
    return std::make_pair(lo, lo_perp);
  });
  double base_min = 1e300, perp_min = 1e300;
  for (const auto& [a, b] : mins) {
    base_min = std::min(base_min, a);
    perp_min = std::min(perp_min, b);
  }
  rep.add("quotient_base_sec_min", base_min, cfg.tol_quotient_sec,
          base_min >= -cfg.tol_quotient_sec);
  rep.add("quotient_deformed_sec_perp_min", perp_min, 0.0, perp_min > 0.0);

  // Circle family of flat planes.
  Rng rng(Rng::derive(cfg.seed, 27));
  SearchBudget budget{1024, cfg.refine_steps, cfg.optimizer_starts};
  int min_family = 1 << 20;
  double min_spread = 1e9;
  for (int k = 0; k < cfg.quotient_flat_points; ++k) {
    Quat<double> q{rng.gaussian(), rng.gaussian(), rng.gaussian(), rng.gaussian()};
    const double n = std::sqrt(dot4(q, q));
    for (auto& x : q) x /= n;
    const double beta = rng.uniform(0.4, M_PI - 0.4);
    const BundlePoint p{q, {std::sin(beta), 0.0, std::cos(beta)}};
    const QuotientChart chart = select_quotient_chart(p);
    const Vec4d u = quotient_point_to_chart(p, chart);
    const PointContext ctx = make_context_from_field(
        QuotientMetricField{QuotientSpec::base(), chart}, ChartId{}, u);
    const FlatLocus fl = flat_locus(ctx, budget, Rng::derive(cfg.seed, 1000 + k));
    min_family = std::min(min_family, static_cast<int>(fl.witnesses.size()));
    for (std::size_t i = 0; i < fl.witnesses.size(); ++i)
      for (std::size_t j = i + 1; j < fl.witnesses.size(); ++j)
        min_spread = std::min(min_spread, grassmann_dist(fl.witnesses[i], fl.witnesses[j]));
  }
  rep.add("quotient_flat_family_size", min_family, 8, min_family >= 8);
  rep.add("quotient_flat_family_spread", min_spread, 0.1, min_spread > 0.1);

  // Gauge independence of the scalar curvature.
  double worst_gauge = 0.0;
  int done = 0;
  while (done < cfg.quotient_gauge_points) {
    Quat<double> q{rng.gaussian(), rng.gaussian(), rng.gaussian(), rng.gaussian()};
    const double n = std::sqrt(dot4(q, q));
    for (auto& x : q) x /= n;
    if (std::hypot(q[0], q[1]) < 0.35 || std::hypot(q[2], q[3]) < 0.35) continue;
    const double beta = rng.uniform(0.4, M_PI - 0.4);
    const double phi = rng.uniform(0.0, 2.0 * M_PI);
    const BundlePoint p{q, {std::sin(beta) * std::cos(phi), std::sin(beta) * std::sin(phi),
                            std::cos(beta)}};
    const Pole pole = p.r.z <= 0.0 ? Pole::north : Pole::south;
    double scal[2];
    for (int fc = 0; fc < 2; ++fc) {
      const QuotientChart chart{fc, pole};
      const Vec4d u = quotient_point_to_chart(p, chart);
      scal[fc] = ricci_and_scalar(
          riemann_at(QuotientMetricField{QuotientSpec::base(), chart}, u)).second;
    }
    worst_gauge = std::max(worst_gauge, std::abs(scal[1] - scal[0]));
    ++done;
  }
  rep.add("quotient_gauge_independence", worst_gauge, cfg.tol_gauge,
          worst_gauge <= cfg.tol_gauge);

  // First variation at flat planes on a singular orbit (FD sign check).
  {
    Quat<double> q{0.6, -0.48, 0.4, 0.5};
    const double n = std::sqrt(dot4(q, q));
    for (auto& x : q) x /= n;
    const BundlePoint p{q, {0, 0, 1}};
    const QuotientChart chart = select_quotient_chart(p);
    const Vec4d u = quotient_point_to_chart(p, chart);
    const PointContext ctx = make_context_from_field(
        QuotientMetricField{QuotientSpec::base(), chart}, ChartId{}, u);
    const FlatLocus fl = flat_locus(ctx, budget, Rng::derive(cfg.seed, 1100));
    double min_fd = 1e300;
    const double h = 1e-4;
    for (const auto& w : fl.witnesses) {
      auto sec_at = [&](double s) {
        return sectional(
            riemann_at(QuotientMetricField{
                           QuotientSpec{s, cfg.quotient_r_in, cfg.quotient_r_out}, chart},
                       u),
            w.frame);
      };
      min_fd = std::min(min_fd, (sec_at(h) - sec_at(-h)) / (2.0 * h));
    }
    rep.add("quotient_singular_first_variation", min_fd, 0.0,
            !fl.witnesses.empty() && min_fd > 0.0);
  }
}

// ---------------------------------------------------------------------------

inline Report verify(const std::string& prop_id, const RunConfig& cfg) {
  Report rep;
  rep.prop = prop_id;
  rep.config_echo = config_to_json(cfg);
  rep.environment = environment_metadata();
  try {
    if (prop_id == "geomcheeger") check_geomcheeger(rep, cfg);
    else if (prop_id == "kc") check_kc(rep, cfg);
    else if (prop_id == "first_variation") check_first_variation(rep, cfg);
    else if (prop_id == "hess") check_hess(rep, cfg);
    else if (prop_id == "ricci") check_ricci(rep, cfg);
    else if (prop_id == "negativity") check_negativity(rep, cfg);
    else if (prop_id == "invariance") check_invariance(rep, cfg);
    else if (prop_id == "isotropic") check_isotropic(rep, cfg);
    else if (prop_id == "cp2") check_cp2(rep, cfg);
    else throw UnknownPropositionError("unknown proposition id: " + prop_id);
  } catch (const UnknownPropositionError&) {
    throw;
  } catch (const std::exception& e) {
    // A numeric failure is a failing check, never a crash.
    rep.add("uncaught_numeric_error", 0.0, 0.0, false, e.what());
  }
  return rep;
}

inline const std::vector<std::string>& known_propositions() {
  static const std::vector<std::string> ids{"geomcheeger",     "kc",        "first_variation",
                                            "hess",            "ricci",     "negativity",
                                            "invariance",      "isotropic", "cp2"};
  return ids;
}

// ---------------------------------------------------------------------------
// Theta sweep: bisection for the admissible deformation size per theta.

struct SweepRow {
  double theta = 0.0;
  double s_theta = 0.0;
  double margin_at_half = 0.0;   // sampled min over K_theta at s_theta/2
  double dist_at_min = 0.0;
  double alpha_at_min = 0.0;
  std::vector<std::pair<double, double>> trace;  // (s, sampled min)
};

inline std::optional<SweepRow> sweep_one_theta(double theta, const RunConfig& cfg) {
  if (theta > kMaxPlaneDist + 1e-9) return std::nullopt;
  SweepRow row;
  row.theta = theta;
  const double t = cfg.metric.t > 0 ? cfg.metric.t : 1.0;
  const SearchBudget light{cfg.bisect_pair_samples, cfg.bisect_refine, cfg.bisect_starts};
  auto sampled_min = [&](double s) {
    const MetricSpec m = MetricSpec::deformed(t, s, cfg.metric.r_in, cfg.metric.r_out);
    const auto r = pair_min_over_ktheta(m, theta, cfg.bisect_transversal, light,
                                        Rng::derive(cfg.seed, 31));
    return r->avg_sec;
  };

  double lo = 0.0, hi = cfg.s_max;
  const double top = sampled_min(cfg.s_max);
  row.trace.push_back({cfg.s_max, top});
  if (top > 0.0) {
    row.s_theta = cfg.s_max;
  } else {
    for (int it = 0; it < cfg.bisect_iters; ++it) {
      const double mid = 0.5 * (lo + hi);
      const double v = sampled_min(mid);
      row.trace.push_back({mid, v});
      (v > 0.0 ? lo : hi) = mid;
    }
    row.s_theta = lo;
  }
  std::sort(row.trace.begin(), row.trace.end());
  if (row.s_theta <= 0.0) return row;  // no positive s found; s_theta = 0 reported

  // Positive-margin certificate at s_theta / 2 with the full budget.
  const SearchBudget full{cfg.pair_samples, cfg.refine_steps, cfg.optimizer_starts};
  const MetricSpec half =
      MetricSpec::deformed(t, 0.5 * row.s_theta, cfg.metric.r_in, cfg.metric.r_out);
  const auto cert = pair_min_over_ktheta(half, theta, cfg.transversal_points, full,
                                         Rng::derive(cfg.seed, 37));
  row.margin_at_half = cert->avg_sec;
  row.dist_at_min = cert->dist;
  row.alpha_at_min = cert->alpha;
  return row;
}

struct SweepResult {
  Report report;
  std::vector<SweepRow> rows;
};

inline SweepResult sweep_theta(const RunConfig& cfg) {
  Report rep;
  rep.prop = "sweep";
  rep.config_echo = config_to_json(cfg);
  rep.environment = environment_metadata();

  std::vector<SweepRow> rows;
  for (const double theta : cfg.thetas) {
    auto row = sweep_one_theta(theta, cfg);
    if (!row) {
      // Expected marker: no plane pair can be this far apart.
      rep.add("theta_" + std::to_string(theta) + "_infeasible_marker", theta, kMaxPlaneDist,
              true, "infeasible: theta exceeds the Grassmannian fiber diameter");
      continue;
    }
    rows.push_back(*row);
    const std::string tag = "theta_" + std::to_string(theta);
    rep.add(tag + "_s_theta", row->s_theta, 0.0, row->s_theta > 0.0);
    rep.add(tag + "_margin_at_half", row->margin_at_half, cfg.tol_margin,
            row->margin_at_half > cfg.tol_margin,
            "alpha = " + std::to_string(row->alpha_at_min) +
                ", dist = " + std::to_string(row->dist_at_min));
    PlotSeries s;
    s.name = "theta = " + std::to_string(theta).substr(0, 4);
    s.points = row->trace;
    rep.plots.push_back(std::move(s));
  }

  // Monotone trend: s_theta weakly decreasing as theta decreases (the
  // config lists thetas in descending order).
  bool monotone = true;
  for (std::size_t i = 1; i < rows.size(); ++i)
    if (rows[i].s_theta > rows[i - 1].s_theta + 1e-12) monotone = false;
  if (rows.size() >= 2)
    rep.add("s_theta_monotone_trend", monotone ? 1.0 : 0.0, 1.0, monotone);

  // Transversal restriction spot-check against full 4D points at theta_main.
  if (!rows.empty()) {
    const SweepRow* main_row = nullptr;
    for (const auto& r : rows)
      if (std::abs(r.theta - cfg.theta_main) < 1e-12) main_row = &r;
    if (main_row && main_row->s_theta > 0.0) {
      const double t = cfg.metric.t > 0 ? cfg.metric.t : 1.0;
      const MetricSpec half = MetricSpec::deformed(t, 0.5 * main_row->s_theta,
                                                   cfg.metric.r_in, cfg.metric.r_out);
      const SearchBudget light{cfg.bisect_pair_samples, cfg.bisect_refine, cfg.bisect_starts};
      const auto spot = parallel_map(cfg.full4d_spot_points, [&](int k) {
        Rng rng(Rng::derive(cfg.seed, 1200 + k));
        const PointPair p = detail::random_point_pair(rng);
        const PointContext ctx = make_context(half, p);
        double value = 0.0;
        pair_min_at_point(ctx, cfg.theta_main, light, Rng::derive(cfg.seed, 1300 + k), &value);
        return value;
      });
      const double full_min = *std::min_element(spot.begin(), spot.end());
      rep.add("full4d_spot_vs_transversal", full_min - main_row->margin_at_half,
              cfg.tol_transversal_vs_full,
              full_min >= main_row->margin_at_half - cfg.tol_transversal_vs_full);
    }
  }
  return {std::move(rep), std::move(rows)};
}

// Dedicated sweep table: theta, s_theta, min_margin.
inline void write_sweep_table_csv(const std::vector<SweepRow>& rows,
                                  const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open for writing: " + path.string());
  out << "theta,s_theta,min_margin\r\n";
  for (const auto& r : rows)
    out << detail::format_double(r.theta) << ',' << detail::format_double(r.s_theta) << ','
        << detail::format_double(r.margin_at_half) << "\r\n";
}

// ---------------------------------------------------------------------------
// Gauss-Bonnet torus check.

inline Report gauss_bonnet(const RunConfig& cfg) {
  Report rep;
  rep.prop = "gauss_bonnet";
  rep.config_echo = config_to_json(cfg);
  rep.environment = environment_metadata();

  const double t = cfg.metric.t > 0 ? cfg.metric.t : 1.0;
  const TorusFrame tf{{1, 0, 0}, {0, 1, 0}};
  const GaussBonnetResult r = gauss_bonnet_torus(tf, t, cfg.metric.r_in, cfg.metric.r_out,
                                                 cfg.torus_grid_checks,
                                                 cfg.torus_grid_integral);
  rep.add("torus_ii_norm_max", r.max_ii_norm, cfg.tol_gb_geodesic,
          r.max_ii_norm < cfg.tol_gb_geodesic);
  rep.add("torus_gauss_curvature_max", r.max_gauss, cfg.tol_gb_gauss,
          r.max_gauss < cfg.tol_gb_gauss);
  rep.add("variation_integral", std::abs(r.integral), cfg.tol_gb_integral,
          std::abs(r.integral) < cfg.tol_gb_integral);
  rep.add("integrand_positive_at_diagonal", r.integrand_origin, 0.0,
          r.integrand_origin > 0.0);
  rep.add("integrand_negative_witness", r.integrand_min, 0.0, r.integrand_min < 0.0);

  PlotSeries s;
  s.name = "d/ds sec along v = 0";
  for (const auto& [u, fv] : r.profile) s.points.push_back({u, fv});
  rep.plots.push_back(std::move(s));
  return rep;
}

}  // namespace biorth
