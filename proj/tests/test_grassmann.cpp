#include <catch2/catch_amalgamated.hpp>
#include <cmath>

#include "biorth/optimize.hpp"
#include "biorth/util.hpp"

using namespace biorth;

namespace {

const Vec3d e1{1, 0, 0}, e2{0, 1, 0}, e3{0, 0, 1};

PointContext product_ctx() {
  return make_context(MetricSpec::product(), transversal_point(M_PI / 2));
}

Frame42 random_frame(Rng& rng) {
  Frame42 f;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 2; ++j) f(i, j) = rng.gaussian();
  return f;
}

}  // namespace

TEST_CASE("orthonormalize: fixed points, span preservation, degenerate input") {
  const PointContext ctx = product_ctx();
  Rng rng(3);

  // An already-orthonormal frame is unchanged.
  Plane p = orthonormalize(random_frame(rng), ctx.G, ctx.chart, ctx.u);
  const Plane q = orthonormalize(p.frame, ctx.G, ctx.chart, ctx.u);
  REQUIRE((q.frame - p.frame).cwiseAbs().maxCoeff() < 1e-12);

  // Scaling does not change the span.
  const Plane r = orthonormalize(5.0 * p.frame, ctx.G, ctx.chart, ctx.u);
  REQUIRE(grassmann_dist(p, r) < 1e-10);

  // Span preservation for a raw random frame.
  const Frame42 raw = random_frame(rng);
  const Plane s = orthonormalize(raw, ctx.G, ctx.chart, ctx.u);
  const Eigen::Matrix2d m = raw.transpose() * ctx.G * s.frame;  // cross Gram
  // Columns of s must stay inside span(raw): check via the complement.
  const Plane sc = orth_complement(s);
  REQUIRE((raw.transpose() * ctx.G * sc.frame).cwiseAbs().maxCoeff() < 1e-10);
  (void)m;

  Frame42 bad;
  bad.col(0) = p.frame.col(0);
  bad.col(1) = 2.0 * p.frame.col(0);
  REQUIRE_THROWS_AS(orthonormalize(bad, ctx.G, ctx.chart, ctx.u), DegeneratePlaneError);

  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      REQUIRE_THAT((p.frame.transpose() * ctx.G * p.frame)(i, j),
                   Catch::Matchers::WithinAbs(i == j ? 1.0 : 0.0, 1e-10));
}

TEST_CASE("grassmann distance: axioms and reference values") {
  const PointContext ctx = product_ctx();
  Rng rng(5);

  for (int trial = 0; trial < 50; ++trial) {
    const Plane a = orthonormalize(random_frame(rng), ctx.G, ctx.chart, ctx.u);
    const Plane b = orthonormalize(random_frame(rng), ctx.G, ctx.chart, ctx.u);
    const Plane c = orthonormalize(random_frame(rng), ctx.G, ctx.chart, ctx.u);

    REQUIRE(grassmann_dist(a, a) < 1e-10);            // indiscernibles
    REQUIRE(grassmann_dist(a, b) == grassmann_dist(b, a));  // exact symmetry
    REQUIRE(grassmann_dist(a, b) <= grassmann_dist(a, c) + grassmann_dist(c, b) + 1e-9);

    // Complement sits at the maximum distance pi/sqrt(2).
    REQUIRE_THAT(grassmann_dist(a, orth_complement(a)),
                 Catch::Matchers::WithinAbs(kMaxPlaneDist, 1e-10));
  }

  // Two planes sharing one vector with the others g-orthogonal: d = pi/2.
  Eigen::Matrix4d e;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) e(i, j) = rng.gaussian();
  REQUIRE(g_orthonormalize(ctx.G, e));
  Frame42 f1, f2;
  f1.col(0) = e.col(0); f1.col(1) = e.col(1);
  f2.col(0) = e.col(0); f2.col(1) = e.col(2);
  REQUIRE_THAT(grassmann_dist({f1, ctx.chart, ctx.u, ctx.G}, {f2, ctx.chart, ctx.u, ctx.G}),
               Catch::Matchers::WithinAbs(M_PI / 2.0, 1e-10));
}

TEST_CASE("orthogonal complement: involution and orthogonality") {
  const PointContext ctx = product_ctx();
  Rng rng(7);
  for (int trial = 0; trial < 100; ++trial) {
    const Plane p = orthonormalize(random_frame(rng), ctx.G, ctx.chart, ctx.u);
    const Plane pc = orth_complement(p);
    REQUIRE((p.frame.transpose() * ctx.G * pc.frame).cwiseAbs().maxCoeff() < 1e-10);
    REQUIRE(grassmann_dist(orth_complement(pc), p) < 1e-10);
  }
}

TEST_CASE("geodesic parameterizes distance linearly") {
  const PointContext ctx = product_ctx();
  Rng rng(9);
  for (int trial = 0; trial < 20; ++trial) {
    const Plane a = orthonormalize(random_frame(rng), ctx.G, ctx.chart, ctx.u);
    const Plane b = orthonormalize(random_frame(rng), ctx.G, ctx.chart, ctx.u);
    const double d = grassmann_dist(a, b);
    if (d < 0.2) continue;
    for (double tau : {0.25, 0.5, 0.8}) {
      const Plane g = grassmann_geodesic(a, b, tau);
      REQUIRE_THAT(grassmann_dist(a, g), Catch::Matchers::WithinAbs(tau * d, 1e-8));
    }
    const Plane proj = project_to_sphere(a, b, 0.4);
    REQUIRE_THAT(grassmann_dist(a, proj), Catch::Matchers::WithinAbs(0.4, 1e-8));
  }
}

TEST_CASE("sample_planes: deterministic, valid, dense") {
  const PointPair p = transversal_point(M_PI / 2);
  const PointContext ctx = make_context(MetricSpec::cheeger(1.0), p);

  const auto s1 = sample_planes(ctx, 32, 1234);
  const auto s2 = sample_planes(ctx, 32, 1234);
  for (int i = 0; i < 32; ++i)
    REQUIRE((s1[i].frame - s2[i].frame).cwiseAbs().maxCoeff() == 0.0);

  for (const auto& pl : s1)
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j)
        REQUIRE_THAT((pl.frame.transpose() * ctx.G * pl.frame)(i, j),
                     Catch::Matchers::WithinAbs(i == j ? 1.0 : 0.0, 1e-10));

  // Density: the flat plane sigma_pi(x) has a sample within 0.15.
  const auto axes = biperp_axes(p);
  const Plane target = sigma_pi_plane(ctx, p, axes[0]);
  const auto dense = sample_planes(ctx, 4096, 99);
  double best = 1e9;
  for (const auto& pl : dense) best = std::min(best, grassmann_dist(target, pl));
  REQUIRE(best < 0.15);
}

TEST_CASE("min_sectional on the product finds the flat mixed planes from every seed") {
  const PointContext ctx = product_ctx();
  SearchBudget budget;
  budget.n_samples = 512;
  budget.n_refine = 120;
  budget.n_starts = 4;
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    const LocalMinimum m = min_sectional(ctx, budget, seed);
    REQUIRE(std::abs(m.value) < 1e-6);
    // The minimizer is a mixed plane: both 3x2 ambient factor blocks have
    // rank one.
    const TangentPair v0 = chart_to_tangent(ctx.chart, ctx.u,
                                            {m.plane.frame(0, 0), m.plane.frame(1, 0),
                                             m.plane.frame(2, 0), m.plane.frame(3, 0)});
    const TangentPair v1 = chart_to_tangent(ctx.chart, ctx.u,
                                            {m.plane.frame(0, 1), m.plane.frame(1, 1),
                                             m.plane.frame(2, 1), m.plane.frame(3, 1)});
    Eigen::Matrix<double, 3, 2> top, bot;
    top << v0.v1.x, v1.v1.x, v0.v1.y, v1.v1.y, v0.v1.z, v1.v1.z;
    bot << v0.v2.x, v1.v2.x, v0.v2.y, v1.v2.y, v0.v2.z, v1.v2.z;
    Eigen::JacobiSVD<Eigen::Matrix<double, 3, 2>> st(top), sb(bot);
    REQUIRE(st.singularValues()(1) < 1e-3);
    REQUIRE(sb.singularValues()(1) < 1e-3);
  }
}

TEST_CASE("flat locus: unique plane at a regular point, circle family at a singular one") {
  const MetricSpec spec = MetricSpec::cheeger(1.0);
  SearchBudget budget;
  budget.n_samples = 1024;
  budget.n_refine = 150;
  budget.n_starts = 8;

  // Regular point.
  {
    const PointPair p{e1, e2};
    const PointContext ctx = make_context(spec, p);
    const FlatLocus fl = flat_locus(ctx, budget, 17);
    REQUIRE(fl.witnesses.size() == 1);
    REQUIRE(std::abs(sec_of(ctx.curv, fl.witnesses[0])) < kFlatTol);
    REQUIRE(fl.second_best > 1e-4);
    const Plane target = sigma_pi_plane(ctx, p, e3);
    REQUIRE(grassmann_dist(fl.witnesses[0], target) < 1e-3);
  }

  // Singular point: a circle's worth of flat planes.
  {
    const PointPair p{e3, e3};
    const PointContext ctx = make_context(spec, p);
    const FlatLocus fl = flat_locus(ctx, budget, 23);
    REQUIRE(fl.witnesses.size() >= 8);
    for (std::size_t i = 0; i < fl.witnesses.size(); ++i)
      for (std::size_t j = i + 1; j < fl.witnesses.size(); ++j)
        REQUIRE(grassmann_dist(fl.witnesses[i], fl.witnesses[j]) > 0.05);
    // Every witness matches sigma_pi(x) for some x in p1^perp.
    for (const auto& w : fl.witnesses)
      REQUIRE(dist_to_sigma_pi_family(ctx, p, w) < 1e-3);
  }
}

TEST_CASE("sec_theta: feasibility, product reference values, monotonicity in theta") {
  const PointContext ctx = product_ctx();
  SearchBudget budget;
  budget.n_samples = 256;
  budget.n_refine = 80;
  budget.n_starts = 4;

  REQUIRE_THROWS_AS(sec_theta(ctx, sample_planes(ctx, 1, 1)[0], -0.1, budget, 1),
                    std::invalid_argument);

  // Product, mixed sigma, theta = pi/sqrt2: the only feasible plane is the
  // complement, itself mixed and flat.
  const PointPair p = transversal_point(M_PI / 2);
  const auto axes = biperp_axes(p);
  const Plane mixed = sigma_pi_plane(ctx, p, axes[0]);
  REQUIRE_THAT(sec_theta(ctx, mixed, kMaxPlaneDist, budget, 3),
               Catch::Matchers::WithinAbs(0.0, 1e-8));

  // At theta = pi/sqrt2, sec_theta agrees with sec_perp.
  Rng rng(31);
  for (int trial = 0; trial < 10; ++trial) {
    const Plane s = orthonormalize(random_frame(rng), ctx.G, ctx.chart, ctx.u);
    REQUIRE_THAT(sec_theta(ctx, s, kMaxPlaneDist, budget, 5),
                 Catch::Matchers::WithinAbs(sec_perp(ctx.curv, s), 1e-6));
  }

  // Monotone in theta (smaller theta allows more pairs, so a lower min).
  const PointContext cc = make_context(MetricSpec::cheeger(1.0), transversal_point(1.0));
  for (int trial = 0; trial < 10; ++trial) {
    const Plane s = orthonormalize(random_frame(rng), cc.G, cc.chart, cc.u);
    const double a = sec_theta(cc, s, 0.4, budget, 7);
    const double b = sec_theta(cc, s, 0.8, budget, 7);
    const double c = sec_theta(cc, s, 1.2, budget, 7);
    REQUIRE(a <= b + 1e-6);
    REQUIRE(b <= c + 1e-6);
  }
}

TEST_CASE("pair minimum over K_theta: flat pairs at the singular orbits, infeasible theta") {
  SearchBudget budget;
  budget.n_samples = 192;
  budget.n_refine = 60;
  budget.n_starts = 4;

  REQUIRE_FALSE(pair_min_over_ktheta(MetricSpec::cheeger(1.0), kMaxPlaneDist + 0.1, 8, budget, 1)
                    .has_value());

  const auto s = pair_min_over_ktheta(MetricSpec::cheeger(1.0), 0.8, 17, budget, 11);
  REQUIRE(s.has_value());
  REQUIRE(std::abs(s->avg_sec) < 1e-7);
  const bool at_singular = s->alpha < 1e-9 || s->alpha > M_PI - 1e-9;
  REQUIRE(at_singular);
  REQUIRE(s->dist >= 0.8 - 1e-9);
}

TEST_CASE("constraint activity: the deformed pair minimizer sits on the theta sphere") {
  // Where the deformed metric has its nonpositive-curvature planes (the
  // cutoff annulus), those planes cluster around the single flat plane, so
  // the unconstrained pair minimum is infeasible and the constrained
  // minimizer rides the boundary dist = theta.
  SearchBudget budget;
  budget.n_samples = 384;
  budget.n_refine = 150;
  budget.n_starts = 6;
  const MetricSpec spec = MetricSpec::deformed(1.0, 0.003);
  double best = 1e9, dist_at_best = 0.0;
  for (double alpha : {0.55, 0.7, 0.85}) {
    const PointContext ctx = make_context(spec, transversal_point(alpha));
    double value = 0.0;
    auto [a, b] = pair_min_at_point(ctx, 0.8, budget, 5, &value);
    if (value < best) {
      best = value;
      dist_at_best = grassmann_dist(a, b);
    }
  }
  REQUIRE(best < 0.0);  // the annulus really carries negative pairs at this s
  REQUIRE_THAT(dist_at_best, Catch::Matchers::WithinAbs(0.8, 1e-3));
}

TEST_CASE("theta_g is pi/2 under the adapted distance") {
  for (const auto& spec : {MetricSpec::cheeger(1.0), MetricSpec::deformed(1.0, 0.1)}) {
    const ThetaGResult r = theta_g(spec, 6, 200, 41);
    REQUIRE_THAT(r.value, Catch::Matchers::WithinAbs(M_PI / 2.0, 1e-9));
    REQUIRE(r.spread < 1e-9);
  }
}
