#include <catch2/catch_amalgamated.hpp>
#include <cmath>

#include "biorth/charts.hpp"
#include "biorth/util.hpp"

using namespace biorth;

namespace {
const ChartId kNN{Pole::north, Pole::north};
}

TEST_CASE("chart center maps to the antipode of the projection pole") {
  const PointPair p = chart_to_point(kNN, {0, 0, 0, 0});
  REQUIRE_THAT(p.p1.z, Catch::Matchers::WithinAbs(-1.0, 1e-15));
  REQUIRE_THAT(p.p2.z, Catch::Matchers::WithinAbs(-1.0, 1e-15));
  REQUIRE_THAT(norm(p.p1), Catch::Matchers::WithinAbs(1.0, 1e-15));
}

TEST_CASE("inverse stereographic at u = (1,0,0,0)") {
  const PointPair p = chart_to_point(kNN, {1, 0, 0, 0});
  REQUIRE_THAT(p.p1.x, Catch::Matchers::WithinAbs(1.0, 1e-15));
  REQUIRE_THAT(p.p1.y, Catch::Matchers::WithinAbs(0.0, 1e-15));
  REQUIRE_THAT(p.p1.z, Catch::Matchers::WithinAbs(0.0, 1e-15));
  REQUIRE_THAT(p.p2.z, Catch::Matchers::WithinAbs(-1.0, 1e-15));
}

TEST_CASE("chart round trips within 1e-12 on random coordinates") {
  Rng rng(11);
  for (int trial = 0; trial < 200; ++trial) {
    const ChartId chart = ChartId::from_index(static_cast<int>(rng.raw() % 4));
    Vec4d u;
    for (auto& x : u) x = rng.uniform(-2.0, 2.0);
    const PointPair p = chart_to_point(chart, u);
    REQUIRE_THAT(norm(p.p1), Catch::Matchers::WithinAbs(1.0, 1e-14));
    REQUIRE_THAT(norm(p.p2), Catch::Matchers::WithinAbs(1.0, 1e-14));
    const Vec4d v = point_to_chart(p, chart);
    for (int i = 0; i < 4; ++i)
      REQUIRE_THAT(v[i], Catch::Matchers::WithinAbs(u[i], 1e-12));
  }
}

TEST_CASE("point_to_chart examples and pole rejection") {
  const PointPair south{{0, 0, -1}, {0, 0, -1}};
  const Vec4d u = point_to_chart(south, kNN);
  for (int i = 0; i < 4; ++i) REQUIRE(u[i] == 0.0);

  const PointPair onpole{{0, 0, 1}, {0, 0, -1}};
  REQUIRE_THROWS_AS(point_to_chart(onpole, kNN), PoleProximityError);

  const PointPair p{{1, 0, 0}, {0, 1, 0}};
  const Vec4d w = point_to_chart(p, kNN);
  REQUIRE_THAT(w[0], Catch::Matchers::WithinAbs(1.0, 1e-15));
  REQUIRE_THAT(w[1], Catch::Matchers::WithinAbs(0.0, 1e-15));
  REQUIRE_THAT(w[2], Catch::Matchers::WithinAbs(0.0, 1e-15));
  REQUIRE_THAT(w[3], Catch::Matchers::WithinAbs(1.0, 1e-15));
}

TEST_CASE("jet embedding gradient equals the analytic stereographic derivative") {
  // d/dx1 of p1_z = 4 x1 / (1+|x|^2)^2 in the north chart.
  for (double x1 : {0.0, 0.7}) {
    const Vec4d u{x1, 0.3, 0.1, -0.2};
    const PointPairT<Jet2> pj = chart_jets(kNN, u);
    const double d = 1.0 + x1 * x1 + 0.09;
    REQUIRE_THAT(pj.p1.z.grad(0), Catch::Matchers::WithinAbs(4.0 * x1 / (d * d), 1e-14));
  }
}

TEST_CASE("jet-level tangency: <dp/du_i, p> = 0 to 1e-12") {
  Rng rng(5);
  for (int trial = 0; trial < 50; ++trial) {
    const ChartId chart = ChartId::from_index(static_cast<int>(rng.raw() % 4));
    Vec4d u;
    for (auto& x : u) x = rng.uniform(-1.5, 1.5);
    const PointPairT<Jet2> pj = chart_jets(chart, u);
    const auto frame = chart_coordinate_frame<double>(chart, u);
    const PointPair p = chart_to_point(chart, u);
    for (int i = 0; i < 2; ++i)
      REQUIRE_THAT(dot(frame[i].v1, p.p1), Catch::Matchers::WithinAbs(0.0, 1e-12));
    for (int i = 2; i < 4; ++i)
      REQUIRE_THAT(dot(frame[i].v2, p.p2), Catch::Matchers::WithinAbs(0.0, 1e-12));
    // Jacobian inside the jets agrees with the hand-coded frame.
    for (int i = 0; i < 4; ++i) {
      REQUIRE_THAT(pj.p1.x.grad(i),
                   Catch::Matchers::WithinAbs(i < 2 ? frame[i].v1.x : 0.0, 1e-13));
      REQUIRE_THAT(pj.p2.z.grad(i),
                   Catch::Matchers::WithinAbs(i >= 2 ? frame[i].v2.z : 0.0, 1e-13));
    }
  }
}

TEST_CASE("jet hessians of the embedding match finite differences") {
  Rng rng(9);
  const double h = 1e-4;
  for (int trial = 0; trial < 20; ++trial) {
    Vec4d u;
    for (auto& x : u) x = rng.uniform(-1.0, 1.0);
    const PointPairT<Jet2> pj = chart_jets(kNN, u);
    auto component = [&](const Vec4d& v, int c) {
      const PointPair p = chart_to_point(kNN, v);
      const Vec3d w = c < 3 ? p.p1 : p.p2;
      return w[c % 3];
    };
    for (int c = 0; c < 6; ++c) {
      const Jet2& jc = c < 3 ? pj.p1[c] : pj.p2[c % 3];
      for (int i = 0; i < 4; ++i)
        for (int j = i; j < 4; ++j) {
          Vec4d pp = u, pm = u, mp = u, mm = u;
          pp[i] += h; pp[j] += h;
          pm[i] += h; pm[j] -= h;
          mp[i] -= h; mp[j] += h;
          mm[i] -= h; mm[j] -= h;
          const double fd = (component(pp, c) - component(pm, c) - component(mp, c) +
                             component(mm, c)) / (4.0 * h * h);
          REQUIRE_THAT(jc.hess(i, j), Catch::Matchers::WithinAbs(fd, 1e-6));
        }
    }
  }
}

TEST_CASE("chart selection keeps coordinates bounded and is deterministic") {
  Rng rng(13);
  for (int trial = 0; trial < 100; ++trial) {
    Vec3d a{rng.gaussian(), rng.gaussian(), rng.gaussian()};
    Vec3d b{rng.gaussian(), rng.gaussian(), rng.gaussian()};
    const PointPair p{normalized(a), normalized(b)};
    const ChartId chart = select_chart(p);
    const Vec4d u = point_to_chart(p, chart);
    for (int i = 0; i < 4; ++i) REQUIRE(std::abs(u[i]) <= 1.0 + 1e-12);
  }
  const PointPair eq{{1, 0, 0}, {0, 0, -0.6}};
  // z = 0 ties to the north chart (enumeration order).
  REQUIRE(select_chart({{1, 0, 0}, {0, 0, -1}}).pole1 == Pole::north);
  (void)eq;
}

TEST_CASE("ambient/chart tangent conversions invert each other") {
  Rng rng(17);
  for (int trial = 0; trial < 50; ++trial) {
    const ChartId chart = ChartId::from_index(static_cast<int>(rng.raw() % 4));
    Vec4d u;
    for (auto& x : u) x = rng.uniform(-1.2, 1.2);
    Vec4d c;
    for (auto& x : c) x = rng.gaussian();
    const TangentPair v = chart_to_tangent(chart, u, c);
    const Vec4d c2 = tangent_to_chart(chart, u, v);
    for (int i = 0; i < 4; ++i)
      REQUIRE_THAT(c2[i], Catch::Matchers::WithinAbs(c[i], 1e-10));
    // Components really are tangent to the factors.
    const PointPair p = chart_to_point(chart, u);
    REQUIRE_THAT(dot(v.v1, p.p1), Catch::Matchers::WithinAbs(0.0, 1e-12));
    REQUIRE_THAT(dot(v.v2, p.p2), Catch::Matchers::WithinAbs(0.0, 1e-12));
  }
}
