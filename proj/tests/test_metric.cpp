#include <catch2/catch_amalgamated.hpp>
#include <cmath>

#include "biorth/metric.hpp"
#include "biorth/util.hpp"

using namespace biorth;

namespace {
const ChartId kNN{Pole::north, Pole::north};

Vec4d random_u(Rng& rng, double lim = 0.9) {
  Vec4d u;
  for (auto& x : u) x = rng.uniform(-lim, lim);
  return u;
}
}  // namespace

TEST_CASE("product components: conformal factor squared per block") {
  Rng rng(3);
  for (int trial = 0; trial < 20; ++trial) {
    const Vec4d u = random_u(rng);
    const MetricAt m = metric_components(MetricSpec::product(), kNN, u);
    const auto g = m.value();
    const double l1 = 4.0 / std::pow(1.0 + u[0] * u[0] + u[1] * u[1], 2);
    const double l2 = 4.0 / std::pow(1.0 + u[2] * u[2] + u[3] * u[3], 2);
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j) {
        double expect = 0.0;
        if (i == j) expect = i < 2 ? l1 : l2;
        REQUIRE_THAT(g(i, j), Catch::Matchers::WithinAbs(expect, 1e-13));
      }
  }
}

TEST_CASE("component jets match finite differences of the value") {
  Rng rng(5);
  const double h = 1e-4;
  const MetricSpec specs[] = {MetricSpec::cheeger(1.0), MetricSpec::deformed(1.0, 0.12)};
  for (const auto& spec : specs) {
    for (int trial = 0; trial < 8; ++trial) {
      const Vec4d u = random_u(rng);
      const MetricJets m = metric_component_jets(spec, kNN, u);
      auto val = [&](const Vec4d& v, int i, int j) {
        return metric_component_jets(spec, kNN, v)[i][j].v;
      };
      for (int i = 0; i < 4; ++i)
        for (int j = i; j < 4; ++j)
          for (int k = 0; k < 4; ++k) {
            Vec4d up = u, dn = u;
            up[k] += h;
            dn[k] -= h;
            const double fd = (val(up, i, j) - val(dn, i, j)) / (2.0 * h);
            REQUIRE_THAT(m[i][j].grad(k), Catch::Matchers::WithinAbs(fd, 1e-6));
          }
    }
  }
}

TEST_CASE("Cheeger components converge to the product as t -> 0") {
  Rng rng(9);
  for (int trial = 0; trial < 10; ++trial) {
    const Vec4d u = random_u(rng);
    const auto gp = metric_components(MetricSpec::product(), kNN, u).value();
    const auto gc = metric_components(MetricSpec::cheeger(1e-8), kNN, u).value();
    REQUIRE((gp - gc).cwiseAbs().maxCoeff() < 1e-6);
  }
}

TEST_CASE("value matrices are SPD and the singular guard trips on bad specs") {
  Rng rng(11);
  for (int trial = 0; trial < 20; ++trial) {
    const Vec4d u = random_u(rng);
    const MetricAt m = metric_components(MetricSpec::deformed(1.0, 0.15), kNN, u);
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix4d> es(m.value(), Eigen::EigenvaluesOnly);
    REQUIRE(es.eigenvalues().minCoeff() > kSpdTol);
  }
  // s beyond the positivity bound is rejected at construction.
  REQUIRE_THROWS_AS(MetricSpec::deformed(1.0, 3.0), std::invalid_argument);
  REQUIRE_THROWS_AS(MetricSpec::deformed(0.0, 0.1), std::invalid_argument);
  REQUIRE_THROWS_AS(MetricSpec::deformed(1.0, 0.1, 0.6, 0.3), std::invalid_argument);
  REQUIRE_THROWS_AS(MetricSpec::cheeger(-1.0), std::invalid_argument);
}

TEST_CASE("scalar chart invariants: metric entries agree across overlapping charts") {
  // The same geometric pairing computed in two charts agrees: compare
  // g(v, w) for ambient tangent vectors pushed through both charts.
  Rng rng(13);
  const MetricSpec spec = MetricSpec::deformed(1.0, 0.12);
  for (int trial = 0; trial < 10; ++trial) {
    Vec3d a{rng.gaussian(), rng.gaussian(), rng.gaussian()};
    Vec3d b{rng.gaussian(), rng.gaussian(), rng.gaussian()};
    PointPair p{normalized(a), normalized(b)};
    // keep away from all poles so every chart is usable
    if (std::abs(p.p1.z) > 0.75 || std::abs(p.p2.z) > 0.75) continue;
    Vec3d v1 = cross(p.p1, {0.3, -0.4, 0.8});
    Vec3d v2 = cross(p.p2, {-0.7, 0.2, 0.1});
    double vals[4];
    for (int ci = 0; ci < 4; ++ci) {
      const ChartId chart = ChartId::from_index(ci);
      const Vec4d u = point_to_chart(p, chart);
      const Vec4d comp = tangent_to_chart(chart, u, {v1, v2});
      const auto g = metric_components(spec, chart, u).value();
      Eigen::Vector4d c(comp[0], comp[1], comp[2], comp[3]);
      vals[ci] = c.dot(g * c);
    }
    for (int ci = 1; ci < 4; ++ci)
      REQUIRE_THAT(vals[ci], Catch::Matchers::WithinAbs(vals[0], 1e-10));
  }
}
