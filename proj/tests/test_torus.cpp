#include <catch2/catch_amalgamated.hpp>
#include <cmath>

#include "biorth/torus.hpp"

using namespace biorth;

namespace {
const TorusFrame kTf{{1, 0, 0}, {0, 1, 0}};
constexpr double kT = 1.0;
}

TEST_CASE("induced torus metric is the constant closed form") {
  // h_uu = h_vv = (1+t)/(1+2t), h_uv = -t/(1+2t), independent of (u,v).
  const double expect_diag = (1.0 + kT) / (1.0 + 2.0 * kT);
  const double expect_off = -kT / (1.0 + 2.0 * kT);
  for (double u : {0.0, 0.7, 2.9})
    for (double v : {0.1, 1.9}) {
      const auto h = torus_induced_jets(kTf, kT, u, v);
      REQUIRE_THAT(h[0][0].v, Catch::Matchers::WithinAbs(expect_diag, 1e-13));
      REQUIRE_THAT(h[1][1].v, Catch::Matchers::WithinAbs(expect_diag, 1e-13));
      REQUIRE_THAT(h[0][1].v, Catch::Matchers::WithinAbs(expect_off, 1e-13));
      for (int k = 0; k < 2; ++k)
        for (int i = 0; i < 2; ++i)
          for (int j = 0; j < 2; ++j)
            REQUIRE_THAT(h[i][j].grad(k), Catch::Matchers::WithinAbs(0.0, 1e-12));
    }
}

TEST_CASE("torus is flat and totally geodesic under g_t") {
  for (double u : {0.0, 1.1, 4.4})
    for (double v : {0.3, 2.2}) {
      REQUIRE(std::abs(gauss_curvature_2d(torus_induced_jets(kTf, kT, u, v))) < 1e-7);
      REQUIRE(torus_ii_norm(kTf, kT, u, v) < 1e-6);
    }
}

TEST_CASE("gauss-bonnet balance of the first variation") {
  const GaussBonnetResult r = gauss_bonnet_torus(kTf, kT, kDefaultRin, kDefaultRout, 32, 192);
  REQUIRE(std::abs(r.integral) < 1e-3);
  REQUIRE_THAT(r.integrand_origin, Catch::Matchers::WithinAbs(1.0, 1e-6));
  REQUIRE(r.integrand_min < -1e-4);    // negative somewhere
  REQUIRE(r.max_ii_norm < 1e-6);
  REQUIRE(r.max_gauss < 1e-7);
}
