#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "loglap/grid.hpp"
#include "loglap/rng.hpp"

using namespace loglap;

TEST_CASE("build_grid basic geometry") {
  Grid g = build_grid(0.0, 1.0, 3);
  CHECK(g.h == doctest::Approx(0.25).epsilon(1e-15));
  REQUIRE(g.nodes.size() == 3);
  CHECK(g.nodes[0] == doctest::Approx(0.25).epsilon(1e-15));
  CHECK(g.nodes[1] == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(g.nodes[2] == doctest::Approx(0.75).epsilon(1e-15));

  Grid single = build_grid(-1.0, 1.0, 1);
  CHECK(single.h == doctest::Approx(1.0));
  REQUIRE(single.nodes.size() == 1);
  CHECK(single.nodes[0] == doctest::Approx(0.0));
}

TEST_CASE("build_grid rejects bad input") {
  CHECK_THROWS_AS(build_grid(0.0, 1.0, 0), std::invalid_argument);
  CHECK_THROWS_AS(build_grid(1.0, 0.0, 4), std::invalid_argument);
  CHECK_THROWS_AS(build_grid(0.0, 0.0, 4), std::invalid_argument);
  CHECK_THROWS_AS(build_grid(0.0, std::nan(""), 4), std::invalid_argument);
}

TEST_CASE("grid nodes strictly increasing, refinement halves h") {
  Grid g = build_grid(-0.5, 1.5, 17);
  for (int i = 1; i < g.n; ++i) CHECK(g.nodes[i] > g.nodes[i - 1]);
  Grid f = refine_grid(g);
  CHECK(f.n == 2 * g.n + 1);
  CHECK(f.a == g.a);
  CHECK(f.b == g.b);
  CHECK(f.h == doctest::Approx(0.5 * g.h).epsilon(1e-14));
}

TEST_CASE("lp_norm values and homogeneity") {
  Grid g = build_grid(0.0, 1.0, 3);
  GridFunction zero(3, 0.0);
  CHECK(lp_norm(g, zero, 2.0) == 0.0);

  GridFunction u{0.0, 2.0, 0.0};
  CHECK(lp_norm(g, u, 2.0) == doctest::Approx(1.0).epsilon(1e-15));  // (0.25*4)^(1/2)

  Rng rng(7);
  GridFunction v(3);
  for (auto& x : v) x = rng.normal();
  for (double p : {1.5, 2.0, 3.0}) {
    GridFunction v3 = v;
    for (auto& x : v3) x *= 3.0;
    CHECK(lp_norm(g, v3, p) == doctest::Approx(3.0 * lp_norm(g, v, p)).epsilon(1e-12));
  }
  CHECK_THROWS_AS(lp_norm(g, u, 1.0), std::invalid_argument);
}

TEST_CASE("lp_norm triangle inequality on random pairs") {
  Grid g = build_grid(0.0, 1.0, 24);
  Rng rng(99);
  for (int trial = 0; trial < 20; ++trial) {
    GridFunction u(24), v(24), s(24);
    for (int i = 0; i < 24; ++i) {
      u[i] = rng.normal();
      v[i] = rng.normal();
      s[i] = u[i] + v[i];
    }
    for (double p : {1.5, 2.0, 3.0}) {
      CHECK(lp_norm(g, s, p) <= lp_norm(g, u, p) + lp_norm(g, v, p) + 1e-12);
    }
  }
}
