#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "normgeo/derivatives.hpp"

using namespace normgeo;

namespace {

std::vector<Space> closed_battery() {
  return {
      Space::lp(1, 4),
      Space::lp(1.5, 3),
      Space::lp(2, 4),
      Space::lp(3, 4),
      Space::lp_inf(4),
      Space::sum1(Space::lp(1, 2), Space::lp_inf(2)),
      Space::sum1(Space::lp(2, 2), Space::sum1(Space::lp(1, 1), Space::lp(3, 2))),
  };
}

}  // namespace

TEST_CASE("closed derivatives on hand-checked inputs") {
  {
    vec x{1, 0}, y{0, 1};
    auto r = rho_closed(Space::lp(2, 2), x, y);
    CHECK(r.rho_plus == doctest::Approx(0.0));
    CHECK(r.rho_minus == doctest::Approx(0.0));
  }
  {
    vec x{3, 4}, y{1, 0};
    auto r = rho_closed(Space::lp(2, 2), x, y);
    CHECK(r.rho_plus == doctest::Approx(0.6).epsilon(1e-13));
    CHECK(r.rho_minus == doctest::Approx(0.6).epsilon(1e-13));
  }
  {
    // both coordinates attain the max, with opposite pull
    vec x{1, 1}, y{1, -1};
    auto r = rho_closed(Space::lp_inf(2), x, y);
    CHECK(r.rho_plus == doctest::Approx(1.0));
    CHECK(r.rho_minus == doctest::Approx(-1.0));
  }
  {
    // unique max coordinate, direction flat there
    vec x{2, 1}, y{0, 5};
    auto r = rho_closed(Space::lp_inf(2), x, y);
    CHECK(r.rho_plus == doctest::Approx(0.0));
    CHECK(r.rho_minus == doctest::Approx(0.0));
  }
  {
    // 1-norm: signed part cancels, the zero coordinate swings +-3
    vec x{1, -2, 0}, y{1, 1, -3};
    auto r = rho_closed(Space::lp(1, 3), x, y);
    CHECK(r.rho_plus == doctest::Approx(3.0));
    CHECK(r.rho_minus == doctest::Approx(-3.0));
  }
  {
    Space s = Space::sum1(Space::lp(2, 2), Space::lp(1, 2));
    vec x{1, 0, 1, 0}, y{-1, 0, -1, 0};
    auto r = rho_closed(s, x, y);
    CHECK(r.rho_plus == doctest::Approx(-2.0));
    CHECK(r.rho_minus == doctest::Approx(-2.0));
  }
  {
    // zero child contributes +-||y_child||
    Space s = Space::sum1(Space::lp(2, 2), Space::lp(2, 2));
    vec x{1, 0, 0, 0}, y{0, 0, 3, 4};
    auto r = rho_closed(s, x, y);
    CHECK(r.rho_plus == doctest::Approx(5.0));
    CHECK(r.rho_minus == doctest::Approx(-5.0));
  }
}

TEST_CASE("availability and errors") {
  CHECK(rho_closed_available(Space::lp(2, 3)));
  CHECK(rho_closed_available(Space::sum1(Space::lp(1, 2), Space::lp_inf(2))));
  CHECK_FALSE(rho_closed_available(Space::prodmax(Space::lp(2, 2), Space::lp(2, 2))));
  CHECK_FALSE(rho_closed_available(
      Space::sum1(Space::lp(2, 2), Space::prodmax(Space::lp(2, 1), Space::lp(2, 1)))));

  vec x{1, 0}, y{0, 1}, z{0, 0};
  CHECK_THROWS_AS(rho_closed(Space::prodmax(Space::lp(2, 1), Space::lp(2, 1)), x, y),
                  input_error);
  CHECK_THROWS_AS(rho_closed(Space::lp(2, 2), z, y), domain_error);
  vec bad{1, 2, 3};
  CHECK_THROWS_AS(rho_closed(Space::lp(2, 2), bad, y), input_error);

  // derivative at the origin is +-||y|| by convention, numeric route only
  auto r = rho_numeric(Space::lp(2, 2), z, vec{3, 4});
  CHECK(r.rho_plus == doctest::Approx(5.0));
  CHECK(r.rho_minus == doctest::Approx(-5.0));

  auto ra = rho_auto(Space::prodmax(Space::lp(2, 2), Space::lp(2, 2)),
                     vec{1, 0, 0.5, 0}, vec{0, 1, 0, 0});
  CHECK(ra.method == RhoResult::Method::numeric);
}

TEST_CASE("closed and numeric routes agree") {
  for (const Space& s : closed_battery()) {
    CAPTURE(s.describe());
    auto xs = sphere_sample(s, 101, 60);
    auto ys = sphere_sample(s, 202, 60);
    for (size_t i = 0; i < xs.size(); ++i) {
      auto rc = rho_closed(s, xs[i], ys[i]);
      auto rn = rho_numeric(s, xs[i], ys[i]);
      CHECK(std::abs(rc.rho_plus - rn.rho_plus) <= 1e-8);
      CHECK(std::abs(rc.rho_minus - rn.rho_minus) <= 1e-8);
      CHECK(!rn.step_trace.empty());
    }
  }
  // prodmax has no closed form; still sanity-check numeric against geometry
  Space pm = Space::prodmax(Space::lp(2, 2), Space::lp(2, 2));
  auto r = rho_numeric(pm, vec{3, 4, 1, 0}, vec{1, 0, 0, 1});
  // left factor dominates (5 > 1): derivative is that of the l2 child
  CHECK(r.rho_plus == doctest::Approx(0.6).epsilon(1e-8));
  CHECK(r.rho_minus == doctest::Approx(0.6).epsilon(1e-8));
}

TEST_CASE("derivative laws") {
  for (const Space& s : closed_battery()) {
    CAPTURE(s.describe());
    auto xs = sphere_sample(s, 303, 40);
    auto ys = sphere_sample(s, 404, 40);
    for (size_t i = 0; i < xs.size(); ++i) {
      auto r = rho_closed(s, xs[i], ys[i]);
      CHECK(r.rho_minus <= r.rho_plus + 1e-12);

      // rho(x, x) = ||x|| on both sides
      auto rx = rho_closed(s, xs[i], xs[i]);
      CHECK(rx.rho_plus == doctest::Approx(1.0).epsilon(1e-10));
      CHECK(rx.rho_minus == doctest::Approx(1.0).epsilon(1e-10));

      // positive scaling: invariant in x, linear in y
      vec ax(s.dim()), by(s.dim());
      for (int j = 0; j < s.dim(); ++j) {
        ax[j] = 2.5 * xs[i][j];
        by[j] = 0.75 * ys[i][j];
      }
      auto rs = rho_closed(s, ax, by);
      CHECK(rs.rho_plus == doctest::Approx(0.75 * r.rho_plus).epsilon(1e-10));
      CHECK(rs.rho_minus == doctest::Approx(0.75 * r.rho_minus).epsilon(1e-10));

      // reflection swaps the sides
      vec neg(s.dim());
      for (int j = 0; j < s.dim(); ++j) neg[j] = -ys[i][j];
      auto rrf = rho_closed(s, xs[i], neg);
      CHECK(rrf.rho_plus == doctest::Approx(-r.rho_minus).epsilon(1e-10));
      CHECK(rrf.rho_minus == doctest::Approx(-r.rho_plus).epsilon(1e-10));

      // subadditivity of the upper derivative in the direction slot
      auto rsum_y = ys[(i + 1) % ys.size()];
      vec ysum(s.dim());
      for (int j = 0; j < s.dim(); ++j) ysum[j] = ys[i][j] + rsum_y[j];
      auto ra = rho_closed(s, xs[i], ysum);
      auto rb = rho_closed(s, xs[i], rsum_y);
      CHECK(ra.rho_plus <= r.rho_plus + rb.rho_plus + 1e-10);

      // |rho| is bounded by ||y||
      CHECK(std::abs(r.rho_plus) <= 1.0 + 1e-10);
      CHECK(std::abs(r.rho_minus) <= 1.0 + 1e-10);
    }
  }
}

TEST_CASE("smooth p has equal one-sided derivatives") {
  for (double p : {1.5, 2.0, 3.0, 4.0}) {
    Space s = Space::lp(p, 4);
    auto xs = sphere_sample(s, 505, 50);
    auto ys = sphere_sample(s, 606, 50);
    for (size_t i = 0; i < xs.size(); ++i) {
      auto r = rho_closed(s, xs[i], ys[i]);
      CHECK(r.rho_plus == doctest::Approx(r.rho_minus).epsilon(1e-13));
    }
  }
}

TEST_CASE("sign conditions on hand-checked inputs") {
  {
    // disjoint supports in the 1-norm: both conditions hold
    auto c = rho_sign_conditions(Space::lp(1, 2), vec{1, 0}, vec{0, 1});
    CHECK(c.plus_nonneg);
    CHECK(c.minus_nonpos);
  }
  {
    auto c = rho_sign_conditions(Space::lp_inf(2), vec{1, 1}, vec{1, -1});
    CHECK(c.plus_nonneg);
    CHECK(c.minus_nonpos);
  }
  {
    auto c = rho_sign_conditions(Space::lp(2, 2), vec{3, 4}, vec{1, 0});
    CHECK(c.plus_nonneg);
    CHECK_FALSE(c.minus_nonpos);
  }
  {
    auto c = rho_sign_conditions(Space::lp(2, 2), vec{3, 4}, vec{-1, 0});
    CHECK_FALSE(c.plus_nonneg);
    CHECK(c.minus_nonpos);
  }
  CHECK_THROWS_AS(
      rho_sign_conditions(Space::sum1(Space::lp(1, 1), Space::lp(1, 1)),
                          vec{1, 0}, vec{0, 1}),
      input_error);
  CHECK_THROWS_AS(rho_sign_conditions(Space::lp(2, 2), vec{0, 0}, vec{1, 0}),
                  domain_error);
}

TEST_CASE("sign conditions match derivative signs") {
  for (Space s : {Space::lp(1, 4), Space::lp(2, 4), Space::lp(3, 4), Space::lp_inf(4)}) {
    CAPTURE(s.describe());
    auto xs = sphere_sample(s, 707, 150);
    auto ys = sphere_sample(s, 808, 150);
    for (size_t i = 0; i < xs.size(); ++i) {
      auto r = rho_closed(s, xs[i], ys[i]);
      auto c = rho_sign_conditions(s, xs[i], ys[i]);
      // away from the boundary the literal conditions and the derivative
      // signs must coincide; near zero both computations are float-fragile
      if (std::abs(r.rho_plus) > 1e-10)
        CHECK(c.plus_nonneg == (r.rho_plus > 0));
      if (std::abs(r.rho_minus) > 1e-10)
        CHECK(c.minus_nonpos == (r.rho_minus < 0));
    }
  }
}
