#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "paralayer/geometry.hpp"

using namespace paralayer;

namespace {

// closed-form arc length of z = x^2 from the origin
double arc_len_parabola(double x) {
  return 0.5 * x * std::sqrt(1 + 4 * x * x) + 0.25 * std::asinh(2 * x);
}

// invert it by bisection; independent of the ODE solver under test
double phi_oracle(double s) {
  double lo = 0, hi = std::max(2.0, std::sqrt(s) + 1);
  for (int i = 0; i < 200; ++i) {
    const double mid = (lo + hi) / 2;
    (arc_len_parabola(mid) < s ? lo : hi) = mid;
  }
  return (lo + hi) / 2;
}

MeridianGeometry<double> reference_geometry(double s_max = 1e4, Eigen::Index n = 4000) {
  return MeridianGeometry<double>::build(LayerProfile<double>::make(2.0, 1.0), s_max, n);
}

}  // namespace

TEST_CASE("profile validation and cap smoothness") {
  CHECK_THROWS_AS(LayerProfile<double>::make(1.0, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(LayerProfile<double>::make(2.0, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(LayerProfile<double>::make(2.0, 1.0, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(LayerProfile<double>::make(2.0, 1.0, 0.0, CapKind::QuinticBlend),
                  std::invalid_argument);

  const auto pr = LayerProfile<double>::make(3.0, 0.7, 2.0, CapKind::QuinticBlend);
  CHECK(pr.f(0.0) == 0.0);
  CHECK(pr.df(0.0) == 0.0);
  // C^2 across the blend radius
  const double e = 1e-7;
  CHECK(pr.f(2.0 - e) == doctest::Approx(pr.f(2.0 + e)).epsilon(1e-6));
  CHECK(pr.df(2.0 - e) == doctest::Approx(pr.df(2.0 + e)).epsilon(1e-5));
  CHECK(pr.d2f(2.0 - e) == doctest::Approx(pr.d2f(2.0 + e)).epsilon(1e-4));
  CHECK(pr.f(3.0) == doctest::Approx(0.7 * 27.0));
}

TEST_CASE("arc length matches the parabola closed form") {
  const auto g = reference_geometry();
  CHECK(g.phi(arc_len_parabola(1.0)) == doctest::Approx(1.0).epsilon(1e-10));
  for (int j = 1; j <= 100; ++j) {
    const double x = 0.05 * j;
    CHECK(std::abs(g.phi(arc_len_parabola(x)) - x) <= 1e-8);
  }
}

TEST_CASE("phi is monotone with speed in (0,1]") {
  const auto g = reference_geometry(100.0, 600);
  for (Eigen::Index i = 0; i + 1 < g.arc.s.size(); ++i)
    CHECK(g.arc.phi(i) < g.arc.phi(i + 1));
  for (Eigen::Index i = 0; i < g.arc.s.size(); ++i) {
    CHECK(g.arc.dphi(i) > 0.0);
    CHECK(g.arc.dphi(i) <= 1.0);
  }
}

TEST_CASE("stored derivatives are consistent with finite differences of phi") {
  const auto g = reference_geometry(100.0, 600);
  const double d = 1e-3;
  for (double s : {0.5, 1.0, 2.0, 5.0, 20.0, 80.0}) {
    const double fd =
        (-g.phi(s + 2 * d) + 8 * g.phi(s + d) - 8 * g.phi(s - d) + g.phi(s - 2 * d)) / (12 * d);
    CHECK(fd == doctest::Approx(g.dphi(s)).epsilon(1e-8));
    const double fd2 = (g.phi(s + d) - 2 * g.phi(s) + g.phi(s - d)) / (d * d);
    CHECK(fd2 == doctest::Approx(g.ddphi(s)).epsilon(1e-5));
  }
}

TEST_CASE("beyond-grid evaluation continues the same curve") {
  const auto g = reference_geometry(100.0, 600);
  for (double s : {100.0, 101.0, 150.0, 400.0, 2500.0}) {
    CHECK(g.phi(s) == doctest::Approx(phi_oracle(s)).epsilon(1e-10));
  }
  CHECK_THROWS_AS(g.phi(-1.0), std::domain_error);
}

TEST_CASE("curvature chain against the bisection oracle") {
  const auto g = reference_geometry();
  const double ph = phi_oracle(1.0);
  const double dph = 1.0 / std::sqrt(1 + 4 * ph * ph);
  CHECK(g.gamma(1.0) == doctest::Approx(2 * dph * dph * dph).epsilon(1e-10));
  // derivative columns against finite differences of gamma
  const double d = 1e-4;
  const double fd = (g.gamma(1.0 + d) - g.gamma(1.0 - d)) / (2 * d);
  CHECK(fd == doctest::Approx(g.dgamma(1.0)).epsilon(1e-6));
  const double fd2 = (g.gamma(1.0 + d) - 2 * g.gamma(1.0) + g.gamma(1.0 - d)) / (d * d);
  CHECK(fd2 == doctest::Approx(g.ddgamma(1.0)).epsilon(1e-4));
}

TEST_CASE("principal curvatures at the origin and their combinations") {
  const auto g = reference_geometry(50.0, 400);
  CHECK(g.kappa1(0.0) == doctest::Approx(-2.0).epsilon(1e-9));
  CHECK(g.gamma(0.0) == doctest::Approx(2.0).epsilon(1e-9));
  const auto tab = curvature_tables(g);
  for (Eigen::Index i = 0; i < tab.s.size(); i += 37) {
    CHECK(tab.kappa2(i) == -tab.gamma(i));
    CHECK(tab.mean_h(i) == doctest::Approx((tab.kappa1(i) + tab.kappa2(i)) / 2));
    CHECK(tab.gauss_k(i) == doctest::Approx(tab.kappa1(i) * tab.kappa2(i)));
  }
}

TEST_CASE("tail limits of the arc-length and curvature chains") {
  const auto g = reference_geometry(1e6, 4000);
  const auto rep = tail_limits(g);
  REQUIRE(rep.rows.size() == 7);
  CHECK_FALSE(rep.window_short);
  for (const auto& row : rep.rows) {
    INFO(row.name);
    CHECK(row.rel_err <= 0.02);
  }
  // frozen closed forms at alpha=2, k=1
  CHECK(rep.rows[4].limit == doctest::Approx(0.25));     // gamma
  CHECK(rep.rows[5].limit == doctest::Approx(-0.375));   // dgamma
  CHECK(rep.rows[6].limit == doctest::Approx(0.9375));   // ddgamma

  const auto small = reference_geometry(50.0, 400);
  CHECK(tail_limits(small).window_short);
}

TEST_CASE("xi and zeta at the reference cut") {
  const auto g = reference_geometry();
  const auto x20 = xi_zeta(g, 0.3, 20.0);
  // frozen from an independent dense-grid evaluation
  CHECK(x20.xi == doctest::Approx(0.0680958313417844).epsilon(1e-9));
  const double expect_zeta = std::pow((1 - x20.xi) / (1 + x20.xi), 2);
  CHECK(x20.zeta == doctest::Approx(expect_zeta).epsilon(1e-14));
  // xi decreases along the tail
  const auto x5 = xi_zeta(g, 0.3, 5.0);
  CHECK(x5.xi > x20.xi);
  CHECK_THROWS_AS(xi_zeta(g, 0.3, -1.0), std::domain_error);
}

TEST_CASE("curvature-limited half-width and the injectivity gate") {
  const auto g = reference_geometry(50.0, 400);
  CHECK(rho_margin(g) == doctest::Approx(0.5).epsilon(1e-9));
  const auto ok = injectivity_check(g, 0.2, 200, 16);
  CHECK(ok.ok);
  CHECK_FALSE(ok.witness.has_value());
  const auto bad = injectivity_check(g, 0.6, 200, 16);
  CHECK_FALSE(bad.ok);
  CHECK(bad.rho == doctest::Approx(0.5).epsilon(1e-9));
}

TEST_CASE("solver rejects invalid arguments") {
  const auto pr = LayerProfile<double>::make(2.0, 1.0);
  CHECK_THROWS_AS(solve_arc_length(pr, -1.0, 100), std::invalid_argument);
  CHECK_THROWS_AS(solve_arc_length(pr, 10.0, Eigen::Index(1)), std::invalid_argument);
  CHECK_THROWS_AS(solve_arc_length(pr, 10.0, 100, 0.0), std::invalid_argument);
}
