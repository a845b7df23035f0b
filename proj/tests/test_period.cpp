#include <doctest.h>

#include <cmath>

#include "skf/errors.hpp"
#include "skf/period.hpp"
#include "skf/weierstrass.hpp"

using namespace skf;

// Frozen oracle values (computed independently by two different routes:
// bisection on the half-line residual and on the compact J-integral pair).
namespace {
constexpr double kRho1 = 1.7877246433717;
constexpr double kBetaPlusHalfPi = 1.85726755543;
constexpr double kBetaMinusHalfPi = 1.28432509816;
}  // namespace

TEST_CASE("symmetric surface") {
    const double r = solve_rho1();
    CHECK(r == doctest::Approx(kRho1).epsilon(1e-12));
    CHECK(std::abs(solve_rho1_from_j() - r) < 1e-11);
    CHECK(std::abs(j_residual(r)) < 1e-10);
    const ModuliPoint m(pi / 2, pi / 2, r);
    CHECK(std::abs(residual_x1(m)) < 1e-10);
    CHECK(std::abs(residual_x2(m)) < 1e-10);
    // The (-) half-line form equals pi sqrt(2) there: half of it is pi / sqrt(2).
    const auto d = derive_moduli(m);
    CHECK(0.5 * halfline_integral(m, d, -1).value == doctest::Approx(pi / std::sqrt(2.0)).epsilon(1e-10));

    SUBCASE("uniqueness structure of the J pair") {
        double prev = -1e300;
        for (double rho = 1.05; rho < 2.4; rho += 0.05) {
            const auto [j1, j2] = j_values(rho);
            CHECK(j1 - j2 > prev);
            prev = j1 - j2;
        }
        // J2 decreases; J1 is not monotone (it peaks in the interior).
        CHECK(j_values(1.2).second > j_values(2.0).second);
        CHECK(j_values(1.65).first > j_values(1.2).first);
        CHECK(j_values(1.65).first > j_values(2.4).first);
    }
}

TEST_CASE("residual identities") {
    SUBCASE("circle form is -1/2 of the half-line form") {
        for (const auto& [a, b, r] : {std::tuple{1.0, 2.0, 1.5}, std::tuple{0.7, 0.4, 2.5}, std::tuple{1.4, 1.6, 1.2}}) {
            const ModuliPoint m(a, b, r);
            CHECK(residual_x1(m) == doctest::Approx(-2.0 * residual_x1_circle(m)).epsilon(1e-8));
            CHECK(residual_x2(m) == doctest::Approx(-2.0 * residual_x2_circle(m)).epsilon(1e-8));
        }
    }
    SUBCASE("reflection swaps the two residuals") {
        const ModuliPoint m(1.1, 2.2, 1.9), r(pi - 1.1, pi - 2.2, 1.9);
        CHECK(residual_x2(m) == doctest::Approx(residual_x1(r)).epsilon(1e-10));
    }
    SUBCASE("unit-circle arcs at rho = 1") {
        const double a = 1.0, b = 1.8;
        const auto I = arc_integrals(a, b);
        CHECK(residual_x1_circle(ModuliPoint(a, b, 1.0)) == doctest::Approx(0.5 * (I.I2 - I.I1)).epsilon(1e-9));
        CHECK_THROWS_AS(residual_x1_circle(ModuliPoint(1.0, 0.5, 1.0)), PoleOnPath);
        CHECK_THROWS_AS(residual_x1(ModuliPoint(1.0, 0.0, 2.0)), BetaDegenerate);
    }
}

TEST_CASE("zero curves at the symmetric angle") {
    CHECK(beta_plus(pi / 2) == doctest::Approx(kBetaPlusHalfPi).epsilon(1e-10));
    CHECK(beta_minus(pi / 2) == doctest::Approx(kBetaMinusHalfPi).epsilon(1e-10));
    CHECK(beta_minus(pi / 3) == doctest::Approx(0.5522).epsilon(1e-3));
    CHECK_THROWS_AS(beta_minus(0.5), NoBracket);

    const ZeroCurve cp = trace_zero_curve(CurveId::Cplus, pi / 2);
    const ZeroCurve cm = trace_zero_curve(CurveId::Cminus, pi / 2);
    REQUIRE(cp.exists);
    REQUIRE(cm.exists);
    CHECK(cp.samples.front().rho == 1.0);
    CHECK(cp.samples.front().beta == doctest::Approx(kBetaPlusHalfPi));
    CHECK(cp.stop_reason.find("beta boundary") != std::string::npos);
    for (const auto& s : cp.samples) CHECK(std::abs(s.residual) < 1e-8);
    // The two curves are reflections of each other through beta = pi/2.
    for (std::size_t k = 0; k < std::min(cp.samples.size(), cm.samples.size()); ++k) {
        CHECK(cp.samples[k].beta + cm.samples[k].beta == doctest::Approx(pi).epsilon(1e-6));
        CHECK(cp.samples[k].rho == doctest::Approx(cm.samples[k].rho).epsilon(1e-6));
    }
    const auto pts = intersect_curves(cp, cm);
    REQUIRE(pts.size() == 1);
    CHECK(pts[0].beta == doctest::Approx(pi / 2).epsilon(1e-8));
    CHECK(pts[0].rho == doctest::Approx(kRho1).epsilon(1e-8));
}

TEST_CASE("zero curves off the symmetric angle") {
    const auto cp = trace_zero_curve(CurveId::Cplus, 1.4);
    const auto cm = trace_zero_curve(CurveId::Cminus, 1.4);
    const auto pts = intersect_curves(cp, cm);
    REQUIRE(pts.size() == 1);
    CHECK(pts[0].beta == doctest::Approx(1.2908).epsilon(1e-3));
    CHECK(pts[0].rho == doctest::Approx(1.7829).epsilon(1e-3));
    CHECK(std::abs(pts[0].residual.x1) < 1e-8);
    CHECK(std::abs(pts[0].residual.x2) < 1e-8);

    const auto small_p = trace_zero_curve(CurveId::Cplus, 0.05);
    const auto small_m = trace_zero_curve(CurveId::Cminus, 0.05);
    CHECK(small_p.exists);
    CHECK_FALSE(small_m.exists);
    CHECK(intersect_curves(small_p, small_m).empty());
    CHECK_THROWS_AS(intersect_curves(cp, small_p), InvalidArgument);
}

TEST_CASE("point solver") {
    const auto p = solve_point(pi / 2, {1.5, 1.7});
    CHECK(p.beta == doctest::Approx(pi / 2).epsilon(1e-9));
    CHECK(p.rho == doctest::Approx(kRho1).epsilon(1e-9));
    CHECK(std::abs(p.circle_x1) < 1e-8);
    CHECK(std::abs(p.circle_x2) < 1e-8);
}

TEST_CASE("small-alpha lower-bound quantity") {
    // The quantity approaches pi/2 (not pi) as alpha -> 0.
    const double a = liminf_check(0.05, 1.3);
    const double b = liminf_check(0.02, 1.3);
    CHECK(a == doctest::Approx(pi / 2).epsilon(2e-3));
    CHECK(std::abs(b - pi / 2) < std::abs(a - pi / 2));
    CHECK(liminf_check(0.02, 5.0) == doctest::Approx(pi / 2).epsilon(2e-3));
}
