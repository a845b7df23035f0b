#include <doctest.h>

#include <random>
#include <tuple>

#include "skf/errors.hpp"
#include "skf/torus.hpp"

using namespace skf;

TEST_CASE("moduli validation") {
    CHECK_THROWS_AS(ModuliPoint(0.0, 1.0, 2.0), InvalidArgument);
    CHECK_THROWS_AS(ModuliPoint(pi, 1.0, 2.0), InvalidArgument);
    CHECK_THROWS_AS(ModuliPoint(1.0, -0.1, 2.0), InvalidArgument);
    CHECK_THROWS_AS(ModuliPoint(1.0, 1.0, 0.9), InvalidArgument);
    CHECK_THROWS_AS(ModuliPoint(pi / 3, pi / 3, 1.0), DegenerateModuli);
    CHECK_NOTHROW(ModuliPoint(pi / 3, 0.0, 1.0));
}

TEST_CASE("derived moduli at the documented points") {
    auto d = derive_moduli({pi / 2, pi / 2, 2.0});
    CHECK(d.kappa == doctest::Approx(1.5).epsilon(1e-14));
    CHECK(d.omega == doctest::Approx(pi / 4).epsilon(1e-14));

    d = derive_moduli({pi / 3, pi / 2, 1.0});
    CHECK(d.kappa == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(d.omega == doctest::Approx(pi / 2).epsilon(1e-14));

    d = derive_moduli({pi / 2, pi / 3, 1.0});
    CHECK(d.kappa == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(std::abs(d.omega) < 1e-14);
}

TEST_CASE("derived moduli reproduce the defining complex number (property)") {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> ua(0.01, pi - 0.01), ub(0.0, pi), ur(1.0, 20.0);
    for (int i = 0; i < 10000; ++i) {
        const ModuliPoint m(ua(rng), ub(rng), ur(rng));
        const auto d = derive_moduli(m);
        const cplx rhs = moduli_rhs(m);
        REQUIRE(d.kappa > 0.0);
        REQUIRE(d.omega >= 0.0);
        REQUIRE(d.omega <= pi / 2 + 1e-15);
        REQUIRE(std::abs(d.kappa * std::polar(1.0, 2.0 * d.omega) - rhs) <= 1e-12 * std::abs(rhs));
    }
    for (double rho : {1.01, 2.0, 7.5}) CHECK(derive_moduli({pi / 2, pi / 2, rho}).omega == doctest::Approx(pi / 4));
}

TEST_CASE("principal root and sheets") {
    CHECK(std::abs(u_principal(1.0, pi / 2) - std::sqrt(2.0)) < 1e-15);
    CHECK(std::abs(u_principal(std::polar(1.0, 0.7), 0.7)) < 1e-7);
    CHECK(std::abs(u_principal(-1.0, pi / 2) - cplx(0.0, std::sqrt(2.0))) < 1e-15);
    CHECK(std::abs(u_principal(1.0, pi / 2, -1) + std::sqrt(2.0)) < 1e-15);

    const cplx z(0.3, -1.7);
    const cplx u = u_principal(z, 1.1, -1);
    CHECK(std::abs(u * u - radicand(z, 1.1)) <= 1e-10 * (1 + std::abs(z) + 1 / std::abs(z)));
    CHECK(sheet_of(z, u, 1.1) == -1);
}

namespace {

std::vector<cplx> circle(cplx c, double r, int n) {
    std::vector<cplx> w;
    for (int k = 0; k <= n; ++k) w.push_back(c + std::polar(r, 2.0 * pi * k / n));
    return w;
}

}  // namespace

TEST_CASE("continuation along paths") {
    const double alpha = 1.0;
    const cplx b = std::polar(1.0, alpha);

    SUBCASE("constant path keeps u") {
        PathSpec p;
        p.waypoints = {1.0};
        const TorusPoint start{1.0, u_principal(1.0, alpha), 1};
        const auto out = continue_u(p, start, alpha);
        CHECK(std::abs(out.back().u - start.u) < 1e-15);
    }
    SUBCASE("small loop around one branch point flips the sign") {
        PathSpec p;
        p.waypoints = circle(b, 0.01, 16);
        const cplx z0 = p.waypoints.front();
        const TorusPoint start{z0, u_principal(z0, alpha), 1};
        const auto out = continue_u(p, start, alpha);
        CHECK(std::abs(out.back().u + start.u) < 1e-9 * std::abs(start.u));
    }
    SUBCASE("loop around both branch points returns") {
        PathSpec p;
        // Ellipse enclosing e^{+-i alpha} but neither 0 nor the point at infinity.
        for (int k = 0; k <= 24; ++k) {
            const double t = 2.0 * pi * k / 24;
            p.waypoints.push_back(cplx(std::cos(alpha) + 0.3 * std::cos(t), 1.3 * std::sin(t)));
        }
        const cplx z0 = p.waypoints.front();
        const TorusPoint start{z0, u_principal(z0, alpha), 1};
        const auto out = continue_u(p, start, alpha);
        CHECK(std::abs(out.back().u - start.u) < 1e-9 * std::abs(start.u));
    }
    SUBCASE("endpoint is stable under path refinement") {
        PathSpec p;
        p.waypoints = {cplx(2.0, 0.0), cplx(1.5, 1.5), cplx(-0.5, 2.0), cplx(-2.0, 0.3)};
        PathSpec q = p;
        q.waypoints.clear();
        for (std::size_t k = 0; k + 1 < p.waypoints.size(); ++k) {
            q.waypoints.push_back(p.waypoints[k]);
            q.waypoints.push_back(0.5 * (p.waypoints[k] + p.waypoints[k + 1]));
        }
        q.waypoints.push_back(p.waypoints.back());
        const TorusPoint start{2.0, u_principal(2.0, alpha), 1};
        const auto a = continue_u(p, start, alpha).back();
        const auto c = continue_u(q, start, alpha).back();
        CHECK(std::abs(a.u - c.u) < 1e-9);
        CHECK(std::abs(a.u * a.u - radicand(a.z, alpha)) < 1e-10 * (1 + std::abs(a.z) + 1 / std::abs(a.z)));
    }
    SUBCASE("path through a branch point is ambiguous") {
        PathSpec p;
        p.waypoints = {b - 0.2, b + 0.2};
        const cplx z0 = p.waypoints.front();
        CHECK_THROWS_AS(continue_u(p, {z0, u_principal(z0, alpha), 1}, alpha), BranchAmbiguity);
    }
}

TEST_CASE("branch tracker agrees with step continuation") {
    const double alpha = 0.9;
    std::vector<cplx> samples;
    for (int k = 0; k <= 20; ++k) samples.push_back(cplx(1.5 - 0.1 * k, 0.2 + 0.05 * k));
    const BranchTracker br(alpha, samples, samples.front(), u_principal(samples.front(), alpha, -1));
    PathSpec p;
    p.waypoints = samples;
    const auto out = continue_u(p, {samples.front(), u_principal(samples.front(), alpha, -1), -1}, alpha);
    CHECK(std::abs(br(samples.back()) - out.back().u) < 1e-12);
}

TEST_CASE("points where the Gauss map equals one") {
    auto [a, b] = lambda_pm(2.0 - 2.0 * std::cos(1.0), 1.0);
    CHECK(std::abs(a - 1.0) < 1e-7);
    CHECK(std::abs(b - 1.0) < 1e-7);

    const double kappa = 3.0 + 1.0 / 3.0 - 2.0 * std::cos(pi / 4);
    std::tie(a, b) = lambda_pm(kappa, pi / 4);
    CHECK(std::abs(a - 3.0) < 1e-12);
    CHECK(std::abs(b - 1.0 / 3.0) < 1e-12);

    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> uk(0.01, 10.0), ua(0.01, pi - 0.01);
    for (int i = 0; i < 1000; ++i) {
        std::tie(a, b) = lambda_pm(uk(rng), ua(rng));
        REQUIRE(std::abs(a * b - 1.0) < 1e-12);
    }
}
