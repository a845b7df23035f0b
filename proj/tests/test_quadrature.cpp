#include <doctest.h>

#include <cmath>
#include <random>

#include "skf/errors.hpp"
#include "skf/period.hpp"
#include "skf/quadrature.hpp"
#include "skf/torus.hpp"

using namespace skf;

namespace {

// Composite midpoint rule: the brute-force oracle.
double midpoint(const RealFn& f, double a, double b, int n) {
    const double h = (b - a) / n;
    double s = 0.0;
    for (int k = 0; k < n; ++k) s += f(a + (k + 0.5) * h);
    return s * h;
}

}  // namespace

TEST_CASE("quadrature spec validation") {
    QuadratureSpec s;
    CHECK_NOTHROW(s.validate());
    s.max_subdivisions = 3;
    CHECK_THROWS_AS(s.validate(), InvalidArgument);
    s = {};
    s.rel_tol = 0.0;
    CHECK_THROWS_AS(s.validate(), InvalidArgument);
}

TEST_CASE("adaptive kernel on smooth integrands") {
    const auto r = integrate_adaptive([](double t) { return std::sin(t); }, 0.0, pi);
    CHECK(r.converged);
    CHECK(std::abs(r.value - 2.0) < 1e-13);
    CHECK(r.error <= std::max(1e-10 * 2.0, 1e-13));

    const double rho = 2.0;
    auto f = [rho](double t) { return std::sqrt(std::cos(t)) / (rho * rho + 1.0 / (rho * rho) + 2.0 * std::cos(2.0 * t)); };
    const auto q = integrate_sqrt_singular(f, 0.0, pi / 2, {{SingularEndpoint::Side::upper, 0.5}});
    CHECK(std::abs(q.value - midpoint(f, 0.0, pi / 2, 1000000)) < 1e-8);
}

TEST_CASE("budget exhaustion is flagged") {
    QuadratureSpec s;
    s.max_subdivisions = 4;
    s.rel_tol = 1e-15;
    s.abs_tol = 1e-300;
    const auto r = integrate_adaptive([](double t) { return std::sin(1.0 / (t + 1e-3)); }, 0.0, 1.0, s);
    CHECK_FALSE(r.converged);
    CHECK(std::isfinite(r.value));
}

TEST_CASE("square-root endpoint substitution") {
    using SE = SingularEndpoint;
    auto r = integrate_sqrt_singular([](double t) { return 1.0 / std::sqrt(1.0 - t); }, 0.0, 1.0, {{SE::Side::upper, -0.5}});
    CHECK(std::abs(r.value - 2.0) < 1e-12);
    r = integrate_sqrt_singular([](double t) { return std::sqrt(1.0 - t); }, 0.0, 1.0, {{SE::Side::upper, 0.5}});
    CHECK(std::abs(r.value - 2.0 / 3.0) < 1e-13);
    r = integrate_sqrt_singular([](double t) { return 1.0 / std::sqrt(t * (1.0 - t)); }, 0.0, 1.0,
                                {{SE::Side::lower, -0.5}, {SE::Side::upper, -0.5}});
    CHECK(std::abs(r.value - pi) < 1e-12);
}

TEST_CASE("half-line kernels") {
    for (double rho : {2.0, 3.0}) {
        auto f = [rho](double t) { return (1.0 / t) / (t / rho + rho / t); };
        // f(t) t is invariant under t -> rho^2 / t, so the fold centre is rho.
        CHECK(std::abs(integrate_halfline_symmetric(f, rho).value - pi / 2) < 1e-12);
        CHECK_THROWS_AS(integrate_halfline_symmetric(f, 1.0), SymmetryViolation);
        CHECK(std::abs(integrate_halfline(f, rho).value - pi / 2) < 1e-12);
    }
    CHECK_THROWS_AS(integrate_halfline_symmetric([](double t) { return std::exp(-t); }), SymmetryViolation);
}

TEST_CASE("arc integral near the branch angle stays below its bound") {
    const double a = pi / 3;
    const auto I = arc_integrals(a, a + 0.05);
    CHECK(std::isfinite(I.I2));
    CHECK(I.I2 <= arc_i2_bound(a) + 0.1);
    CHECK(arc_i2_bound(a) == doctest::Approx(2.0 * pi * std::sqrt(2.0) / std::pow(0.5, 0.75)));
}

TEST_CASE("randomised agreement with the midpoint oracle (property)") {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> ur(1.1, 4.0), ua(0.3, 1.4);
    for (int i = 0; i < 8; ++i) {
        const double rho = ur(rng);
        const double a = ua(rng);
        // Compact smooth family.
        auto f = [rho](double t) { return std::sqrt(std::cos(t)) / (rho * rho + 1.0 / (rho * rho) + 2.0 * std::cos(2.0 * t)); };
        // Substituted version for the oracle: t = pi/2 - s^2 turns the sqrt into a smooth factor.
        auto fs = [&](double s) { return f(pi / 2 - s * s) * 2.0 * s; };
        const double ref = midpoint(fs, 0.0, std::sqrt(pi / 2), 1000000);
        const double got = integrate_sqrt_singular(f, 0.0, pi / 2, {{SingularEndpoint::Side::upper, 0.5}}).value;
        CHECK(std::abs(got - ref) <= 1e-7 * std::abs(ref));

        // Arc family with an inverse square root at t = a.
        const double b = a + 0.4;
        auto g = [&](double t) { return 1.0 / (std::sqrt(std::cos(t) - std::cos(a)) * (std::cos(t) - std::cos(b))); };
        auto gs = [&](double s) { return g(a - s * s) * 2.0 * s; };
        const double gref = midpoint(gs, 0.0, std::sqrt(a), 1000000);
        const double ggot = integrate_sqrt_singular(g, 0.0, a, {{SingularEndpoint::Side::upper, -0.5}}).value;
        CHECK(std::abs(ggot - gref) <= 1e-7 * std::abs(gref));
    }
}

TEST_CASE("tightening the tolerance stays within the reported error (property)") {
    auto f = [](double t) { return std::exp(-t) * std::cos(5.0 * t); };
    QuadratureSpec loose;
    loose.rel_tol = 1e-6;
    QuadratureSpec tight = loose;
    tight.rel_tol = 0.5e-6;
    const auto a = integrate_adaptive(f, 0.0, 10.0, loose);
    const auto b = integrate_adaptive(f, 0.0, 10.0, tight);
    CHECK(std::abs(a.value - b.value) <= a.error);
}
