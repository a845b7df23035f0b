#include <doctest.h>

#include <random>
#include <tuple>

#include "skf/errors.hpp"
#include "skf/period.hpp"
#include "skf/weierstrass.hpp"

using namespace skf;

namespace {

const EndId kEnds[4] = {{EndId::Conjugacy::plus, 1}, {EndId::Conjugacy::plus, -1},
                        {EndId::Conjugacy::minus, 1}, {EndId::Conjugacy::minus, -1}};

}  // namespace

TEST_CASE("Gauss map values") {
    const ModuliPoint m(pi / 2, pi / 2, 2.0);
    const auto d = derive_moduli(m);
    CHECK(std::abs(gauss_map({1.0, std::sqrt(d.kappa), 1}, d) - 1.0) < 1e-15);
    CHECK(std::abs(gauss_map({std::polar(1.0, m.alpha), 0.0, 1}, d)) == 0.0);
    const cplx g = gauss_map({m.end_plus(), end_u(kEnds[0], d), 1}, d);
    CHECK(std::abs(g - std::polar(1.0, d.omega)) < 1e-14);
    CHECK(std::abs(std::abs(g) - 1.0) < 1e-14);
    // The end value of u lies on the curve.
    CHECK(std::abs(end_u(kEnds[0], d) * end_u(kEnds[0], d) - radicand(m.end_plus(), m.alpha)) < 1e-13);
}

TEST_CASE("height differential") {
    const ModuliPoint m(pi / 2, pi / 2, 2.0);
    CHECK(std::abs(dh_density(1.0, m) - cplx(0.0, -0.4)) < 1e-15);
    CHECK_THROWS_AS(dh_density(m.end_plus(), m), PoleAtEnd);
    const ModuliPoint m1(pi / 3, pi / 2, 1.0);
    for (double t = 0.05; t < 1.0; t += 0.1) {
        const cplx z = std::polar(1.0, t);
        CHECK(std::abs((dh_density(z, m1) * cplx(0.0, 1.0) * z).imag()) < 1e-15);
    }
}

TEST_CASE("Weierstrass forms") {
    SUBCASE("hand substitution at z = 1") {
        const ModuliPoint m(pi / 2, pi / 2, 2.0);
        const auto d = derive_moduli(m);
        const double u = std::sqrt(2.0);
        const auto f = phi_forms({1.0, u, 1}, m, d);
        // g = sqrt(2/1.5) = 2/sqrt(3); dh = -0.4 i
        const double g = 2.0 / std::sqrt(3.0);
        CHECK(std::abs(f.phi1 - 0.5 * (1.0 / g - g) * cplx(0.0, -0.4)) < 1e-15);
        CHECK(std::abs(f.phi2 - cplx(0.0, 0.5) * (1.0 / g + g) * cplx(0.0, -0.4)) < 1e-15);
        CHECK(std::abs(f.phi3 - cplx(0.0, -0.4)) < 1e-15);
    }
    SUBCASE("conformality at random points (property)") {
        std::mt19937_64 rng(5);
        std::uniform_real_distribution<double> ua(0.2, pi - 0.2), ub(0.2, pi - 0.2), ur(1.05, 6.0), uz(-3.0, 3.0);
        for (int i = 0; i < 10000; ++i) {
            const ModuliPoint m(ua(rng), ub(rng), ur(rng));
            const auto d = derive_moduli(m);
            const cplx z(uz(rng), uz(rng));
            if (std::abs(z - m.end_plus()) < 0.01 || std::abs(z - m.end_minus()) < 0.01 || std::abs(z) < 0.05) continue;
            const auto f = phi_forms({z, u_principal(z, m.alpha), 1}, m, d);
            const double scale = std::norm(f.phi1) + std::norm(f.phi2) + std::norm(f.phi3);
            REQUIRE(std::abs(f.phi1 * f.phi1 + f.phi2 * f.phi2 + f.phi3 * f.phi3) <= 1e-10 * scale);
        }
    }
    SUBCASE("unit Gauss map balances the horizontal and vertical parts") {
        const ModuliPoint m(1.2, 2.0, 1.5);
        const auto d = derive_moduli(m);
        const cplx z = m.end_plus() + 0.3;
        const auto f = phi_forms_unchecked(z, std::sqrt(d.kappa) * std::polar(1.0, 0.4), m, d);
        CHECK(std::abs(std::norm(f.phi1) + std::norm(f.phi2) - std::norm(f.phi3)) < 1e-12 * std::norm(f.phi3));
    }
}

TEST_CASE("end residues") {
    const auto d = derive_moduli({pi / 2, pi / 2, 2.0});
    CHECK(std::abs(end_residue_closed(1, kEnds[0], d, pi / 2) + pi / std::sqrt(2.0)) < 1e-14);
    CHECK(std::abs(end_residue_closed(3, kEnds[0], d, pi / 2).imag()) == doctest::Approx(pi));
    cplx sum3 = 0.0;
    for (const auto& e : kEnds) sum3 += end_residue_closed(3, e, d, pi / 2);
    CHECK(std::abs(sum3) < 1e-14);
    CHECK_THROWS_AS(end_residue_closed(1, kEnds[0], d, 0.0), BetaDegenerate);

    SUBCASE("contour oracle") {
        for (const auto& [a, b, r] : {std::tuple{pi / 2, pi / 2, 2.0}, std::tuple{pi / 3, 2.0, 1.5}}) {
            const ModuliPoint m(a, b, r);
            const auto dm = derive_moduli(m);
            for (const auto& e : kEnds)
                for (int form = 1; form <= 3; ++form) {
                    const cplx num = end_residue_numeric(form, e, m, 0.5 * end_clearance(e, m));
                    CHECK(std::abs(num - end_residue_closed(form, e, dm, m.beta)) < 1e-9);
                }
        }
    }
    SUBCASE("conjugation symmetry of the closed forms") {
        const auto dm = derive_moduli({1.0, 2.2, 1.8});
        for (int form = 1; form <= 2; ++form)
            CHECK(std::abs(end_residue_closed(form, kEnds[2], dm, 2.2) -
                           (form == 1 ? 1.0 : -1.0) * std::conj(end_residue_closed(form, kEnds[0], dm, 2.2))) < 1e-15);
    }
    SUBCASE("a circle reaching another puncture is rejected") {
        const ModuliPoint m(pi / 2, pi / 2, 2.0);
        CHECK_THROWS_AS(end_residue_numeric(1, kEnds[0], m, 1.5 * end_clearance(kEnds[0], m)), InvalidArgument);
    }
}

TEST_CASE("kappa ratio") {
    const double rho1 = solve_rho1();
    const ModuliPoint m(pi / 2, pi / 2, rho1);
    const auto d = derive_moduli(m);
    const cplx k = kappa_ratio(m, d);
    CHECK(std::abs(k.imag()) < 1e-6);
    CHECK(std::abs(k.real() - d.kappa) < 1e-6);

    const ModuliPoint g(1.1, 2.0, 1.7);
    const auto dg = derive_moduli(g);
    CHECK(std::abs(kappa_ratio(g, dg) - kappa_ratio(g, dg, {}, cplx(0.3, 0.3))) < 1e-9);

    const ModuliPoint off(pi / 2, pi / 2, rho1 + 0.2);
    const auto doff = derive_moduli(off);
    CHECK(std::abs(kappa_ratio(off, doff) - doff.kappa) > 1e-3);
    CHECK_THROWS_AS(kappa_ratio(ModuliPoint(1.0, 2.0, 1.0), derive_moduli({1.0, 2.0, 1.0})), InvalidArgument);
}

TEST_CASE("segment lengths") {
    const double rho1 = solve_rho1();
    for (double rho : {1.3, rho1, 3.0}) {
        const ModuliPoint m(pi / 2, pi / 2, rho);
        const auto d = derive_moduli(m);
        CHECK(segment_length(m, d, Segment::ApB).value ==
              doctest::Approx(segment_length(m, d, Segment::BA).value).epsilon(1e-12));
    }
    const ModuliPoint m(pi / 2, pi / 2, rho1);
    CHECK(segment_length(m, derive_moduli(m), Segment::BA).value == doctest::Approx(pi / std::sqrt(2.0)).epsilon(1e-10));

    // Divergence as beta approaches alpha from above at rho = 1.
    double prev = 0.0;
    for (double gap : {1e-1, 1e-2, 1e-3, 1e-4}) {
        const ModuliPoint q(pi / 3, pi / 3 + gap, 1.0);
        const double len = segment_length(q, derive_moduli(q), Segment::BA).value;
        CHECK(len > prev);
        prev = len;
    }
    CHECK(prev > 50.0);
}

TEST_CASE("Gauss curvature") {
    const ModuliPoint m(1.0, 2.0, 1.6);
    const auto d = derive_moduli(m);
    std::mt19937_64 rng(2);
    std::uniform_real_distribution<double> uz(-3.0, 3.0);
    for (int i = 0; i < 200; ++i) {
        const cplx z(uz(rng), uz(rng));
        if (std::abs(z - m.end_plus()) < 0.01 || std::abs(z - m.end_minus()) < 0.01 || std::abs(z) < 0.05) continue;
        CHECK(gauss_curvature({z, u_principal(z, m.alpha), 1}, m, d) <= 0.0);
    }
    // g g' vanishes at z = +-1 (the branch points of g over the z-line).
    CHECK(gauss_curvature({1.0, u_principal(1.0, m.alpha), 1}, m, d) == 0.0);
}

TEST_CASE("helicoid comparison data") {
    const ModuliPoint m(0.9, 1.4, 1.8);
    const auto d = derive_moduli(m);
    const auto s = helicoid_data(m, d);
    CHECK(std::abs(s.lambda_plus * s.lambda_minus - 1.0) < 1e-12);
    CHECK(s.r_bold == doctest::Approx(std::sqrt(2.0 * std::sin(0.9) / d.kappa)));
    CHECK(std::abs(s.G({1.0, -std::sqrt(d.kappa), 1})) == 0.0);
    const cplx zl = s.lambda_plus;
    CHECK(std::abs(s.dH({zl, u_principal(zl, m.alpha), 1})) < 1e-14);
}
