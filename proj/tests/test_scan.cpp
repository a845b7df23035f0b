#include <doctest.h>

#include <cstdlib>
#include <cstring>

#include "skf/scan.hpp"

using namespace skf;

namespace {

bool same_bits(double a, double b) { return std::memcmp(&a, &b, sizeof a) == 0; }

}  // namespace

TEST_CASE("axis sampling") {
    const Axis a{1.0, 2.0, 5};
    CHECK(a.at(0) == 1.0);
    CHECK(a.at(4) == 2.0);
    CHECK(a.at(2) == doctest::Approx(1.5));
    CHECK(Axis{3.0, 4.0, 1}.at(0) == 3.0);
}

TEST_CASE("serial and parallel scans agree bit for bit") {
    const Axis beta{0.2, 2.9, 7}, rho{1.1, 3.5, 6};

    const auto rs = residual_grid(1.0, beta, rho, Exec::serial);
    const auto rp = residual_grid(1.0, beta, rho, Exec::parallel);
    REQUIRE(rs.size() == static_cast<std::size_t>(beta.n * rho.n));
    REQUIRE(rs.size() == rp.size());
    for (std::size_t i = 0; i < rs.size(); ++i) {
        REQUIRE(same_bits(rs[i].r.x1, rp[i].r.x1));
        REQUIRE(same_bits(rs[i].r.x2, rp[i].r.x2));
    }
    // Row-major layout: beta outer, rho inner.
    CHECK(rs[rho.n].beta == beta.at(1));
    CHECK(rs[1].rho == rho.at(1));

    const auto ss = sign_grid(0.9, SegmentId::circle_up, beta, rho, Exec::serial);
    const auto sp = sign_grid(0.9, SegmentId::circle_up, beta, rho, Exec::parallel);
    REQUIRE(ss.cells.size() == sp.cells.size());
    for (std::size_t i = 0; i < ss.cells.size(); ++i) {
        REQUIRE(same_bits(ss.cells[i].ode_value, sp.cells[i].ode_value));
        REQUIRE(ss.cells[i].ode_sign == sp.cells[i].ode_sign);
        REQUIRE(same_bits(ss.cells[i].residual, sp.cells[i].residual));
    }

    const Axis ra{0.4, 1.5, 2}, rb{0.5, 2.6, 2}, rr{1.2, 3.0, 2};
    const auto es = residue_grid(ra, rb, rr, Exec::serial);
    const auto ep = residue_grid(ra, rb, rr, Exec::parallel);
    REQUIRE(es.size() == ep.size());
    for (std::size_t i = 0; i < es.size(); ++i) REQUIRE(same_bits(es[i].max_error, ep[i].max_error));
    for (const auto& c : es) {
        CHECK(c.max_error < 1e-9);
        CHECK(c.phi3_sum < 1e-12);
    }
}

TEST_CASE("sign agreement between the support function and the residual") {
    const auto g = sign_grid(1.2, SegmentId::circle_up, {0.2, pi - 0.2, 14}, {1.05, 4.0, 12}, Exec::parallel);
    const auto s = summarize(g);
    CHECK(s.sign_constant == 1);
    CHECK(s.rate >= 0.99);
    CHECK(s.residual_crossings > 0);
    CHECK(s.interleaved == s.residual_crossings);
}

TEST_CASE("thread cap from the environment") {
    ::setenv("SKFAMILY_THREADS", "3", 1);
    CHECK(scan_threads() == 3);
    ::setenv("SKFAMILY_THREADS", "bogus", 1);
    CHECK(scan_threads() >= 1);
    ::unsetenv("SKFAMILY_THREADS");
}
