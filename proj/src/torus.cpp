#include "skf/torus.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "skf/errors.hpp"

namespace skf {

ModuliPoint::ModuliPoint(double a, double b, double r) : alpha(a), beta(b), rho(r) {
    if (!(a > 0.0 && a < pi))
        throw InvalidArgument("alpha must lie in (0, pi), got " + std::to_string(a));
    if (!(b >= 0.0 && b <= pi))
        throw InvalidArgument("beta must lie in [0, pi], got " + std::to_string(b));
    if (!(r >= 1.0) || !std::isfinite(r))
        throw InvalidArgument("rho must be >= 1, got " + std::to_string(r));
    if (r == 1.0 && b == a)
        throw DegenerateModuli("rho = 1 and beta = alpha collapse the lattice");
}

cplx ModuliPoint::end_plus() const { return std::polar(rho, beta); }
cplx ModuliPoint::end_minus() const { return std::polar(rho, -beta); }

cplx moduli_rhs(const ModuliPoint& m) {
    return {(m.rho + 1.0 / m.rho) * std::cos(m.beta) - 2.0 * std::cos(m.alpha),
            (m.rho - 1.0 / m.rho) * std::sin(m.beta)};
}

DerivedModuli derive_moduli(const ModuliPoint& m) {
    const cplx w = moduli_rhs(m);
    const double k = std::abs(w);
    if (k < 1e-14) throw DegenerateModuli("kappa vanishes (rho = 1, beta = alpha)");
    // The imaginary part is non-negative on the whole domain, so the argument
    // lies in [0, pi] and omega in [0, pi/2] without a branch switch.
    const double arg = std::atan2(std::max(w.imag(), 0.0), w.real());
    return {k, 0.5 * arg};
}

cplx radicand(cplx z, double alpha) { return z + 1.0 / z - 2.0 * std::cos(alpha); }

cplx u_principal(cplx z, double alpha, int sheet) {
    if (z == cplx(0.0, 0.0)) throw InvalidArgument("u is not defined over z = 0");
    cplx r = std::sqrt(radicand(z, alpha));
    // std::sqrt returns Re >= 0; on the cut (negative radicand) make the
    // argument exactly +pi/2 regardless of the sign of the zero imaginary part.
    if (r.real() == 0.0) r = cplx(0.0, std::abs(r.imag()));
    return sheet >= 0 ? r : -r;
}

int sheet_of(cplx z, cplx u, double alpha) {
    const cplx r = u_principal(z, alpha, 1);
    return std::abs(u - r) <= std::abs(u + r) ? 1 : -1;
}

cplx u_follow(cplx z, cplx u_prev, double alpha) {
    const cplx r = u_principal(z, alpha, 1);
    const cplx pick = std::abs(u_prev - r) <= std::abs(u_prev + r) ? r : -r;
    const double jump = std::abs(pick - u_prev);
    // The competing root sits at distance |pick + u_prev|; demand a clear margin.
    if (jump > 0.5 * std::abs(pick + u_prev) && jump > 1e-300)
        throw BranchAmbiguity("roots not separated near z = (" + std::to_string(z.real()) + ", " +
                              std::to_string(z.imag()) + ")");
    return pick;
}

namespace {

double branch_distance(cplx z, double alpha) {
    const double d0 = std::abs(z);
    const double d1 = std::abs(z - std::polar(1.0, alpha));
    const double d2 = std::abs(z - std::polar(1.0, -alpha));
    return std::min({d0, d1, d2});
}

// Acceptable when the step is short compared with the distance to the nearest
// branch point and the root moves by less than a fraction of its size.
bool step_ok(cplx z0, cplx u0, cplx z1, cplx u1) {
    (void)z1;
    const double du = std::abs(u1 - u0);
    return du < 0.25 * std::max(std::abs(u0), std::abs(u1)) || du < 1e-14 * (1.0 + std::abs(z0));
}

void advance(cplx za, cplx ua, cplx zb, double alpha, int depth, int limit,
             std::vector<TorusPoint>& out) {
    const double len = std::abs(zb - za);
    const double guard = 0.5 * branch_distance(za, alpha);
    bool fine = len <= guard;
    cplx ub{};
    if (fine) {
        const cplx r = u_principal(zb, alpha, 1);
        ub = std::abs(ua - r) <= std::abs(ua + r) ? r : -r;
        fine = step_ok(za, ua, zb, ub);
    }
    if (fine) {
        out.push_back({zb, ub, sheet_of(zb, ub, alpha)});
        return;
    }
    if (depth >= limit)
        throw BranchAmbiguity("step halving exhausted near z = (" + std::to_string(za.real()) + ", " +
                              std::to_string(za.imag()) + ")");
    const cplx zm = 0.5 * (za + zb);
    advance(za, ua, zm, alpha, depth + 1, limit, out);
    const TorusPoint mid = out.back();
    advance(mid.z, mid.u, zb, alpha, depth + 1, limit, out);
}

}  // namespace

std::vector<TorusPoint> continue_u(const PathSpec& path, const TorusPoint& start, double alpha) {
    if (path.waypoints.empty()) throw InvalidArgument("empty path");
    if (std::abs(path.waypoints.front() - start.z) > 1e-12 * (1.0 + std::abs(start.z)))
        throw InvalidArgument("start point does not lie over the first waypoint");
    const cplx rad = radicand(start.z, alpha);
    if (std::abs(start.u * start.u - rad) > 1e-10 * (1.0 + std::abs(start.z) + 1.0 / std::abs(start.z)))
        throw InvalidArgument("start point is not on the curve");
    for (std::size_t i = 0; i < path.waypoints.size(); ++i) {
        for (const cplx& p : path.punctures)
            if (std::abs(path.waypoints[i] - p) < path.exclusion_radius)
                throw PoleAtEnd("waypoint within exclusion radius of a puncture");
        if (i > 0 && path.waypoints[i] == path.waypoints[i - 1])
            throw InvalidArgument("consecutive waypoints coincide");
    }

    std::vector<TorusPoint> out;
    out.push_back({start.z, start.u, sheet_of(start.z, start.u, alpha)});
    for (std::size_t i = 1; i < path.waypoints.size(); ++i) {
        const TorusPoint here = out.back();
        advance(here.z, here.u, path.waypoints[i], alpha, 0, path.refinement_limit, out);
    }
    return out;
}

std::pair<cplx, cplx> lambda_pm(double kappa, double alpha) {
    const cplx s = kappa + 2.0 * std::cos(alpha);
    const cplx d = std::sqrt(s * s - 4.0);
    cplx lp = 0.5 * (s + d);
    cplx lm = 0.5 * (s - d);
    // Recompute the smaller root from the product to avoid cancellation.
    if (std::abs(lp) >= std::abs(lm))
        lm = 1.0 / lp;
    else
        lp = 1.0 / lm;
    return {lp, lm};
}

}  // namespace skf

namespace skf {

BranchTracker::BranchTracker(double alpha, const std::vector<cplx>& samples, cplx z_ref, cplx u_ref)
    : alpha_(alpha) {
    roots_[0] = std::polar(1.0, alpha);
    roots_[1] = std::polar(1.0, -alpha);
    roots_[2] = 0.0;
    for (int k = 0; k < 3; ++k) {
        cplx acc = 0.0;
        for (const cplx& z : samples) {
            const cplx w = z - roots_[k];
            if (std::abs(w) > 0.0) acc += w / std::abs(w);
        }
        if (std::abs(acc) < 1e-12)
            throw BranchAmbiguity("path surrounds a branch point; split it into shorter pieces");
        dir_[k] = acc / std::abs(acc);
        for (const cplx& z : samples) {
            const cplx w = z - roots_[k];
            if (std::abs(w) > 0.0 && (w / (std::abs(w) * dir_[k])).real() < -0.95)
                throw BranchAmbiguity("path turns too far around a branch point");
        }
        sqrt_dir_[k] = std::sqrt(dir_[k]);
    }
    const cplx r = raw(z_ref);
    sign_ = std::abs(u_ref - r) <= std::abs(u_ref + r) ? 1.0 : -1.0;
}

cplx BranchTracker::factor(int k, cplx z) const {
    return sqrt_dir_[k] * std::sqrt((z - roots_[k]) / dir_[k]);
}

cplx BranchTracker::raw(cplx z) const { return factor(0, z) * factor(1, z) / factor(2, z); }

cplx BranchTracker::operator()(cplx z) const { return sign_ * raw(z); }

}  // namespace skf
