#include "skf/period.hpp"

#include <algorithm>
#include <array>
#include <boost/math/tools/roots.hpp>
#include <cmath>
#include <cstdint>
#include <string>

#include "skf/errors.hpp"
#include "skf/weierstrass.hpp"

namespace skf {

QuadratureSpec residual_quadrature() { return {1e-12, 1e-15, 400}; }

ResidualPair residuals(const ModuliPoint& m, const QuadratureSpec& spec) {
    const DerivedModuli d = derive_moduli(m);
    const QuadResult ip = halfline_integral(m, d, +1, spec);
    const QuadResult im = halfline_integral(m, d, -1, spec);
    const double csc = 1.0 / std::sin(m.beta);
    return {ip.value - 2.0 * pi * std::sin(d.omega) * csc, im.value - 2.0 * pi * std::cos(d.omega) * csc,
            ip.error, im.error};
}

double residual_x1(const ModuliPoint& m, const QuadratureSpec& spec) {
    const DerivedModuli d = derive_moduli(m);
    return halfline_integral(m, d, +1, spec).value - 2.0 * pi * std::sin(d.omega) / std::sin(m.beta);
}

double residual_x2(const ModuliPoint& m, const QuadratureSpec& spec) {
    const DerivedModuli d = derive_moduli(m);
    return halfline_integral(m, d, -1, spec).value - 2.0 * pi * std::cos(d.omega) / std::sin(m.beta);
}

double residual_x1_circle(const ModuliPoint& m, const QuadratureSpec& spec) {
    if (!(m.beta > 0.0 && m.beta < pi)) throw BetaDegenerate("circle residual needs beta in (0, pi)");
    if (m.rho == 1.0 && m.beta <= m.alpha) throw PoleOnPath("rho = 1 with beta <= alpha puts the end on the arc");
    const DerivedModuli d = derive_moduli(m);
    const double a = m.alpha;
    const double kh = std::sqrt(0.5 * d.kappa);
    const double rs = m.rho + 1.0 / m.rho, rd = m.rho - 1.0 / m.rho;
    // t = alpha - s^2 removes the inverse square root at t = alpha; the gap
    // cos t - cos alpha is formed from s directly so it never rounds to zero.
    auto f = [&](double s) {
        const double s2 = s * s;
        const double t = a - s2;
        const double c = 2.0 * std::sin(a - 0.5 * s2) * std::sin(0.5 * s2);
        const double sc = std::sqrt(c);
        const double A = m.rho == 1.0 ? 4.0 * std::sin(0.5 * (m.beta + t)) * std::sin(0.5 * (m.beta - t))
                                      : rs * std::cos(t) - 2.0 * std::cos(m.beta);
        const double B = rd * std::sin(t);
        const double ds_weight = s2 > 0.0 ? 2.0 * s / sc : 2.0 / std::sqrt(std::sin(a));
        return (kh * ds_weight - 2.0 * s * sc / kh) * A / (A * A + B * B);
    };
    return integrate_adaptive(f, 0.0, std::sqrt(a), spec).value;
}

double residual_x2_circle(const ModuliPoint& m, const QuadratureSpec& spec) {
    return residual_x1_circle(ModuliPoint(pi - m.alpha, pi - m.beta, m.rho), spec);
}

double solve_rho1(double tol) {
    auto f = [](double rho) { return residual_x1(ModuliPoint(pi / 2, pi / 2, rho)); };
    const double lo = 1.0 + 1e-6, hi = 1.0 + std::sqrt(2.0);
    if (f(lo) * f(hi) > 0.0) throw NoBracket("symmetric residual does not change sign on [1, 1 + sqrt 2]");
    auto stop = [tol](double a, double b) { return std::abs(b - a) <= tol; };
    std::uintmax_t iters = 200;
    const auto r = boost::math::tools::bisect(f, lo, hi, stop, iters);
    return 0.5 * (r.first + r.second);
}

std::pair<double, double> j_values(double rho) {
    if (!(rho > 1.0)) throw InvalidArgument("rho must exceed 1");
    const double kappa = rho - 1.0 / rho;
    const double base = rho * rho + 1.0 / (rho * rho);
    const QuadratureSpec spec{1e-13, 1e-16, 200};
    const std::vector<SingularEndpoint> ep{{SingularEndpoint::Side::upper, 0.5}};
    const double j1 = integrate_sqrt_singular([&](double t) { return std::sqrt(std::cos(t)) / (base + 2.0 * std::cos(2.0 * t)); },
                                              0.0, pi / 2, ep, spec).value;
    const double j2 = integrate_sqrt_singular([&](double t) { return std::pow(std::cos(t), 1.5) / (base + 2.0 * std::cos(2.0 * t)); },
                                              0.0, pi / 2, ep, spec).value;
    return {0.5 * kappa * j1, j2};
}

double j_residual(double rho) {
    const auto [j1, j2] = j_values(rho);
    return j1 - j2;
}

double solve_rho1_from_j(double tol) {
    const double lo = 1.01, hi = 1.0 + std::sqrt(2.0);
    if (j_residual(lo) * j_residual(hi) > 0.0) throw NoBracket("J1 - J2 does not change sign");
    auto stop = [tol](double a, double b) { return std::abs(b - a) <= tol; };
    std::uintmax_t iters = 200;
    const auto r = boost::math::tools::bisect(j_residual, lo, hi, stop, iters);
    return 0.5 * (r.first + r.second);
}

namespace {

template <class F>
double refine_root(F f, double lo, double hi) {
    std::uintmax_t iters = 200;
    auto stop = [](double a, double b) { return std::abs(b - a) <= 1e-14 * std::max(1.0, std::abs(a)); };
    // Bisection: the residual is unbounded at one end of the bracket, which
    // defeats interpolating solvers.
    const auto r = boost::math::tools::bisect(f, lo, hi, stop, iters);
    return 0.5 * (r.first + r.second);
}

}  // namespace

double beta_plus(double alpha) {
    if (!(alpha > 0.0 && alpha <= pi / 2 + 1e-12)) throw InvalidArgument("alpha must lie in (0, pi/2]");
    auto f = [alpha](double b) { return residual_x1_circle(ModuliPoint(alpha, b, 1.0)); };
    double prev_b = alpha + 1e-7 * (pi - alpha);
    double prev = f(prev_b);
    for (int k = 1; k < 200; ++k) {
        const double b = alpha + (pi - alpha) * k / 200.0;
        const double v = f(b);
        if ((prev < 0.0) != (v < 0.0)) return refine_root(f, prev_b, b);
        prev_b = b;
        prev = v;
    }
    throw NoBracket("no sign change of the x1 circle residual on (alpha, pi) at rho = 1");
}

double beta_minus(double alpha) {
    if (!(alpha > 0.0 && alpha <= pi / 2 + 1e-12)) throw InvalidArgument("alpha must lie in (0, pi/2]");
    auto f = [alpha](double b) { return residual_x2_circle(ModuliPoint(alpha, b, 1.0)); };
    // Walk down from beta = alpha, where the residual tends to -infinity.
    std::vector<double> grid;
    for (int k = 199; k >= 1; --k) grid.push_back(alpha * k / 200.0);
    for (double s : {1e-3, 1e-4, 1e-5}) grid.push_back(alpha * s);
    double prev_b = alpha * (1.0 - 1e-7);
    double prev = f(prev_b);
    for (double b : grid) {
        const double v = f(b);
        if ((prev < 0.0) != (v < 0.0)) return refine_root(f, b, prev_b);
        prev_b = b;
        prev = v;
    }
    throw NoBracket("no sign change of the x2 circle residual on (0, alpha) at rho = 1");
}

namespace {

using Vec2 = std::array<double, 2>;

struct CurveFn {
    CurveId which;
    double alpha;
    double operator()(double beta, double rho) const {
        const ModuliPoint m(alpha, beta, rho);
        return which == CurveId::Cplus ? residual_x1(m) : residual_x2(m);
    }
    Vec2 grad(double beta, double rho) const {
        const double h = 1e-6;
        const double db = ((*this)(beta + h, rho) - (*this)(beta - h, rho)) / (2 * h);
        double dr;
        if (rho - h >= 1.0)
            dr = ((*this)(beta, rho + h) - (*this)(beta, rho - h)) / (2 * h);
        else
            dr = (-3.0 * (*this)(beta, rho) + 4.0 * (*this)(beta, rho + h) - (*this)(beta, rho + 2 * h)) / (2 * h);
        return {db, dr};
    }
};

Vec2 unit_tangent(const Vec2& g) {
    const double n = std::hypot(g[0], g[1]);
    if (n == 0.0) throw StepFailure("vanishing gradient on the zero curve");
    return {-g[1] / n, g[0] / n};
}

}  // namespace

ZeroCurve trace_zero_curve(CurveId which, double alpha, const CurveControls& ctl) {
    ZeroCurve curve;
    curve.which = which;
    curve.alpha = alpha;
    double beta0;
    try {
        beta0 = which == CurveId::Cplus ? beta_plus(alpha) : beta_minus(alpha);
    } catch (const NoBracket& e) {
        curve.stop_reason = std::string("no starting point on rho = 1: ") + e.what();
        return curve;
    }
    curve.exists = true;
    const CurveFn f{which, alpha};

    // Polish the start with the half-line residual along rho = 1.
    for (int it = 0; it < 20; ++it) {
        const double v = f(beta0, 1.0);
        const double h = 1e-7;
        const double dv = (f(beta0 + h, 1.0) - f(beta0 - h, 1.0)) / (2 * h);
        const double step = v / dv;
        beta0 -= step;
        if (std::abs(step) < 1e-15) break;
    }
    Vec2 x{beta0, 1.0};
    const double qerr = residual_quadrature().rel_tol;
    curve.samples.push_back({x[0], x[1], f(x[0], x[1]), qerr});
    Vec2 tan = unit_tangent(f.grad(x[0], x[1]));
    if (tan[1] < 0.0) tan = {-tan[0], -tan[1]};
    double h = ctl.step;

    while (static_cast<int>(curve.samples.size()) < ctl.max_samples) {
        Vec2 pred{x[0] + h * tan[0], x[1] + h * tan[1]};
        bool to_boundary = false;
        if (pred[1] < 1.0) {  // the curve heads back to the unit circle: land on it
            const double hh = (1.0 - x[1]) / tan[1];
            pred = {x[0] + hh * tan[0], 1.0};
            to_boundary = true;
        }
        if (pred[0] <= 0.0 || pred[0] >= pi) {
            curve.stop_reason = "reached beta boundary";
            break;
        }
        Vec2 xc = pred;
        bool ok = false;
        int its = 0;
        try {
            if (to_boundary) {
                for (its = 0; its < 12; ++its) {
                    const double v = f(xc[0], 1.0);
                    const double dv = f.grad(xc[0], 1.0)[0];
                    xc[0] -= v / dv;
                    if (std::abs(v) < 1e-2 * ctl.residual_tol) {
                        ok = true;
                        break;
                    }
                }
            } else {
                const Vec2 g = f.grad(pred[0], pred[1]);
                const double gn = std::hypot(g[0], g[1]);
                const Vec2 n{g[0] / gn, g[1] / gn};
                for (its = 0; its < 12; ++its) {
                    const double v = f(xc[0], xc[1]);
                    if (std::abs(v) < 1e-2 * ctl.residual_tol) {
                        ok = true;
                        break;
                    }
                    const double lam = -v / gn;
                    xc = {xc[0] + lam * n[0], xc[1] + lam * n[1]};
                    if (xc[1] < 1.0 || xc[0] <= 0.0 || xc[0] >= pi) break;
                }
            }
        } catch (const Error&) {
            ok = false;
        }
        const double jump = std::hypot(xc[0] - x[0], xc[1] - x[1]);
        if (ok && (jump > 1.5 * std::max(h, 1e-12) + 1e-12 || jump > ctl.max_step)) ok = false;
        if (!ok) {
            h *= 0.5;
            if (h < ctl.min_step)
                throw StepFailure("zero-curve trace stalled at beta = " + std::to_string(x[0]) +
                                  ", rho = " + std::to_string(x[1]));
            continue;
        }
        Vec2 nt = unit_tangent(f.grad(xc[0], xc[1]));
        if (nt[0] * tan[0] + nt[1] * tan[1] < 0.0) nt = {-nt[0], -nt[1]};
        if (nt[0] * tan[0] + nt[1] * tan[1] < std::cos(0.5)) {  // turned too sharply
            h *= 0.5;
            if (h < ctl.min_step) throw StepFailure("zero-curve trace cannot resolve a sharp turn");
            continue;
        }
        x = xc;
        tan = nt;
        curve.samples.push_back({x[0], x[1], f(x[0], x[1]), qerr});
        if (to_boundary) {
            curve.stop_reason = "returned to rho = 1";
            break;
        }
        if (x[1] > ctl.rho_max) {
            curve.stop_reason = "exceeded rho_max";
            break;
        }
        if (x[0] < ctl.beta_margin || x[0] > pi - ctl.beta_margin) {
            curve.stop_reason = "reached beta boundary";
            break;
        }
        if (its <= 3) h = std::min(h * 1.3, ctl.max_step);
    }
    if (curve.stop_reason.empty()) curve.stop_reason = "sample limit";
    return curve;
}

SolvedPoint solve_point(double alpha, std::pair<double, double> guess, double step_tol) {
    auto F = [alpha](double b, double r) {
        const ResidualPair p = residuals(ModuliPoint(alpha, b, r));
        return Vec2{p.x1, p.x2};
    };
    auto inside = [](double b, double r) { return b > 0.0 && b < pi && r >= 1.0; };
    double b = guess.first, r = guess.second;
    if (!inside(b, r)) throw InvalidArgument("guess outside the residual domain");
    Vec2 fx = F(b, r);
    SolvedPoint out;
    for (int it = 1; it <= 60; ++it) {
        const double hb = 1e-6, hr = 1e-6 * std::max(1.0, r);
        Vec2 fb1 = F(b + hb, r), fb0 = F(b - hb, r);
        Vec2 fr1, fr0;
        double hr_eff = hr;
        if (r - hr >= 1.0) {
            fr1 = F(b, r + hr);
            fr0 = F(b, r - hr);
        } else {
            fr1 = F(b, r + hr);
            fr0 = fx;
            hr_eff = 0.5 * hr;
        }
        const double j00 = (fb1[0] - fb0[0]) / (2 * hb), j10 = (fb1[1] - fb0[1]) / (2 * hb);
        const double j01 = (fr1[0] - fr0[0]) / (2 * hr_eff), j11 = (fr1[1] - fr0[1]) / (2 * hr_eff);
        const double det = j00 * j11 - j01 * j10;
        if (det == 0.0 || !std::isfinite(det)) throw NewtonDivergence("singular Jacobian");
        const double db = -(j11 * fx[0] - j01 * fx[1]) / det;
        const double dr = -(-j10 * fx[0] + j00 * fx[1]) / det;
        double lam = 1.0;
        const double norm0 = std::hypot(fx[0], fx[1]);
        Vec2 fn{};
        bool accepted = false;
        for (int k = 0; k < 12; ++k, lam *= 0.5) {
            const double nb = b + lam * db, nr = r + lam * dr;
            if (!inside(nb, nr)) continue;
            try {
                fn = F(nb, nr);
            } catch (const Error&) {
                continue;
            }
            if (std::hypot(fn[0], fn[1]) < norm0 || norm0 < 1e-11) {
                b = nb;
                r = nr;
                accepted = true;
                break;
            }
        }
        if (!accepted) throw NewtonDivergence("line search failed near beta = " + std::to_string(b));
        fx = fn;
        out.iterations = it;
        if (std::hypot(lam * db, lam * dr) < step_tol) break;
        if (it == 60) throw NewtonDivergence("no convergence in 60 iterations");
    }
    const ModuliPoint m(alpha, b, r);
    out.beta = b;
    out.rho = r;
    out.residual = residuals(m);
    if (std::max(std::abs(out.residual.x1), std::abs(out.residual.x2)) > 1e-8)
        throw NewtonDivergence("converged step but residual above 1e-8");
    if (r > 1.0 || b > alpha) out.circle_x1 = residual_x1_circle(m);
    if (r > 1.0 || b < alpha) out.circle_x2 = residual_x2_circle(m);
    return out;
}

namespace {

double segment_distance(const Vec2& p0, const Vec2& p1, const Vec2& q0, const Vec2& q1) {
    auto point_seg = [](const Vec2& p, const Vec2& a, const Vec2& b) {
        const double vx = b[0] - a[0], vy = b[1] - a[1];
        const double l2 = vx * vx + vy * vy;
        double t = l2 > 0 ? ((p[0] - a[0]) * vx + (p[1] - a[1]) * vy) / l2 : 0.0;
        t = std::clamp(t, 0.0, 1.0);
        return std::hypot(p[0] - a[0] - t * vx, p[1] - a[1] - t * vy);
    };
    auto cross = [](const Vec2& o, const Vec2& a, const Vec2& b) {
        return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0]);
    };
    const double d1 = cross(p0, p1, q0), d2 = cross(p0, p1, q1);
    const double d3 = cross(q0, q1, p0), d4 = cross(q0, q1, p1);
    if (((d1 > 0) != (d2 > 0)) && ((d3 > 0) != (d4 > 0))) return 0.0;
    return std::min({point_seg(p0, q0, q1), point_seg(p1, q0, q1), point_seg(q0, p0, p1), point_seg(q1, p0, p1)});
}

}  // namespace

std::vector<SolvedPoint> intersect_curves(const ZeroCurve& cp, const ZeroCurve& cm) {
    if (cp.alpha != cm.alpha) throw InvalidArgument("curves traced at different alpha");
    std::vector<SolvedPoint> found;
    if (cp.samples.size() < 2 || cm.samples.size() < 2) return found;
    for (std::size_t i = 0; i + 1 < cp.samples.size(); ++i) {
        const Vec2 p0{cp.samples[i].beta, cp.samples[i].rho}, p1{cp.samples[i + 1].beta, cp.samples[i + 1].rho};
        for (std::size_t j = 0; j + 1 < cm.samples.size(); ++j) {
            const Vec2 q0{cm.samples[j].beta, cm.samples[j].rho}, q1{cm.samples[j + 1].beta, cm.samples[j + 1].rho};
            if (segment_distance(p0, p1, q0, q1) > 0.02) continue;
            const std::pair<double, double> guess{0.25 * (p0[0] + p1[0] + q0[0] + q1[0]),
                                                  std::max(1.0, 0.25 * (p0[1] + p1[1] + q0[1] + q1[1]))};
            try {
                const SolvedPoint s = solve_point(cp.alpha, guess);
                const bool dup = std::any_of(found.begin(), found.end(), [&](const SolvedPoint& o) {
                    return std::hypot(o.beta - s.beta, o.rho - s.rho) < 1e-6;
                });
                if (!dup) found.push_back(s);
            } catch (const Error&) {
                // Candidate dropped: Newton did not settle from this pair.
            }
        }
    }
    std::sort(found.begin(), found.end(), [](const SolvedPoint& a, const SolvedPoint& b) { return a.beta < b.beta; });
    return found;
}

ArcIntegrals arc_integrals(double alpha, double beta) {
    if (!(alpha > 0.0 && alpha < beta && beta < pi)) throw InvalidArgument("arc integrals need 0 < alpha < beta < pi");
    const double cab = 2.0 * std::sin(0.5 * (alpha + beta)) * std::sin(0.5 * (beta - alpha));  // cos a - cos b
    const QuadratureSpec spec = residual_quadrature();
    // t = alpha - s^2; cos t - cos a is formed from s directly.
    auto parts = [&](double s, double& gap, double& den) {
        const double s2 = s * s;
        gap = 2.0 * std::sin(alpha - 0.5 * s2) * std::sin(0.5 * s2);
        den = gap + cab;  // cos t - cos b
    };
    ArcIntegrals out;
    out.I1 = integrate_adaptive([&](double s) {
                 double gap, den;
                 parts(s, gap, den);
                 return 2.0 * s * std::sqrt(gap / cab) / den;
             }, 0.0, std::sqrt(alpha), spec).value;
    out.I2 = integrate_adaptive([&](double s) {
                 double gap, den;
                 parts(s, gap, den);
                 const double w = s > 0.0 ? 2.0 * s / std::sqrt(gap) : 2.0 / std::sqrt(std::sin(alpha));
                 return w * std::sqrt(cab) / den;
             }, 0.0, std::sqrt(alpha), spec).value;
    return out;
}

double arc_i2_bound(double alpha) { return 2.0 * pi * std::sqrt(2.0) / std::pow(1.0 - std::cos(alpha), 0.75); }

double liminf_check(double alpha, double rho, double beta) {
    const ModuliPoint m(alpha, beta, rho);
    const DerivedModuli d = derive_moduli(m);
    return std::sqrt(d.kappa) * residual_x1_circle(m);
}

}  // namespace skf
