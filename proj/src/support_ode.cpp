#include "skf/support_ode.hpp"

#include <algorithm>
#include <array>
#include <boost/numeric/odeint.hpp>
#include <cmath>
#include <string>

#include "skf/errors.hpp"
#include "skf/quadrature.hpp"

namespace skf {

namespace {

namespace odeint = boost::numeric::odeint;
using State = std::array<double, 2>;

// circle_left is circle_up of the point (pi - alpha, pi - beta, rho); kappa is shared.
struct Angles {
    double a, b;
};

Angles effective(SegmentId seg, const ModuliPoint& m) {
    if (seg == SegmentId::circle_up) return {m.alpha, m.beta};
    return {pi - m.alpha, pi - m.beta};
}

double sinc(double y) { return std::abs(y) < 1e-8 ? 1.0 - y * y / 6.0 : std::sin(y) / y; }

// Interior pole of p at rho = 1 (t = b inside the segment).
bool has_interior_pole(const Angles& g, const ModuliPoint& m) { return m.rho == 1.0 && g.b < g.a; }

Coeffs coeffs_at(const Angles& g, double t, const ModuliPoint& m, const DerivedModuli& d, double p_scale) {
    const double c = 2.0 * std::sin(0.5 * (g.a + t)) * std::sin(0.5 * (g.a - t));
    const double st = std::sin(t);
    const double A = (m.rho + 1.0 / m.rho) * std::cos(t) - 2.0 * std::cos(g.b);
    const double B = (1.0 / m.rho - m.rho) * st;
    const double AB = A * A + B * B;
    if (AB == 0.0) throw CoefficientPole("p has a pole at t = " + std::to_string(t));
    const double k2c = d.kappa + 2.0 * c;
    Coeffs out;
    out.p = -st / c * A / AB * p_scale;
    out.q = -2.0 * d.kappa * st * st / (c * k2c * k2c);
    out.r = std::cos(t) / st + 0.5 * st / c + 2.0 * st / k2c;
    return out;
}

struct Budget {
    long steps = 0;
    long limit = 2000000;
    void tick(double x) {
        if (++steps > limit) throw StepFailure("step budget exhausted at " + std::to_string(x));
    }
};

template <class Sys>
void advance(Sys sys, State& y, double x0, double x1, const OdeOptions& opt, Budget& budget,
             std::vector<std::array<double, 3>>* trace = nullptr) {
    auto stepper = odeint::make_controlled(opt.abs_tol, opt.rel_tol, odeint::runge_kutta_dopri5<State>());
    const double h0 = (x1 - x0) * 1e-4;
    odeint::integrate_adaptive(stepper, sys, y, x0, x1, h0, [&](const State& s, double x) {
        budget.tick(x);
        if (!std::isfinite(s[0]) || !std::isfinite(s[1]))
            throw StepFailure("non-finite support function at " + std::to_string(x));
        if (trace) trace->push_back({x, s[0], s[1]});
    });
}

struct Problem {
    Angles g;
    double end;
    ModuliPoint m;
    DerivedModuli d;
    OdeOptions opt;
};

Problem make_problem(SegmentId seg, const ModuliPoint& m, const DerivedModuli& d, const OdeOptions& opt) {
    Problem pr{effective(seg, m), segment_end(seg, m), m, d, opt};
    if (has_interior_pole(pr.g, m))
        throw CoefficientPole("rho = 1 places a pole of p inside the segment");
    if (!(opt.t_start_scale > 0.0 && opt.t_start_scale < 0.5)) throw InvalidArgument("t_start_scale out of range");
    if (!(opt.changeover > opt.t_start_scale && opt.changeover < 1.0)) throw InvalidArgument("changeover out of range");
    return pr;
}

double p_slope(const Angles& g, const ModuliPoint& m) {
    const double A0 = (m.rho - 1.0) * (m.rho - 1.0) / m.rho + 4.0 * std::pow(std::sin(0.5 * g.b), 2);
    if (A0 == 0.0) throw CoefficientPole("p has a pole at t = 0");
    return -1.0 / ((1.0 - std::cos(g.a)) * A0);
}

// Frobenius start and t-form integration up to t1.
State run_t(const Problem& pr, double t1, Budget& budget, std::vector<std::array<double, 3>>* trace = nullptr) {
    const double t0 = pr.opt.t_start_scale * pr.end;
    const double c3 = pr.opt.p_scale * p_slope(pr.g, pr.m) / 3.0;
    State y{c3 * t0 * t0 * t0, 3.0 * c3 * t0 * t0};
    if (trace) trace->push_back({t0, y[0], y[1]});
    auto sys = [&](const State& s, State& ds, double t) {
        const Coeffs k = coeffs_at(pr.g, t, pr.m, pr.d, pr.opt.p_scale);
        ds[0] = s[1];
        ds[1] = k.p + k.q * s[0] + k.r * s[1];
    };
    advance(sys, y, t0, t1, pr.opt, budget, trace);
    return y;
}

// s-form right-hand side, t = end + s^3.
auto s_system(const Problem& pr) {
    return [&pr](const State& y, State& dy, double s) {
        const double t = pr.end + s * s * s;
        const Coeffs k = coeffs_at(pr.g, t, pr.m, pr.d, pr.opt.p_scale);
        const double s2 = s * s;
        dy[0] = y[1];
        dy[1] = 9.0 * s2 * s2 * (k.p + k.q * y[0]) + (3.0 * s2 * k.r + 2.0 / s) * y[1];
    };
}

}  // namespace

double segment_end(SegmentId seg, const ModuliPoint& m) {
    return seg == SegmentId::circle_up ? m.alpha : pi - m.alpha;
}

Coeffs coeffs(SegmentId seg, double t, const ModuliPoint& m, const DerivedModuli& d) {
    const Angles g = effective(seg, m);
    if (!(t > 0.0 && t < g.a)) throw InvalidArgument("t outside the open segment");
    if (m.rho == 1.0 && t == g.b) throw CoefficientPole("p has a pole at t = beta for rho = 1");
    return coeffs_at(g, t, m, d, 1.0);
}

double p_slope_at_start(SegmentId seg, const ModuliPoint& m) { return p_slope(effective(seg, m), m); }

OdeProfile integrate_support(SegmentId seg, const ModuliPoint& m, const DerivedModuli& d, double delta,
                             const OdeOptions& opt) {
    const Problem pr = make_problem(seg, m, d, opt);
    if (!(delta > 0.0 && delta < pr.end * (1.0 - opt.t_start_scale))) throw InvalidArgument("delta out of range");
    Budget budget;
    std::vector<std::array<double, 3>> trace;
    run_t(pr, pr.end - delta, budget, &trace);
    OdeProfile out;
    for (const auto& r : trace) {
        if (!out.t.empty() && r[0] <= out.t.back()) continue;
        out.t.push_back(r[0]);
        out.w.push_back(r[1]);
        out.w_prime.push_back(r[2]);
    }
    return out;
}

ReparamProfile integrate_support_reparam(SegmentId seg, const ModuliPoint& m, const DerivedModuli& d, double delta,
                                         const OdeOptions& opt) {
    const Problem pr = make_problem(seg, m, d, opt);
    const double tc = opt.changeover * pr.end;
    if (!(delta > 0.0 && delta < pr.end - tc)) throw InvalidArgument("delta must lie beyond the changeover");
    Budget budget;
    State y = run_t(pr, tc, budget);
    const double sc = -std::cbrt(pr.end - tc);
    const double s1 = -std::cbrt(delta);
    y[1] *= 3.0 * sc * sc;  // w_dot = 3 s^2 w'
    std::vector<std::array<double, 3>> trace{{sc, y[0], y[1]}};
    advance(s_system(pr), y, sc, s1, opt, budget, &trace);
    ReparamProfile out;
    for (const auto& r : trace) {
        if (!out.s.empty() && r[0] <= out.s.back()) continue;
        const double s = r[0];
        const Coeffs k = coeffs_at(pr.g, pr.end + s * s * s, m, d, opt.p_scale);
        out.s.push_back(s);
        out.w.push_back(r[1]);
        out.w_dot.push_back(r[2]);
        out.P.push_back(9.0 * std::pow(s, 4) * k.p);
        out.Q.push_back(9.0 * std::pow(s, 4) * k.q);
        out.R.push_back(3.0 * s * s * k.r + 2.0 / s);
    }
    return out;
}

std::vector<double> scaled_end_slopes(SegmentId seg, const ModuliPoint& m, const DerivedModuli& d,
                                      const std::vector<double>& deltas, const OdeOptions& opt) {
    const Problem pr = make_problem(seg, m, d, opt);
    const double tc = opt.changeover * pr.end;
    Budget budget;
    State y = run_t(pr, tc, budget);
    double s = -std::cbrt(pr.end - tc);
    y[1] *= 3.0 * s * s;
    std::vector<double> sorted = deltas;
    std::sort(sorted.begin(), sorted.end(), std::greater<>());
    std::vector<double> out;
    for (double dl : sorted) {
        if (!(dl > 0.0 && dl < pr.end - tc)) throw InvalidArgument("delta must lie beyond the changeover");
        const double s1 = -std::cbrt(dl);
        advance(s_system(pr), y, s, s1, opt, budget);
        s = s1;
        out.push_back(std::sqrt(dl) * y[1] / (3.0 * s * s));
    }
    // Report in the caller's order.
    std::vector<double> ordered;
    for (double dl : deltas) {
        const auto it = std::find(sorted.begin(), sorted.end(), dl);
        ordered.push_back(out[static_cast<std::size_t>(it - sorted.begin())]);
    }
    return ordered;
}

double end_slope_limit(SegmentId seg, const ModuliPoint& m, const DerivedModuli& d, const OdeOptions& opt) {
    const Problem pr = make_problem(seg, m, d, opt);
    const double tc = opt.changeover * pr.end;
    Budget budget;
    State y = run_t(pr, tc, budget);
    const double sig_c = std::sqrt(pr.end - tc);
    // V(sigma) = w(end - sigma^2); integrate in tau = sig_c - sigma towards sigma = 0.
    State v{y[0], -2.0 * sig_c * y[1]};
    const double a = pr.g.a;
    auto sys = [&](const State& s, State& ds, double tau) {
        const double sig = sig_c - tau;
        const double x = sig * sig;
        const double t = a - x;
        const double st = std::sin(t);
        const double x_over_c = 1.0 / (std::sin(a - 0.5 * x) * sinc(0.5 * x));
        const double c = x / x_over_c;
        const double A = (pr.m.rho + 1.0 / pr.m.rho) * std::cos(t) - 2.0 * std::cos(pr.g.b);
        const double B = (1.0 / pr.m.rho - pr.m.rho) * st;
        const double k2c = pr.d.kappa + 2.0 * c;
        const double xp = -st * x_over_c * A / (A * A + B * B) * pr.opt.p_scale;   // x p
        const double xq = -2.0 * pr.d.kappa * st * st * x_over_c / (k2c * k2c);      // x q
        double damp = 0.0;  // (1 - 2 x r) / sigma, regular at sigma = 0
        if (sig > 0.0) {
            const double h = 0.5 * x;
            const double sin_minus = x < 1e-2 ? x * x * x * (-1.0 / 48.0 + x * x / 3840.0) : std::sin(h) - h;
            const double c_minus_xs = x * 2.0 * std::cos(a - 0.75 * x) * std::sin(0.25 * x) +
                                      2.0 * std::sin(a - h) * sin_minus;  // c - x sin t
            const double one_minus = c_minus_xs / x * x_over_c;         // 1 - x sin t / c
            damp = (one_minus - 2.0 * x * std::cos(t) / st - 4.0 * x * st / k2c) / sig;
        }
        const double vss = 4.0 * xp + 4.0 * xq * s[0] + damp * s[1];
        ds[0] = -s[1];
        ds[1] = -vss;
    };
    advance(sys, v, 0.0, sig_c, opt, budget);
    return -0.5 * v[1];
}

namespace {

// Neville extrapolation to x = 0 of values sampled at nodes x.
double extrapolate_to_zero(const std::vector<double>& x, std::vector<double> f) {
    const std::size_t n = x.size();
    for (std::size_t k = 1; k < n; ++k)
        for (std::size_t i = n - 1; i >= k; --i) {
            f[i] = (x[i] * f[i - 1] - x[i - k] * f[i]) / (x[i] - x[i - k]);
            if (i == k) break;
        }
    return f[n - 1];
}

}  // namespace

EndSign sign_wprime_end(SegmentId seg, const ModuliPoint& m, const DerivedModuli& d, const OdeOptions& opt) {
    const std::vector<double> deltas{1e-2, 5e-3, 2.5e-3, 1.25e-3};
    const std::vector<double> g = scaled_end_slopes(seg, m, d, deltas, opt);
    std::vector<double> sig;
    for (double dl : deltas) sig.push_back(std::sqrt(dl));
    EndSign out;
    out.value = extrapolate_to_zero({sig[0], sig[1], sig[2]}, {g[0], g[1], g[2]});
    out.halved = extrapolate_to_zero({sig[1], sig[2], sig[3]}, {g[1], g[2], g[3]});
    double scale = 0.0;
    for (double v : g) scale = std::max(scale, std::abs(v));
    out.error = std::abs(out.value - out.halved) + 1e3 * opt.rel_tol * scale;
    if (std::abs(out.value) > 10.0 * out.error)
        out.sign = out.value > 0.0 ? Sign::positive : Sign::negative;
    return out;
}

MaxPrincipleReport check_max_principle_hypotheses(SegmentId seg, const ModuliPoint& m, const DerivedModuli& d) {
    const Angles g = effective(seg, m);
    const double end = g.a;
    MaxPrincipleReport rep;
    rep.q_nonpositive = true;
    rep.p_nonnegative_mirrored = true;
    for (int i = 1; i < 400; ++i) {
        const double t = end * i / 400.0;
        if (has_interior_pole(g, m) && std::abs(t - g.b) < 1e-9) continue;
        const Coeffs k = coeffs_at(g, t, m, d, 1.0);
        if (k.q > 0.0) rep.q_nonpositive = false;
        if (k.p > 0.0) rep.p_nonnegative_mirrored = false;  // p is odd: p(-t) = -p(t)
    }
    // Mirrored segment t = -end * s: Q = end^2 q, R = -end r(t), with r odd and q even.
    bool decreasing = true;
    for (int k = 1; k <= 10; ++k) {
        const double s = 1.0 - std::pow(10.0, -k);
        const Coeffs c = coeffs_at(g, end * s, m, d, 1.0);
        const double minus_R = -end * c.r;  // -R(s) = end * r(-end s) = -end * r(end s)
        const double val = minus_R + (1.0 - s) * end * end * c.q;
        if (!rep.ladder.empty() && !(val < rep.ladder.back())) decreasing = false;
        rep.ladder.push_back(val);
    }
    rep.combination_diverges = decreasing && rep.ladder.back() < -1e6 &&
                               rep.ladder.back() < 1e4 * std::min(rep.ladder.front(), -1e-300);
    return rep;
}

double large_rho_asymptote(SegmentId seg, const ModuliPoint& m, double s) {
    const Angles g = effective(seg, m);
    const double end = g.a;
    const double s0 = -std::cbrt(end);
    if (!(s > s0 && s < 0.0)) throw InvalidArgument("s outside (-end^{1/3}, 0)");
    auto cgap = [&](double t) { return 2.0 * std::sin(0.5 * (g.a + t)) * std::sin(0.5 * (g.a - t)); };
    auto integrand = [&](double sg) {
        const double t = end + sg * sg * sg;
        return sg * sg * std::cos(t) / std::sqrt(cgap(t));
    };
    const QuadResult in = integrate_adaptive(integrand, s0, s, {1e-12, 1e-15, 200});
    const double t = end + s * s * s;
    return -9.0 * s * s * std::sin(t) / std::sqrt(cgap(t)) * in.value;
}

}  // namespace skf
