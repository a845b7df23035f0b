#include "skf/quadrature.hpp"

#include <algorithm>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <queue>

#include "skf/errors.hpp"

namespace skf {

void QuadratureSpec::validate() const {
    if (!(rel_tol > 0.0) || !(abs_tol > 0.0)) throw InvalidArgument("quadrature tolerances must be positive");
    if (max_subdivisions < 4) throw InvalidArgument("max_subdivisions must be at least 4");
}

namespace {

using GK = boost::math::quadrature::gauss_kronrod<double, 15>;

template <class T>
struct Piece {
    double a, b;
    T value;
    double error;
    bool operator<(const Piece& o) const { return error < o.error; }
};

// Single Kronrod application plus the embedded Gauss difference as the error.
template <class T, class F>
Piece<T> rule(const F& f, double a, double b) {
    const auto& xk = GK::abscissa();
    const auto& wk = GK::weights();
    // The 7 Gauss nodes sit at the even Kronrod positions (0 included).
    static const std::vector<double> wg = [] {
        return std::vector<double>(boost::math::quadrature::gauss<double, 7>::weights().begin(),
                                   boost::math::quadrature::gauss<double, 7>::weights().end());
    }();
    const double c = 0.5 * (a + b), h = 0.5 * (b - a);
    const T fc = f(c);
    T kron = fc * wk[0];
    T gauss = fc * wg[0];
    for (std::size_t i = 1; i < xk.size(); ++i) {
        const double dx = h * xk[i];
        const T s = f(c - dx) + f(c + dx);
        kron += s * wk[i];
        if (i % 2 == 0) gauss += s * wg[i / 2];
    }
    kron *= h;
    gauss *= h;
    return {a, b, kron, std::abs(kron - gauss)};
}

template <class T, class F>
BasicQuadResult<T> adaptive(const F& f, double a, double b, const QuadratureSpec& spec) {
    spec.validate();
    if (!(a < b)) {
        if (a == b) return {};
        throw InvalidArgument("integration limits must satisfy a < b");
    }
    std::priority_queue<Piece<T>> heap;
    Piece<T> first = rule<T>(f, a, b);
    T total = first.value;
    double err = first.error;
    heap.push(first);
    int splits = 0;
    auto done = [&] { return err <= std::max(spec.rel_tol * std::abs(total), spec.abs_tol); };
    while (!done() && splits < spec.max_subdivisions) {
        Piece<T> worst = heap.top();
        heap.pop();
        const double mid = 0.5 * (worst.a + worst.b);
        if (!(mid > worst.a && mid < worst.b)) {  // interval exhausted at machine precision
            heap.push(worst);
            break;
        }
        Piece<T> l = rule<T>(f, worst.a, mid);
        Piece<T> r = rule<T>(f, mid, worst.b);
        total += l.value + r.value - worst.value;
        err += l.error + r.error - worst.error;
        heap.push(l);
        heap.push(r);
        ++splits;
    }
    // Re-sum to shed drift from the incremental updates.
    T sum{};
    double esum = 0.0;
    while (!heap.empty()) {
        sum += heap.top().value;
        esum += heap.top().error;
        heap.pop();
    }
    BasicQuadResult<T> res;
    res.value = sum;
    res.error = esum;
    res.subdivisions = splits;
    res.converged = esum <= std::max(spec.rel_tol * std::abs(sum), spec.abs_tol);
    if (!std::isfinite(std::abs(sum))) res.converged = false;
    return res;
}

template <class T, class F>
BasicQuadResult<T> sqrt_singular(const F& f, double a, double b, const std::vector<SingularEndpoint>& eps,
                                 const QuadratureSpec& spec) {
    bool lower = false, upper = false;
    for (const auto& e : eps) {
        if (e.exponent != -0.5 && e.exponent != 0.5)
            throw InvalidArgument("singular endpoint exponent must be +-1/2");
        (e.side == SingularEndpoint::Side::lower ? lower : upper) = true;
    }
    if (!(a < b)) throw InvalidArgument("integration limits must satisfy a < b");
    if (!lower && !upper) return adaptive<T>(f, a, b, spec);

    BasicQuadResult<T> out;
    auto add = [&out](const BasicQuadResult<T>& r) {
        out.value += r.value;
        out.error += r.error;
        out.converged = out.converged && r.converged;
        out.subdivisions += r.subdivisions;
    };
    const double mid = lower && upper ? 0.5 * (a + b) : (lower ? b : a);
    if (lower) {
        const double len = std::sqrt(mid - a);
        add(adaptive<T>([&](double s) { return T(f(a + s * s) * (2.0 * s)); }, 0.0, len, spec));
    } else if (mid > a) {
        add(adaptive<T>(f, a, mid, spec));
    }
    if (upper) {
        const double len = std::sqrt(b - mid);
        add(adaptive<T>([&](double s) { return T(f(b - s * s) * (2.0 * s)); }, 0.0, len, spec));
    } else if (b > mid) {
        add(adaptive<T>(f, mid, b, spec));
    }
    return out;
}

}  // namespace

QuadResult integrate_adaptive(const RealFn& f, double a, double b, const QuadratureSpec& spec) {
    return adaptive<double>(f, a, b, spec);
}

CQuadResult integrate_adaptive_complex(const ComplexFn& f, double a, double b, const QuadratureSpec& spec) {
    return adaptive<std::complex<double>>(f, a, b, spec);
}

QuadResult integrate_sqrt_singular(const RealFn& f, double a, double b,
                                   const std::vector<SingularEndpoint>& endpoints, const QuadratureSpec& spec) {
    return sqrt_singular<double>(f, a, b, endpoints, spec);
}

CQuadResult integrate_sqrt_singular_complex(const ComplexFn& f, double a, double b,
                                    const std::vector<SingularEndpoint>& endpoints, const QuadratureSpec& spec) {
    return sqrt_singular<std::complex<double>>(f, a, b, endpoints, spec);
}

namespace {

double upper_half(const RealFn& f, double c, double v) {
    const double t = c / (v * v);
    return f(t) * 2.0 * c / (v * v * v);
}

}  // namespace

QuadResult integrate_halfline(const RealFn& f, double center, const QuadratureSpec& spec) {
    if (!(center > 0.0)) throw InvalidArgument("half-line split point must be positive");
    // Each half gets the full tolerance; the sum then meets it too.
    QuadResult lo = adaptive<double>([&](double v) { return f(center * v * v) * 2.0 * center * v; }, 0.0, 1.0, spec);
    QuadResult hi = adaptive<double>([&](double v) { return upper_half(f, center, v); }, 0.0, 1.0, spec);
    return {lo.value + hi.value, lo.error + hi.error, lo.converged && hi.converged,
            lo.subdivisions + hi.subdivisions};
}

QuadResult integrate_halfline_symmetric(const RealFn& f, double center, const QuadratureSpec& spec) {
    if (!(center > 0.0)) throw InvalidArgument("symmetry centre must be positive");
    for (int i = 0; i < 16; ++i) {
        const double t = center * std::exp(-3.0 + 6.0 * (i + 0.37) / 16.0);
        const double lhs = f(t) * t;
        const double tr = center * center / t;
        const double rhs = f(tr) * tr;
        if (std::abs(lhs - rhs) > 1e-8 * std::max({std::abs(lhs), std::abs(rhs), 1e-300}))
            throw SymmetryViolation("integrand is not invariant under t -> c^2/t");
    }
    QuadResult hi = adaptive<double>([&](double v) { return upper_half(f, center, v); }, 0.0, 1.0, spec);
    hi.value *= 2.0;
    hi.error *= 2.0;
    return hi;
}

}  // namespace skf
