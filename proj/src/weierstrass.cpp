#include "skf/weierstrass.hpp"

#include <algorithm>
#include <cmath>

#include "skf/errors.hpp"

namespace skf {

cplx end_z(const EndId& e, const ModuliPoint& m) {
    return e.conjugacy == EndId::Conjugacy::plus ? m.end_plus() : m.end_minus();
}

cplx end_u(const EndId& e, const DerivedModuli& d) {
    const double w = e.conjugacy == EndId::Conjugacy::plus ? d.omega : -d.omega;
    return double(e.u_sign) * std::polar(std::sqrt(d.kappa), w);
}

double default_exclusion(const ModuliPoint& m) { return 1e-3 * m.rho; }

cplx gauss_map(const TorusPoint& p, const DerivedModuli& d) { return p.u / std::sqrt(d.kappa); }

cplx dh_density_unchecked(cplx z, const ModuliPoint& m) {
    return cplx(0.0, -1.0) / z / (z / m.rho + m.rho / z - 2.0 * std::cos(m.beta));
}

cplx dh_density(cplx z, const ModuliPoint& m, double exclusion) {
    const double ex = exclusion < 0.0 ? default_exclusion(m) : exclusion;
    if (std::abs(z - m.end_plus()) < ex || std::abs(z - m.end_minus()) < ex)
        throw PoleAtEnd("z lies within the exclusion radius of an end");
    if (z == cplx(0.0, 0.0)) throw InvalidArgument("dh density is not evaluated at z = 0");
    return dh_density_unchecked(z, m);
}

FormValue phi_forms_unchecked(cplx z, cplx u, const ModuliPoint& m, const DerivedModuli& d) {
    const cplx g = u / std::sqrt(d.kappa);
    const cplx dh = dh_density_unchecked(z, m);
    const cplx ig = 1.0 / g;
    return {0.5 * (ig - g) * dh, cplx(0.0, 0.5) * (ig + g) * dh, dh};
}

FormValue phi_forms(const TorusPoint& p, const ModuliPoint& m, const DerivedModuli& d, double exclusion) {
    dh_density(p.z, m, exclusion);  // proximity check
    return phi_forms_unchecked(p.z, p.u, m, d);
}

cplx end_residue_closed(int form, const EndId& e, const DerivedModuli& d, double beta) {
    if (!(beta > 0.0 && beta < pi)) throw BetaDegenerate("end residues need beta in (0, pi)");
    if (form < 1 || form > 3) throw InvalidArgument("form index must be 1, 2 or 3");
    const double c = pi / std::sin(beta);
    // Reference end (z = rho e^{i beta}, u = +sqrt(kappa) e^{i omega}).
    cplx r[3] = {-c * std::sin(d.omega), c * std::cos(d.omega), cplx(0.0, -c)};
    if (e.conjugacy == EndId::Conjugacy::minus) {
        // Pull-back by (z,u) -> (conj z, conj u) with orientation reversal.
        r[0] = std::conj(r[0]);
        r[1] = -std::conj(r[1]);
        r[2] = std::conj(r[2]);
    }
    if (e.u_sign < 0) {
        r[0] = -r[0];
        r[1] = -r[1];
    }
    return r[form - 1];
}

double end_clearance(const EndId& e, const ModuliPoint& m) {
    const cplx ze = end_z(e, m);
    const cplx other = e.conjugacy == EndId::Conjugacy::plus ? m.end_minus() : m.end_plus();
    return std::min({std::abs(ze), std::abs(ze - std::polar(1.0, m.alpha)), std::abs(ze - std::polar(1.0, -m.alpha)),
                     std::abs(ze - other)});
}

cplx end_residue_numeric(int form, const EndId& e, const ModuliPoint& m, double radius) {
    if (form < 1 || form > 3) throw InvalidArgument("form index must be 1, 2 or 3");
    const DerivedModuli d = derive_moduli(m);
    const cplx ze = end_z(e, m);
    const double clearance = end_clearance(e, m);
    if (!(radius > 0.0) || radius >= clearance)
        throw InvalidArgument("residue circle must not reach another puncture or branch point");

    std::vector<cplx> ring;
    for (int k = 0; k < 16; ++k) ring.push_back(ze + std::polar(radius, 2.0 * pi * k / 16));
    const BranchTracker branch(m.alpha, ring, ze, end_u(e, d));

    auto trapezoid = [&](int n) {
        cplx sum = 0.0;
        for (int k = 0; k < n; ++k) {
            const cplx dz = std::polar(radius, 2.0 * pi * k / n);
            const cplx z = ze + dz;
            const FormValue f = phi_forms_unchecked(z, branch(z), m, d);
            const cplx v = form == 1 ? f.phi1 : (form == 2 ? f.phi2 : f.phi3);
            sum += v * cplx(0.0, 1.0) * dz;
        }
        return sum * (2.0 * pi / n);
    };
    cplx prev = trapezoid(32);
    for (int n = 64; n <= (1 << 20); n *= 2) {
        const cplx cur = trapezoid(n);
        if (std::abs(cur - prev) <= 1e-11 * std::max(1.0, std::abs(cur))) return cur;
        prev = cur;
    }
    throw StepFailure("residue contour sum did not settle");
}

namespace {

// Sum of adaptive integrals over straight pieces 0 -> via -> e^{i alpha},
// with sqrt endpoint regularisation at z = 0 and z = e^{i alpha}.
std::pair<CQuadResult, CQuadResult> kappa_integrals(const ModuliPoint& m, const DerivedModuli& d,
                                                    const QuadratureSpec& spec, cplx via) {
    const cplx c = std::polar(1.0, m.alpha);
    (void)d;
    std::vector<cplx> samples;
    for (int k = 0; k <= 16; ++k) samples.push_back(via * (k / 16.0));
    for (int k = 1; k <= 16; ++k) samples.push_back(via + (c - via) * (k / 16.0));
    const BranchTracker br(m.alpha, samples, via, u_principal(via, m.alpha));

    using SE = SingularEndpoint;
    CQuadResult num, den;
    auto accumulate = [](CQuadResult& acc, const CQuadResult& r) {
        acc.value += r.value;
        acc.error += r.error;
        acc.converged = acc.converged && r.converged;
    };
    {
        const cplx dz = via;
        auto fu = [&](double t) -> cplx {
            const cplx z = via * t;
            return br(z) * dh_density_unchecked(z, m) * dz;
        };
        auto fd = [&](double t) -> cplx {
            const cplx z = via * t;
            return dh_density_unchecked(z, m) / br(z) * dz;
        };
        accumulate(num, integrate_sqrt_singular_complex(ComplexFn(fu), 0.0, 1.0, {{SE::Side::lower, -0.5}}, spec));
        accumulate(den, integrate_sqrt_singular_complex(ComplexFn(fd), 0.0, 1.0, {{SE::Side::lower, 0.5}}, spec));
    }
    {
        const cplx dz = c - via;
        auto fu = [&](double t) -> cplx {
            const cplx z = via + dz * t;
            return br(z) * dh_density_unchecked(z, m) * dz;
        };
        auto fd = [&](double t) -> cplx {
            const cplx z = via + dz * t;
            return dh_density_unchecked(z, m) / br(z) * dz;
        };
        accumulate(num, integrate_sqrt_singular_complex(ComplexFn(fu), 0.0, 1.0, {{SE::Side::upper, 0.5}}, spec));
        accumulate(den, integrate_sqrt_singular_complex(ComplexFn(fd), 0.0, 1.0, {{SE::Side::upper, -0.5}}, spec));
    }
    return {num, den};
}

}  // namespace

cplx kappa_ratio(const ModuliPoint& m, const DerivedModuli& d, const QuadratureSpec& spec, cplx via) {
    if (!(m.rho > 1.0)) throw InvalidArgument("kappa_ratio needs rho > 1");
    const auto [num, den] = kappa_integrals(m, d, spec, via);
    return num.value / std::conj(den.value);
}

QuadResult halfline_integral(const ModuliPoint& m, const DerivedModuli& d, int sgn, const QuadratureSpec& spec) {
    if (!(m.beta > 0.0 && m.beta < pi)) throw BetaDegenerate("half-line integrals need beta in (0, pi)");
    const double rho = m.rho;
    const double sk = std::sqrt(d.kappa);
    // Squared half-angle terms keep both factors accurate near their minima.
    const double a2 = sgn < 0 ? 4.0 * std::pow(std::sin(0.5 * m.alpha), 2) : 4.0 * std::pow(std::cos(0.5 * m.alpha), 2);
    const double b2 = sgn < 0 ? 4.0 * std::pow(std::sin(0.5 * m.beta), 2) : 4.0 * std::pow(std::cos(0.5 * m.beta), 2);
    auto F = [&](double t) {
        const double s = (t - 1.0) * (t - 1.0) / t + a2;
        return (d.kappa + s) / (sk * std::sqrt(s));
    };
    const double f_peak = F(rho);
    auto remainder = [&](double t) {
        const double tden = (t - rho) * (t - rho) / rho + b2 * t;  // t * denominator
        return (F(t) - f_peak) / tden;
    };
    QuadResult r = integrate_halfline(RealFn(remainder), rho, spec);
    // int_0^inf (dt/t) / (t/rho + rho/t - 2 cos b) = (pi - b) / sin b
    const double b = sgn < 0 ? m.beta : pi - m.beta;
    r.value += f_peak * (pi - b) / std::sin(b);
    return r;
}

QuadResult segment_length(const ModuliPoint& m, const DerivedModuli& d, Segment which, const QuadratureSpec& spec) {
    QuadResult r = halfline_integral(m, d, which == Segment::ApB ? +1 : -1, spec);
    r.value *= 0.5;
    r.error *= 0.5;
    return r;
}

double gauss_curvature(const TorusPoint& p, const ModuliPoint& m, const DerivedModuli& d) {
    const cplx z = p.z;
    const cplx gg_prime = (1.0 - 1.0 / (z * z)) / (2.0 * d.kappa);  // g * dg/dz
    const cplx hp = dh_density(z, m);
    const double g2 = std::norm(p.u) / d.kappa;
    const double q = 1.0 + g2;
    return -16.0 * std::norm(gg_prime) / std::norm(hp) / (q * q * q * q);
}

cplx HelicoidData::G(const TorusPoint& p) const {
    const cplx g = gauss_map(p, derived);
    return (1.0 + g) / (1.0 - g);
}

cplx HelicoidData::dH(const TorusPoint& p) const {
    const cplx z = p.z;
    const cplx num = (z - lambda_plus) * (z - lambda_minus);
    const cplx den = (z - moduli.end_plus()) * (z - moduli.end_minus());
    return cplx(0.0, std::sqrt(std::sin(moduli.alpha) / 2.0)) * num / den / (p.u * z);
}

HelicoidData helicoid_data(const ModuliPoint& m, const DerivedModuli& d) {
    HelicoidData s;
    s.r_bold = std::sqrt(2.0 * std::sin(m.alpha) / d.kappa);
    std::tie(s.lambda_plus, s.lambda_minus) = lambda_pm(d.kappa, m.alpha);
    s.moduli = m;
    s.derived = d;
    return s;
}

}  // namespace skf
