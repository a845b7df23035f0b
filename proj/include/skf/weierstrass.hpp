#pragma once

#include "skf/quadrature.hpp"
#include "skf/torus.hpp"

namespace skf {

// Densities of the three Weierstrass forms with respect to dz.
struct FormValue {
    cplx phi1, phi2, phi3;
};

// One of the four ends: z = rho e^{+-i beta}, u = u_sign * sqrt(kappa) e^{+-i omega}.
struct EndId {
    enum class Conjugacy { plus, minus };
    Conjugacy conjugacy = Conjugacy::plus;
    int u_sign = 1;
};

cplx end_z(const EndId& e, const ModuliPoint& m);
cplx end_u(const EndId& e, const DerivedModuli& d);

// Default exclusion radius around the ends: 1e-3 * rho.
double default_exclusion(const ModuliPoint& m);

// g = u / sqrt(kappa)
cplx gauss_map(const TorusPoint& p, const DerivedModuli& d);

// dh / dz = (-i/z) / (z/rho + rho/z - 2 cos beta). exclusion < 0 selects the default.
cplx dh_density(cplx z, const ModuliPoint& m, double exclusion = -1.0);

// Same without the end-proximity check, for integrators that manage their own cutoff.
cplx dh_density_unchecked(cplx z, const ModuliPoint& m);

// (phi1, phi2, phi3) = (1/2 (1/g - g), i/2 (1/g + g), 1) dh
FormValue phi_forms(const TorusPoint& p, const ModuliPoint& m, const DerivedModuli& d, double exclusion = -1.0);
FormValue phi_forms_unchecked(cplx z, cplx u, const ModuliPoint& m, const DerivedModuli& d);

// 2 pi i Res of form 1, 2 or 3 at the given end, closed form.
cplx end_residue_closed(int form, const EndId& e, const DerivedModuli& d, double beta);

// Distance from the end to the nearest other puncture or branch point.
double end_clearance(const EndId& e, const ModuliPoint& m);

// Counter-clockwise contour integral of the form around a circle of the given
// radius about the end, trapezoidal rule refined until two levels agree.
cplx end_residue_numeric(int form, const EndId& e, const ModuliPoint& m, double radius);

// Ratio  int u dh / conj(int dh/u)  along 0 -> 0.5i -> e^{i alpha}; equals kappa at solutions.
// `via` replaces the interior waypoint (used to check path independence).
cplx kappa_ratio(const ModuliPoint& m, const DerivedModuli& d, const QuadratureSpec& spec = {},
                 cplx via = cplx(0.0, 0.5));

enum class Segment {
    ApB,  // negative real axis: the x1-direction segment
    BA    // positive real axis: the x2-direction segment
};

// Length of the image of the real-axis segment (half of the half-line integral).
QuadResult segment_length(const ModuliPoint& m, const DerivedModuli& d, Segment which,
                          const QuadratureSpec& spec = {});

// K = -16 |g'/h'|^2 |g|^2 / (1 + |g|^2)^4, with g' g computed from the curve equation.
double gauss_curvature(const TorusPoint& p, const ModuliPoint& m, const DerivedModuli& d);

// Comparison data for the helicoid-type limit.
struct HelicoidData {
    double r_bold = 0.0;
    cplx lambda_plus, lambda_minus;
    ModuliPoint moduli;
    DerivedModuli derived;

    cplx G(const TorusPoint& p) const;
    cplx dH(const TorusPoint& p) const;  // density with respect to dz
};

HelicoidData helicoid_data(const ModuliPoint& m, const DerivedModuli& d);

}  // namespace skf

namespace skf {

// Full half-line integral
//   int_0^inf [sqrt(kappa)/sqrt(s) + sqrt(s)/sqrt(kappa)] (dt/t) / (t/rho + rho/t + 2 sgn cos beta),
//   s = t + 1/t + 2 sgn cos alpha,
// for sgn = +1 (x1 direction) or -1 (x2 direction). The peak at t = rho is
// integrated in closed form, leaving a mildly varying remainder.
QuadResult halfline_integral(const ModuliPoint& m, const DerivedModuli& d, int sgn, const QuadratureSpec& spec = {});

}  // namespace skf
