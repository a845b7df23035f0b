#pragma once

#include <complex>
#include <utility>
#include <vector>

namespace skf {

using cplx = std::complex<double>;

inline constexpr double pi = 3.14159265358979323846;

// Surface parameters: branch-point angle alpha, end angle beta, end radius rho.
struct ModuliPoint {
    double alpha = pi / 2;
    double beta = pi / 2;
    double rho = 2.0;

    ModuliPoint() = default;
    // Throws InvalidArgument outside alpha in (0,pi), beta in [0,pi], rho >= 1
    // and DegenerateModuli for the collapsed lattice rho == 1, beta == alpha.
    ModuliPoint(double alpha, double beta, double rho);

    // The end positions rho*exp(+-i beta) in the z-plane.
    cplx end_plus() const;
    cplx end_minus() const;
};

// kappa * exp(2 i omega) = (rho + 1/rho) cos(beta) - 2 cos(alpha) + i (rho - 1/rho) sin(beta)
struct DerivedModuli {
    double kappa = 1.0;
    double omega = 0.0;
};

struct TorusPoint {
    cplx z;
    cplx u;
    int sheet = 1;  // u == sheet * u_principal(z, alpha)
};

struct PathSpec {
    std::vector<cplx> waypoints;
    int refinement_limit = 40;          // maximum halving depth per step
    std::vector<cplx> punctures;        // points the path must keep away from
    double exclusion_radius = 1e-3;
};

// Right-hand side of the kappa/omega relation as a complex number.
cplx moduli_rhs(const ModuliPoint& m);

DerivedModuli derive_moduli(const ModuliPoint& m);

// Radicand z + 1/z - 2 cos(alpha).
cplx radicand(cplx z, double alpha);

// sheet * principal square root of the radicand (argument in (-pi/2, pi/2]).
cplx u_principal(cplx z, double alpha, int sheet = 1);

// Sheet tag of an arbitrary root u over z.
int sheet_of(cplx z, cplx u, double alpha);

// One continuation step: the root over z closest to u_prev. Throws
// BranchAmbiguity if the two roots are not clearly separated relative to the
// jump from u_prev.
cplx u_follow(cplx z, cplx u_prev, double alpha);

// Analytic continuation of u along a polyline, refining steps by halving.
std::vector<TorusPoint> continue_u(const PathSpec& path, const TorusPoint& start, double alpha);

// Roots of z + 1/z = kappa + 2 cos(alpha): the z-values where g = 1.
std::pair<cplx, cplx> lambda_pm(double kappa, double alpha);

}  // namespace skf

namespace skf {

// Branch-consistent evaluation of u near a path. u is written as
//   sqrt(z - e^{i alpha}) * sqrt(z - e^{-i alpha}) / sqrt(z)
// with each factor's cut turned away from the path, so a single sign fixed at
// a reference point covers the whole path. The path is described by sample
// points; every factor must see them within an open half-plane.
class BranchTracker {
public:
    BranchTracker(double alpha, const std::vector<cplx>& path_samples, cplx z_ref, cplx u_ref);

    cplx operator()(cplx z) const;
    double alpha() const { return alpha_; }

private:
    double alpha_;
    cplx roots_[3];   // e^{i alpha}, e^{-i alpha}, 0
    cplx dir_[3];     // unit direction of each factor's cone axis
    cplx sqrt_dir_[3];
    double sign_ = 1.0;

    cplx factor(int k, cplx z) const;
    cplx raw(cplx z) const;
};

}  // namespace skf
