#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "skf/quadrature.hpp"
#include "skf/torus.hpp"

namespace skf {

// Tolerances used for every period residual unless a caller overrides them.
QuadratureSpec residual_quadrature();

// Period mismatches. x1: the (+) half-line form against 2 pi sin(omega)/sin(beta),
// zero set C+; x2: the (-) form against 2 pi cos(omega)/sin(beta), zero set C-.
struct ResidualPair {
    double x1 = 0.0, x2 = 0.0;
    double err1 = 0.0, err2 = 0.0;
};

double residual_x1(const ModuliPoint& m, const QuadratureSpec& spec = residual_quadrature());
double residual_x2(const ModuliPoint& m, const QuadratureSpec& spec = residual_quadrature());
ResidualPair residuals(const ModuliPoint& m, const QuadratureSpec& spec = residual_quadrature());

// Unit-circle form of the x1 condition (twice the real part of the first form
// integrated over the arc 1 -> e^{i alpha}); -1/2 of residual_x1.
double residual_x1_circle(const ModuliPoint& m, const QuadratureSpec& spec = residual_quadrature());
// Same on the arc -1 -> e^{i alpha}; -1/2 of residual_x2.
double residual_x2_circle(const ModuliPoint& m, const QuadratureSpec& spec = residual_quadrature());

// Symmetric surface alpha = beta = pi/2: root of residual_x1 in rho by bisection.
double solve_rho1(double tol = 1e-12);

// The pair of compact integrals whose equality is the symmetric period condition.
std::pair<double, double> j_values(double rho);
double j_residual(double rho);
double solve_rho1_from_j(double tol = 1e-13);

// Roots at rho = 1 of the circle residuals; NoBracket when there is none.
double beta_plus(double alpha);
double beta_minus(double alpha);

enum class CurveId { Cplus, Cminus };

struct CurveControls {
    double rho_max = 12.0;
    double step = 0.04;
    double min_step = 1e-6;
    double max_step = 0.15;
    double residual_tol = 1e-8;
    double beta_margin = 0.02;  // stop this close to beta = 0 or pi
    int max_samples = 2000;
};

struct CurveSample {
    double beta, rho, residual, error;
};

struct ZeroCurve {
    CurveId which = CurveId::Cplus;
    double alpha = 0.0;
    bool exists = false;          // false when no rho = 1 starting point exists
    std::string stop_reason;
    std::vector<CurveSample> samples;
};

ZeroCurve trace_zero_curve(CurveId which, double alpha, const CurveControls& controls = {});

struct SolvedPoint {
    double beta = 0.0, rho = 0.0;
    ResidualPair residual;
    double circle_x1 = 0.0, circle_x2 = 0.0;
    int iterations = 0;
};

// Damped 2D Newton on (residual_x1, residual_x2) in (beta, rho) at fixed alpha.
SolvedPoint solve_point(double alpha, std::pair<double, double> guess, double step_tol = 1e-10);

std::vector<SolvedPoint> intersect_curves(const ZeroCurve& cplus, const ZeroCurve& cminus);

// Small-alpha lower-bound quantity 2 sqrt(kappa) Re int_0^alpha phi1.
// The two unit-arc integrals at rho = 1 (beta > alpha) whose difference is
// the x1 closing condition:
//   I1 = int_0^alpha sqrt((cos t - cos a)/(cos a - cos b)) dt / (cos t - cos b)
//   I2 = int_0^alpha sqrt((cos a - cos b)/(cos t - cos a)) dt / (cos t - cos b)
struct ArcIntegrals {
    double I1 = 0.0, I2 = 0.0;
};
ArcIntegrals arc_integrals(double alpha, double beta);

// Upper bound on I2 as beta -> alpha: 2 pi sqrt(2) / (1 - cos alpha)^{3/4}.
double arc_i2_bound(double alpha);

double liminf_check(double alpha, double rho, double beta = pi / 2);

}  // namespace skf
