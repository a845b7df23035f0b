#pragma once
// Continuation of the two-residual solution branch in (alpha, beta, rho)
// from the symmetric surface to the helicoid limit beta -> 0.

#include <string>
#include <vector>

#include "skf/period.hpp"

namespace skf {

struct FamilyControls {
    double initial_step = 0.02;
    double min_step = 1e-7;
    double max_step = 0.08;
    double residual_tol = 1e-10;  // corrector target on max(|x1|, |x2|)
    double beta_stop = 0.02;
    int max_samples = 5000;
};

struct FamilySample {
    double alpha, beta, rho, kappa, omega;
    double arclength;  // chord length accumulated from the symmetric start
    double x1, x2;     // residuals at the accepted point
    double k() const { return 1.0 + arclength; }
};

struct FamilyBranch {
    std::vector<FamilySample> samples;
    std::string stop_reason;
    bool reached_beta_stop = false;
};

// Pseudo-arclength trace from (pi/2, pi/2, rho1), first heading to smaller alpha.
// Throws StepFailure (message carries the last good sample) if the step underflows.
FamilyBranch trace_family(const FamilyControls& controls = {});

// Residuals of the reflected point (pi - alpha, pi - beta, rho); the reflection
// swaps the two residuals, so both stay near zero along the branch.
ResidualPair reflected_residuals(const FamilySample& s);

struct HelicoidLimit {
    double alpha_star, rho_star;
    double alpha_error, rho_error;         // spread between fits of two orders
    double kappa_gap_last;                 // |kappa - (rho + 1/rho - 2 cos alpha)| at the last sample
    double kappa_gap_coeff;                // kappa_gap / beta^2 fitted over the tail
    double lambda_plus, lambda_minus;      // at the last sample
    int tail_samples;
};

// Extrapolates (alpha, rho) to beta = 0 by least-squares fits in beta^2 over
// the tail with beta < tail_beta. Throws InsufficientTail with fewer than 5 points.
HelicoidLimit detect_helicoid_limit(const FamilyBranch& branch, double tail_beta = 0.3);

}  // namespace skf
