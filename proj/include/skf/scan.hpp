#pragma once
// Grid scans over moduli space. Each scan has a serial reference and an
// OpenMP version; both call the same per-cell kernel, so results agree bit
// for bit.

#include <vector>

#include "skf/period.hpp"
#include "skf/support_ode.hpp"

namespace skf {

enum class Exec { serial, parallel };

// Thread cap for parallel scans: SKFAMILY_THREADS if set to a positive
// integer, otherwise the OpenMP default.
int scan_threads();

struct Axis {
    double lo, hi;
    int n;
    double at(int i) const { return n == 1 ? lo : lo + (hi - lo) * i / (n - 1); }
};

struct SignCell {
    double beta = 0.0, rho = 0.0;
    double residual = 0.0;  // residual_x1 for circle_up, residual_x2 for circle_left
    int residual_sign = 0;
    int ode_sign = 0;       // 0 when indeterminate
    double ode_value = 0.0, ode_error = 0.0;
};

struct SignGrid {
    double alpha = 0.0;
    SegmentId segment = SegmentId::circle_up;
    Axis beta_axis{}, rho_axis{};
    std::vector<SignCell> cells;  // row-major: index = i_beta * rho_axis.n + i_rho
};

SignGrid sign_grid(double alpha, SegmentId seg, const Axis& beta, const Axis& rho, Exec exec);

struct SignAgreement {
    int determinate = 0;
    int sign_constant = 0;     // majority value of ode_sign * residual_sign
    int agree = 0;             // determinate cells matching the constant
    double rate = 0.0;
    int residual_crossings = 0;  // adjacent cell pairs where the residual changes sign
    int interleaved = 0;         // of those, with an ODE sign change within one cell
};

SignAgreement summarize(const SignGrid& grid);

struct ResidualCell {
    double beta, rho;
    ResidualPair r;
};
std::vector<ResidualCell> residual_grid(double alpha, const Axis& beta, const Axis& rho, Exec exec);

struct ResidueCell {
    double alpha, beta, rho;
    double max_error;  // closed form vs contour, over forms and ends
    double phi3_sum;   // |sum of the four phi3 residues|
};
std::vector<ResidueCell> residue_grid(const Axis& alpha, const Axis& beta, const Axis& rho, Exec exec);

}  // namespace skf
