#pragma once

#include <vector>

#include "skf/torus.hpp"

namespace skf {

// circle_up: z(t) = e^{it}, t in [0, alpha].
// circle_left: z(t) = e^{i(pi - t)}, t in [0, pi - alpha].
enum class SegmentId { circle_up, circle_left };

struct Coeffs {
    double p, q, r;
};

// Segment end (alpha or pi - alpha).
double segment_end(SegmentId seg, const ModuliPoint& m);

// Coefficients of w'' = p + q w + r w' along the segment. The p used here is
// the displayed one, which is twice the normal-derivative term of the
// immersion; the scale is positive so signs are unaffected.
Coeffs coeffs(SegmentId seg, double t, const ModuliPoint& m, const DerivedModuli& d);

// dp/dt at t = 0 (p is odd in t).
double p_slope_at_start(SegmentId seg, const ModuliPoint& m);

struct OdeOptions {
    double t_start_scale = 1e-3;   // Frobenius start at t0 = scale * end
    double rel_tol = 1e-11;
    double abs_tol = 1e-14;
    double p_scale = 1.0;          // multiplies p (large-rho rescaling of dh)
    double changeover = 0.5;       // fraction of the segment handled in t before switching to s
};

struct OdeProfile {
    std::vector<double> t;
    std::vector<double> w;
    std::vector<double> w_prime;
};

struct ReparamProfile {
    std::vector<double> s;
    std::vector<double> w;
    std::vector<double> w_dot;
    std::vector<double> P, Q, R;
};

// Initial value problem from the cubic Frobenius start to end - delta in t.
OdeProfile integrate_support(SegmentId seg, const ModuliPoint& m, const DerivedModuli& d, double delta,
                             const OdeOptions& opt = {});

// Same problem, switching at the changeover to t = end + s^3 and running up to
// s = -delta^{1/3}.
ReparamProfile integrate_support_reparam(SegmentId seg, const ModuliPoint& m, const DerivedModuli& d,
                                         double delta, const OdeOptions& opt = {});

// sqrt(delta) * w'(end - delta) at each delta (one integration pass).
std::vector<double> scaled_end_slopes(SegmentId seg, const ModuliPoint& m, const DerivedModuli& d,
                                      const std::vector<double>& deltas, const OdeOptions& opt = {});

// Exact limit of sqrt(delta) * w'(end - delta) as delta -> 0, obtained by
// integrating in sigma = sqrt(end - t), in which the equation is regular up to
// the endpoint.
double end_slope_limit(SegmentId seg, const ModuliPoint& m, const DerivedModuli& d, const OdeOptions& opt = {});

enum class Sign { negative = -1, indeterminate = 0, positive = 1 };

struct EndSign {
    Sign sign = Sign::indeterminate;
    double value = 0.0;   // extrapolated sqrt(delta) * w'(end - delta) at delta -> 0
    double error = 0.0;   // difference to the halved-ladder extrapolation plus solver noise
    double halved = 0.0;  // extrapolation with the halved delta ladder
};

// Sign of w' at the segment end: Richardson extrapolation in sqrt(delta) over
// delta in {1e-2, 5e-3, 2.5e-3}.
EndSign sign_wprime_end(SegmentId seg, const ModuliPoint& m, const DerivedModuli& d, const OdeOptions& opt = {});

struct MaxPrincipleReport {
    bool q_nonpositive = false;
    bool p_nonnegative_mirrored = false;  // p >= 0 on the mirrored segment [-end, 0]
    bool combination_diverges = false;    // -R + (1-s) Q -> -infinity as s -> 1
    std::vector<double> ladder;           // -R + (1-s) Q on the geometric ladder
};

MaxPrincipleReport check_max_principle_hypotheses(SegmentId seg, const ModuliPoint& m, const DerivedModuli& d);

// Closed-form large-rho limit of w_dot(s) in the s variable.
double large_rho_asymptote(SegmentId seg, const ModuliPoint& m, double s);

}  // namespace skf
