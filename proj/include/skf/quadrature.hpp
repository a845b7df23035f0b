#pragma once

#include <complex>
#include <functional>
#include <vector>

namespace skf {

struct QuadratureSpec {
    double rel_tol = 1e-10;
    double abs_tol = 1e-13;
    int max_subdivisions = 60;

    void validate() const;
};

// Estimate, error bound from the embedded rule pair, and whether the
// requested tolerance was met before the subdivision budget ran out.
template <class T>
struct BasicQuadResult {
    T value{};
    double error = 0.0;
    bool converged = true;
    int subdivisions = 0;
};
using QuadResult = BasicQuadResult<double>;
using CQuadResult = BasicQuadResult<std::complex<double>>;

using RealFn = std::function<double(double)>;
using ComplexFn = std::function<std::complex<double>(double)>;

struct SingularEndpoint {
    enum class Side { lower, upper };
    Side side = Side::lower;
    double exponent = -0.5;  // -1/2 or +1/2
};

// Globally adaptive bisection driven by a 7/15-point Gauss-Kronrod pair.
QuadResult integrate_adaptive(const RealFn& f, double a, double b, const QuadratureSpec& spec = {});
CQuadResult integrate_adaptive_complex(const ComplexFn& f, double a, double b, const QuadratureSpec& spec = {});

// Removes half-power endpoint behaviour with distance = s^2 before
// integrating adaptively. Each declared side is substituted on its half of
// [a, b].
QuadResult integrate_sqrt_singular(const RealFn& f, double a, double b,
                                   const std::vector<SingularEndpoint>& endpoints,
                                   const QuadratureSpec& spec = {});
CQuadResult integrate_sqrt_singular_complex(const ComplexFn& f, double a, double b,
                                    const std::vector<SingularEndpoint>& endpoints,
                                    const QuadratureSpec& spec = {});

// Integral over (0, inf) of an integrand behaving like t^(-1/2) at 0 and
// decaying at least like t^(-3/2). Split at `center`; t = center*v^2 below
// and t = center/v^2 above map both halves onto the finite interval (0, 1].
QuadResult integrate_halfline(const RealFn& f, double center, const QuadratureSpec& spec = {});

// Integral over (0, inf) of an integrand with f(t) t invariant under
// t -> center^2 / t: twice the upper half. Spot-checks the symmetry at 16
// points and throws SymmetryViolation when it fails.
QuadResult integrate_halfline_symmetric(const RealFn& f, double center = 1.0,
                                        const QuadratureSpec& spec = {});

}  // namespace skf
