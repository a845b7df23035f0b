#include "skf/continuation.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <sstream>

#include "skf/errors.hpp"
#include "skf/torus.hpp"

namespace skf {

namespace {

using V3 = Eigen::Vector3d;
using M23 = Eigen::Matrix<double, 2, 3>;

Eigen::Vector2d F(const V3& x) {
    const ResidualPair r = residuals(ModuliPoint(x[0], x[1], x[2]));
    return {r.x1, r.x2};
}

M23 jacobian(const V3& x) {
    M23 J;
    for (int c = 0; c < 3; ++c) {
        const double h = 1e-6 * std::max(1.0, std::abs(x[c]));
        V3 xp = x, xm = x;
        xp[c] += h;
        xm[c] -= h;
        J.col(c) = (F(xp) - F(xm)) / (2 * h);
    }
    return J;
}

V3 null_tangent(const M23& J) {
    V3 t = V3(J.row(0)).cross(V3(J.row(1)));
    const double n = t.norm();
    if (!(n > 0.0)) throw StepFailure("rank-deficient Jacobian on the family branch");
    return t / n;
}

bool in_domain(const V3& x) { return x[0] > 0.0 && x[0] < pi && x[1] > 0.0 && x[1] < pi && x[2] >= 1.0; }

FamilySample make_sample(const V3& x, double arclength) {
    const ModuliPoint m(x[0], x[1], x[2]);
    const DerivedModuli d = derive_moduli(m);
    const ResidualPair r = residuals(m);
    return {x[0], x[1], x[2], d.kappa, d.omega, arclength, r.x1, r.x2};
}

std::string describe(const FamilySample& s) {
    std::ostringstream os;
    os.precision(12);
    os << "last good sample (alpha, beta, rho) = (" << s.alpha << ", " << s.beta << ", " << s.rho << ")";
    return os.str();
}

}  // namespace

FamilyBranch trace_family(const FamilyControls& ctl) {
    FamilyBranch br;
    V3 x(pi / 2, pi / 2, solve_rho1());
    br.samples.push_back(make_sample(x, 0.0));
    V3 tan = null_tangent(jacobian(x));
    if (tan[0] > 0.0) tan = -tan;
    double h = ctl.initial_step;
    double arc = 0.0;

    while (static_cast<int>(br.samples.size()) < ctl.max_samples) {
        const V3 pred = x + h * tan;
        V3 xc = pred;
        bool ok = in_domain(pred);
        int its = 0;
        if (ok) {
            ok = false;
            try {
                M23 J = jacobian(pred);
                for (its = 1; its <= 8; ++its) {
                    const Eigen::Vector2d f = F(xc);
                    if (f.cwiseAbs().maxCoeff() < ctl.residual_tol) {
                        ok = true;
                        break;
                    }
                    Eigen::Matrix3d A;
                    A.topRows<2>() = J;
                    A.row(2) = tan.transpose();
                    Eigen::Vector3d rhs(-f[0], -f[1], -tan.dot(xc - pred));
                    const V3 dx = A.fullPivLu().solve(rhs);
                    xc += dx;
                    if (!in_domain(xc)) break;
                    if (its == 4) J = jacobian(xc);  // refresh once if convergence is slow
                }
            } catch (const Error&) {
                ok = false;
            }
        }
        if (ok && (xc - x).norm() > 2.0 * h) ok = false;
        V3 nt;
        if (ok) {
            try {
                nt = null_tangent(jacobian(xc));
            } catch (const Error&) {
                ok = false;
            }
        }
        if (ok) {
            if (nt.dot(tan) < 0.0) nt = -nt;
            if (nt.dot(tan) < std::cos(0.3)) ok = false;
        }
        if (!ok) {
            h *= 0.5;
            if (h < ctl.min_step) {
                br.stop_reason = "step underflow";
                throw StepFailure("family continuation stalled; " + describe(br.samples.back()));
            }
            continue;
        }
        arc += (xc - x).norm();
        x = xc;
        tan = nt;
        br.samples.push_back(make_sample(x, arc));
        if (x[1] < ctl.beta_stop) {
            br.reached_beta_stop = true;
            br.stop_reason = "beta below beta_stop";
            return br;
        }
        if (its <= 3) h = std::min(1.4 * h, ctl.max_step);
        // Shrink near the helicoid limit so the tail has enough samples to extrapolate.
        h = std::min(h, std::max(0.25 * x[1], 4.0 * ctl.min_step));
    }
    br.stop_reason = "sample limit";
    return br;
}

ResidualPair reflected_residuals(const FamilySample& s) {
    return residuals(ModuliPoint(pi - s.alpha, pi - s.beta, s.rho));
}

HelicoidLimit detect_helicoid_limit(const FamilyBranch& branch, double tail_beta) {
    std::vector<const FamilySample*> tail;
    for (const auto& s : branch.samples)
        if (s.beta < tail_beta) tail.push_back(&s);
    if (tail.size() < 5) throw InsufficientTail("need at least 5 samples with beta < " + std::to_string(tail_beta));
    const int n = static_cast<int>(tail.size());

    // Least squares in b = beta^2 of orders 1 and 2; the family is even in beta.
    auto fit = [&](int order, auto value) {
        Eigen::MatrixXd A(n, order + 1);
        Eigen::VectorXd y(n);
        for (int i = 0; i < n; ++i) {
            const double b = tail[i]->beta * tail[i]->beta;
            double p = 1.0;
            for (int j = 0; j <= order; ++j, p *= b) A(i, j) = p;
            y[i] = value(*tail[i]);
        }
        return Eigen::VectorXd(A.colPivHouseholderQr().solve(y));
    };
    auto alpha_of = [](const FamilySample& s) { return s.alpha; };
    auto rho_of = [](const FamilySample& s) { return s.rho; };
    auto gap_of = [](const FamilySample& s) {
        return s.kappa - (s.rho + 1.0 / s.rho - 2.0 * std::cos(s.alpha));
    };
    const double a2 = fit(2, alpha_of)[0], a1 = fit(1, alpha_of)[0];
    const double r2 = fit(2, rho_of)[0], r1 = fit(1, rho_of)[0];

    HelicoidLimit out{};
    out.alpha_star = a2;
    out.rho_star = r2;
    out.alpha_error = std::abs(a2 - a1);
    out.rho_error = std::abs(r2 - r1);
    const FamilySample& last = branch.samples.back();
    out.kappa_gap_last = std::abs(gap_of(last));
    double num = 0.0, den = 0.0;
    for (const auto* s : tail) {
        const double b2 = s->beta * s->beta;
        num += gap_of(*s) * b2;
        den += b2 * b2;
    }
    out.kappa_gap_coeff = num / den;
    const auto lam = lambda_pm(last.kappa, last.alpha);
    out.lambda_plus = std::abs(lam.first);
    out.lambda_minus = std::abs(lam.second);
    if (out.lambda_plus < out.lambda_minus) std::swap(out.lambda_plus, out.lambda_minus);
    out.tail_samples = n;
    return out;
}

}  // namespace skf
