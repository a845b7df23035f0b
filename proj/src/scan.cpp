#include "skf/scan.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <string>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "skf/weierstrass.hpp"

namespace skf {

int scan_threads() {
    if (const char* env = std::getenv("SKFAMILY_THREADS")) {
        char* end = nullptr;
        const long v = std::strtol(env, &end, 10);
        if (end != env && *end == '\0' && v > 0) return static_cast<int>(v);
    }
#ifdef _OPENMP
    return omp_get_max_threads();
#else
    return 1;
#endif
}

namespace {

template <class Kernel>
void run(int n, Exec exec, Kernel&& kernel) {
    if (exec == Exec::serial) {
        for (int i = 0; i < n; ++i) kernel(i);
        return;
    }
    const int threads = scan_threads();
    (void)threads;
#pragma omp parallel for schedule(dynamic, 1) num_threads(threads)
    for (int i = 0; i < n; ++i) kernel(i);
}

int sgn(double x) { return (x > 0.0) - (x < 0.0); }

}  // namespace

SignGrid sign_grid(double alpha, SegmentId seg, const Axis& beta, const Axis& rho, Exec exec) {
    SignGrid g;
    g.alpha = alpha;
    g.segment = seg;
    g.beta_axis = beta;
    g.rho_axis = rho;
    g.cells.resize(static_cast<std::size_t>(beta.n) * rho.n);
    run(beta.n * rho.n, exec, [&](int k) {
        SignCell& c = g.cells[k];
        c.beta = beta.at(k / rho.n);
        c.rho = rho.at(k % rho.n);
        const ModuliPoint m(alpha, c.beta, c.rho);
        const DerivedModuli d = derive_moduli(m);
        c.residual = seg == SegmentId::circle_up ? residual_x1(m) : residual_x2(m);
        c.residual_sign = sgn(c.residual);
        try {
            const EndSign e = sign_wprime_end(seg, m, d);
            c.ode_sign = static_cast<int>(e.sign);
            c.ode_value = e.value;
            c.ode_error = e.error;
        } catch (const std::exception&) {
            c.ode_sign = 0;  // pole on the segment or step failure: not determinate
        }
    });
    return g;
}

SignAgreement summarize(const SignGrid& g) {
    SignAgreement s;
    int pos = 0, neg = 0;
    for (const auto& c : g.cells) {
        if (c.ode_sign == 0 || c.residual_sign == 0) continue;
        ++s.determinate;
        (c.ode_sign * c.residual_sign > 0 ? pos : neg)++;
    }
    s.sign_constant = pos >= neg ? 1 : -1;
    s.agree = std::max(pos, neg);
    s.rate = s.determinate ? static_cast<double>(s.agree) / s.determinate : 0.0;

    const int nb = g.beta_axis.n, nr = g.rho_axis.n;
    auto cell = [&](int i, int j) -> const SignCell& { return g.cells[i * nr + j]; };
    // An ODE sign change anywhere in the 3 x 3 neighbourhoods of a residual
    // crossing counts as interleaving within one grid cell.
    auto ode_changes_near = [&](int i0, int j0, int i1, int j1) {
        int seen = 0;
        for (int i = std::min(i0, i1) - 1; i <= std::max(i0, i1) + 1; ++i)
            for (int j = std::min(j0, j1) - 1; j <= std::max(j0, j1) + 1; ++j) {
                if (i < 0 || j < 0 || i >= nb || j >= nr) continue;
                const int o = cell(i, j).ode_sign;
                if (o == 0) continue;
                if (seen != 0 && o != seen) return true;
                seen = o;
            }
        return false;
    };
    for (int i = 0; i < nb; ++i)
        for (int j = 0; j < nr; ++j)
            for (const auto& [di, dj] : {std::pair{1, 0}, std::pair{0, 1}}) {
                const int i1 = i + di, j1 = j + dj;
                if (i1 >= nb || j1 >= nr) continue;
                if (cell(i, j).residual_sign * cell(i1, j1).residual_sign >= 0) continue;
                ++s.residual_crossings;
                if (ode_changes_near(i, j, i1, j1)) ++s.interleaved;
            }
    return s;
}

std::vector<ResidualCell> residual_grid(double alpha, const Axis& beta, const Axis& rho, Exec exec) {
    std::vector<ResidualCell> out(static_cast<std::size_t>(beta.n) * rho.n);
    run(beta.n * rho.n, exec, [&](int k) {
        ResidualCell& c = out[k];
        c.beta = beta.at(k / rho.n);
        c.rho = rho.at(k % rho.n);
        c.r = residuals(ModuliPoint(alpha, c.beta, c.rho));
    });
    return out;
}

std::vector<ResidueCell> residue_grid(const Axis& alpha, const Axis& beta, const Axis& rho, Exec exec) {
    const int n = alpha.n * beta.n * rho.n;
    std::vector<ResidueCell> out(n);
    run(n, exec, [&](int k) {
        ResidueCell& c = out[k];
        c.alpha = alpha.at(k / (beta.n * rho.n));
        c.beta = beta.at((k / rho.n) % beta.n);
        c.rho = rho.at(k % rho.n);
        const ModuliPoint m(c.alpha, c.beta, c.rho);
        const DerivedModuli d = derive_moduli(m);
        c.max_error = 0.0;
        cplx phi3{0.0, 0.0};
        for (auto conj : {EndId::Conjugacy::plus, EndId::Conjugacy::minus})
            for (int us : {1, -1}) {
                const EndId e{conj, us};
                const double radius = 0.5 * end_clearance(e, m);
                for (int form = 1; form <= 3; ++form) {
                    const cplx closed = end_residue_closed(form, e, d, c.beta);
                    const cplx num = end_residue_numeric(form, e, m, radius);
                    c.max_error = std::max(c.max_error, std::abs(closed - num));
                    if (form == 3) phi3 += num;
                }
            }
        c.phi3_sum = std::abs(phi3);
    });
    return out;
}

}  // namespace skf
