#include "skf/verify.hpp"

#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>

#include "skf/continuation.hpp"
#include "skf/errors.hpp"
#include "skf/mesh.hpp"
#include "skf/period.hpp"
#include "skf/weierstrass.hpp"

namespace skf {

double SuiteResult::metric(const std::string& key) const {
    for (const auto& [k, v] : metrics)
        if (k == key) return v;
    return std::numeric_limits<double>::quiet_NaN();
}

const std::vector<std::string>& suite_names() {
    static const std::vector<std::string> names{"rho1",       "residues",   "symmetric", "ode-vs-period", "antipodal-ends",
                                                "arc-bound", "large-radius", "family",    "mesh",          "quadrature"};
    return names;
}

std::string check_obj_file(const std::string& path) {
    std::ifstream is(path);
    if (!is) return "cannot open " + path;
    std::string line;
    long nv = 0, ln = 0;
    while (std::getline(is, line)) {
        ++ln;
        const std::string where = "line " + std::to_string(ln) + ": ";
        if (line.empty() || line[0] == '#') continue;
        std::istringstream ss(line);
        std::string rec;
        ss >> rec;
        if (rec == "v") {
            double x[3];
            for (double& c : x)
                if (!(ss >> c) || !std::isfinite(c)) return where + "bad vertex coordinate";
            ++nv;
        } else if (rec == "f") {
            long idx[3];
            for (long& k : idx) {
                std::string tok;
                if (!(ss >> tok)) return where + "face with fewer than 3 indices";
                std::size_t used = 0;
                try {
                    k = std::stol(tok, &used);
                } catch (const std::exception&) {
                    return where + "non-integer face index";
                }
                if (used != tok.size() || k < 1 || k > nv) return where + "face index out of range";
            }
            if (idx[0] == idx[1] || idx[1] == idx[2] || idx[0] == idx[2]) return where + "degenerate face";
        } else {
            return where + "unknown record '" + rec + "'";
        }
        std::string extra;
        if (ss >> extra) return where + "trailing tokens";
    }
    return "";
}

namespace {

using Clock = std::chrono::steady_clock;

double polyline_distance(double b, double r, const ZeroCurve& c) {
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i + 1 < c.samples.size(); ++i) {
        const double x0 = c.samples[i].beta, y0 = c.samples[i].rho;
        const double vx = c.samples[i + 1].beta - x0, vy = c.samples[i + 1].rho - y0;
        const double l2 = vx * vx + vy * vy;
        double t = l2 > 0 ? ((b - x0) * vx + (r - y0) * vy) / l2 : 0.0;
        t = std::clamp(t, 0.0, 1.0);
        best = std::min(best, std::hypot(b - x0 - t * vx, r - y0 - t * vy));
    }
    if (c.samples.size() == 1) best = std::hypot(b - c.samples[0].beta, r - c.samples[0].rho);
    return best;
}

void suite_rho1(SuiteResult& s) {
    const auto t0 = Clock::now();
    const double a = solve_rho1(), b = solve_rho1_from_j();
    const double secs = std::chrono::duration<double>(Clock::now() - t0).count();
    const double kappa = a - 1.0 / a;
    s.metrics = {{"rho1_residual_form", a}, {"rho1_j_form", b}, {"difference", std::abs(a - b)},
                 {"kappa", kappa}, {"runtime_s", secs}};
    s.passed = std::abs(a - b) < 1e-8 && a > 1.0 && a <= 1.0 + std::sqrt(2.0) && kappa < 2.0 && secs < 5.0;
}

void suite_residues(SuiteResult& s, Exec exec) {
    const auto cells = residue_grid({0.3, 1.5, 5}, {0.35, 2.8, 5}, {1.2, 4.0, 5}, exec);
    double err = 0.0, sum = 0.0;
    for (const auto& c : cells) {
        err = std::max(err, c.max_error);
        sum = std::max(sum, c.phi3_sum);
    }
    s.metrics = {{"points", static_cast<double>(cells.size())}, {"max_residue_error", err}, {"max_phi3_sum", sum}};
    s.passed = cells.size() == 125 && err < 1e-9 && sum < 1e-10;
}

void suite_symmetric(SuiteResult& s) {
    const double rho1 = solve_rho1();
    const ZeroCurve cp = trace_zero_curve(CurveId::Cplus, pi / 2);
    const ZeroCurve cm = trace_zero_curve(CurveId::Cminus, pi / 2);
    double dev = 0.0;
    for (const auto& x : cm.samples) dev = std::max(dev, polyline_distance(pi - x.beta, x.rho, cp));
    for (const auto& x : cp.samples) dev = std::max(dev, polyline_distance(pi - x.beta, x.rho, cm));
    const auto pts = intersect_curves(cp, cm);
    double loc = std::numeric_limits<double>::infinity(), kr = std::numeric_limits<double>::infinity();
    if (pts.size() == 1) {
        loc = std::hypot(pts[0].beta - pi / 2, pts[0].rho - rho1);
        const ModuliPoint m(pi / 2, pts[0].beta, pts[0].rho);
        const DerivedModuli d = derive_moduli(m);
        kr = std::abs(kappa_ratio(m, d, {1e-12, 1e-14, 200}) - d.kappa);
    }
    s.metrics = {{"cplus_samples", static_cast<double>(cp.samples.size())},
                 {"cminus_samples", static_cast<double>(cm.samples.size())},
                 {"reflection_deviation", dev},
                 {"intersections", static_cast<double>(pts.size())},
                 {"intersection_offset", loc},
                 {"kappa_ratio_error", kr}};
    s.passed = dev < 1e-6 && pts.size() == 1 && loc < 1e-7 && kr < 1e-6;
}

void suite_ode_vs_period(SuiteResult& s, Exec exec) {
    int constant = 0;
    bool same = true, ok = true;
    double worst_rate = 1.0;
    for (double a : {0.5, 0.9, 1.2, 1.5})
        for (SegmentId seg : {SegmentId::circle_up, SegmentId::circle_left}) {
            const SignGrid g = sign_grid(a, seg, {0.1, pi - 0.1, 40}, {1.05, 4.0, 40}, exec);
            const SignAgreement ag = summarize(g);
            const std::string tag = std::string(seg == SegmentId::circle_up ? "up" : "left") + "@" +
                                    std::to_string(a).substr(0, 3);
            s.metrics.push_back({"rate_" + tag, ag.rate});
            s.metrics.push_back({"determinate_" + tag, static_cast<double>(ag.determinate)});
            s.metrics.push_back({"crossings_" + tag, static_cast<double>(ag.residual_crossings)});
            s.metrics.push_back({"interleaved_" + tag, static_cast<double>(ag.interleaved)});
            if (constant == 0) constant = ag.sign_constant;
            same = same && constant == ag.sign_constant;
            worst_rate = std::min(worst_rate, ag.rate);
            ok = ok && ag.rate >= 0.99 && ag.interleaved == ag.residual_crossings;
        }
    s.metrics.push_back({"sign_constant", static_cast<double>(constant)});
    s.metrics.push_back({"worst_rate", worst_rate});
    s.notes.push_back("sign constant c in sign(w'(end)) = c * sign(residual), measured per slice");
    s.passed = ok && same;
}

void suite_antipodal_ends(SuiteResult& s) {
    int count = 0, neg = 0, fired = 0;
    double worst = -std::numeric_limits<double>::infinity();
    for (double a : {pi / 6, pi / 4, pi / 3, 0.99 * pi / 2})
        for (double r : {1.0, 1.5, 2.0, 5.0, 10.0}) {
            const ModuliPoint m(a, pi, r);
            const DerivedModuli d = derive_moduli(m);
            const EndSign e = sign_wprime_end(SegmentId::circle_up, m, d);
            const MaxPrincipleReport rep = check_max_principle_hypotheses(SegmentId::circle_up, m, d);
            ++count;
            neg += e.sign == Sign::negative;
            fired += rep.combination_diverges && rep.q_nonpositive && rep.p_nonnegative_mirrored;
            worst = std::max(worst, e.value);
        }
    s.metrics = {{"points", static_cast<double>(count)}, {"negative", static_cast<double>(neg)},
                 {"detector_fired", static_cast<double>(fired)}, {"max_scaled_slope", worst}};
    s.passed = neg == count && fired == count;
}

void suite_arc_bound(SuiteResult& s) {
    double margin = std::numeric_limits<double>::infinity();
    for (double a : {pi / 6, pi / 4, pi / 3})
        for (double db : {1e-3, 1e-2, 5e-2}) {
            const ArcIntegrals I = arc_integrals(a, a + db);
            margin = std::min(margin, arc_i2_bound(a) + 0.1 - I.I2);
        }
    s.metrics = {{"min_margin", margin}};
    s.passed = margin > 0.0;
}

void suite_large_radius(SuiteResult& s) {
    const double rho = 100.0;
    double worst = 0.0;
    bool negative = true;
    for (double a : {0.99 * pi / 2, 1.5})
        for (double b : {pi / 2, 2.5}) {
            const ModuliPoint m(a, b, rho);
            const DerivedModuli d = derive_moduli(m);
            OdeOptions opt;
            opt.p_scale = rho + 1.0 / rho;
            const double end = segment_end(SegmentId::circle_up, m);
            const double sq = -0.3 * std::cbrt(end);
            const ReparamProfile P = integrate_support_reparam(SegmentId::circle_up, m, d, 1e-6, opt);
            std::size_t k = 1;
            while (k + 1 < P.s.size() && P.s[k] < sq) ++k;
            const double wd = P.w_dot[k - 1] + (P.w_dot[k] - P.w_dot[k - 1]) * (sq - P.s[k - 1]) / (P.s[k] - P.s[k - 1]);
            const double as = large_rho_asymptote(SegmentId::circle_up, m, sq);
            worst = std::max(worst, std::abs(wd - as) / std::abs(as));
            negative = negative && wd < 0.0 && as < 0.0;
        }
    s.metrics = {{"max_relative_difference", worst}, {"negative", negative ? 1.0 : 0.0}};
    s.passed = worst < 0.02 && negative;
}

void suite_family(SuiteResult& s) {
    const auto t0 = Clock::now();
    const FamilyBranch br = trace_family();
    double maxres = 0.0, refl = 0.0;
    for (const auto& x : br.samples) {
        maxres = std::max({maxres, std::abs(x.x1), std::abs(x.x2)});
        const ResidualPair r = reflected_residuals(x);
        refl = std::max({refl, std::abs(r.x1), std::abs(r.x2)});
    }
    const HelicoidLimit L = detect_helicoid_limit(br);
    // O(beta^2): every tail gap within twice the fitted coefficient times beta^2.
    double worst_ratio = 0.0;
    for (const auto& x : br.samples)
        if (x.beta < 0.3) {
            const double gap = std::abs(x.kappa - (x.rho + 1.0 / x.rho - 2.0 * std::cos(x.alpha)));
            worst_ratio = std::max(worst_ratio, gap / (x.beta * x.beta));
        }
    const double secs = std::chrono::duration<double>(Clock::now() - t0).count();
    const double lam = std::max(std::abs(L.lambda_plus - L.rho_star), std::abs(L.lambda_minus - 1.0 / L.rho_star));
    s.metrics = {{"samples", static_cast<double>(br.samples.size())},
                 {"last_beta", br.samples.back().beta},
                 {"max_residual", maxres},
                 {"max_reflected_residual", refl},
                 {"alpha_star", L.alpha_star},
                 {"alpha_star_error", L.alpha_error},
                 {"rho_star", L.rho_star},
                 {"rho_star_error", L.rho_error},
                 {"kappa_gap_last", L.kappa_gap_last},
                 {"kappa_gap_over_beta2_max", worst_ratio},
                 {"kappa_gap_coeff", L.kappa_gap_coeff},
                 {"lambda_error", lam},
                 {"runtime_s", secs}};
    s.passed = br.samples.back().beta < 0.05 && maxres < 1e-6 && L.alpha_star > 0.0 && L.alpha_star < pi / 2 &&
               L.rho_star > 1.0 && worst_ratio < 2.0 * std::abs(L.kappa_gap_coeff) + 1e-6 && lam < 1e-3 &&
               refl < 1e-6 && secs < 600.0;
}

void suite_mesh(SuiteResult& s, const std::string& dir) {
    const FamilyBranch br = trace_family();
    const std::size_t n = br.samples.size();
    double worst_gap = 0.0, worst_abut = 0.0, worst_ratio = 0.0;
    bool files_ok = true;
    for (int k = 0; k < 5; ++k) {
        const FamilySample& x = br.samples[(n - 1) * k / 5];
        const ModuliPoint m(x.alpha, x.beta, x.rho);
        const DerivedModuli d = derive_moduli(m);
        const SurfaceBuild b = build_surface(m, d, 1, 1);
        const double diam = b.patch_diameter;
        worst_gap = std::max(worst_gap, std::max(b.gaps.gap_x1, b.gaps.gap_x2) / diam);
        worst_abut = std::max(worst_abut, b.abut_mismatch / diam);
        // Width ratio from the residue widths and from the measured end jump.
        const double tw = std::tan(d.omega);
        worst_ratio = std::max(worst_ratio, std::abs(b.lattice.w_x1 / b.lattice.w_x2 - tw));
        worst_ratio = std::max(worst_ratio, std::abs(std::abs(b.end_jump[0] / b.end_jump[1]) - tw));
        const std::string path = (std::filesystem::path(dir) / ("family_sample_" + std::to_string(k) + ".obj")).string();
        export_mesh(b.mesh, MeshFormat::obj, path);
        const std::string problem = check_obj_file(path);
        if (!problem.empty()) {
            files_ok = false;
            s.notes.push_back(path + ": " + problem);
        }
    }
    s.metrics = {{"max_gap_over_diameter", worst_gap},
                 {"max_abut_over_diameter", worst_abut},
                 {"max_width_ratio_error", worst_ratio},
                 {"obj_files_valid", files_ok ? 1.0 : 0.0}};
    s.passed = worst_gap < 1e-6 && worst_abut < 1e-6 && worst_ratio < 1e-8 && files_ok;
}

void suite_quadrature(SuiteResult& s) {
    double worst = 0.0;
    for (double rho : {1.1, 2.0, 7.0}) {
        const QuadResult q = integrate_halfline_symmetric(
            [rho](double t) { return (1.0 / t) / (t / rho + rho / t); }, rho, {1e-13, 1e-16, 200});
        worst = std::max(worst, std::abs(q.value - pi / 2));
    }
    bool j1_up = true, j2_down = true, diff_up = true;
    auto prev = j_values(1.01);
    for (int i = 1; i < 100; ++i) {
        const double rho = 1.01 + (std::sqrt(2.0) - 0.01) * i / 99.0;
        const auto cur = j_values(rho);
        j1_up = j1_up && cur.first > prev.first;
        j2_down = j2_down && cur.second < prev.second;
        diff_up = diff_up && cur.first - cur.second > prev.first - prev.second;
        prev = cur;
    }
    const double rho1 = solve_rho1();
    const ModuliPoint m(pi / 2, pi / 2, rho1);
    const double len = segment_length(m, derive_moduli(m), Segment::BA, {1e-13, 1e-16, 400}).value;
    s.metrics = {{"halfline_error", worst}, {"j1_increasing", j1_up ? 1.0 : 0.0},
                 {"j2_decreasing", j2_down ? 1.0 : 0.0}, {"j_difference_increasing", diff_up ? 1.0 : 0.0},
                 {"segment_length_error", std::abs(len - pi / std::sqrt(2.0))}};
    if (!j1_up)
        s.notes.push_back("J1 is not monotone on (1, 1 + sqrt 2): it peaks in the interior; uniqueness of the "
                          "symmetric root still follows from J1 - J2 being increasing");
    s.passed = worst < 1e-10 && j1_up && j2_down && std::abs(len - pi / std::sqrt(2.0)) < 1e-8;
}

}  // namespace

SuiteResult run_suite(const std::string& name, Exec exec, const std::string& scratch_dir) {
    SuiteResult s;
    s.name = name;
    const auto t0 = Clock::now();
    if (name == "rho1") suite_rho1(s);
    else if (name == "residues") suite_residues(s, exec);
    else if (name == "symmetric") suite_symmetric(s);
    else if (name == "ode-vs-period") suite_ode_vs_period(s, exec);
    else if (name == "antipodal-ends") suite_antipodal_ends(s);
    else if (name == "arc-bound") suite_arc_bound(s);
    else if (name == "large-radius") suite_large_radius(s);
    else if (name == "family") suite_family(s);
    else if (name == "mesh") suite_mesh(s, scratch_dir);
    else if (name == "quadrature") suite_quadrature(s);
    else throw InvalidArgument("unknown suite '" + name + "'");
    s.seconds = std::chrono::duration<double>(Clock::now() - t0).count();
    return s;
}

}  // namespace skf
