// Command-line front end: solves the symmetric case, traces zero curves and
// the family, builds meshes and runs the verification suites.

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "skf/continuation.hpp"
#include "skf/errors.hpp"
#include "skf/mesh.hpp"
#include "skf/period.hpp"
#include "skf/verify.hpp"
#include "skf/weierstrass.hpp"

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;
using namespace skf;

namespace {

std::string num(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

fs::path prepare_dir(const std::string& dir) {
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec || !fs::is_directory(dir)) throw IoError("cannot create output directory " + dir);
    const fs::path probe = fs::path(dir) / ".skfamily_write_probe";
    {
        std::ofstream os(probe);
        if (!os) throw IoError("output directory " + dir + " is not writable");
    }
    fs::remove(probe, ec);
    return fs::path(dir);
}

std::ofstream open_out(const fs::path& p) {
    std::ofstream os(p, std::ios::binary);
    if (!os) throw IoError("cannot write " + p.string());
    return os;
}

void write_json(const fs::path& p, const json& j) {
    auto os = open_out(p);
    os << j.dump(2) << '\n';
    if (!os) throw IoError("write failed for " + p.string());
}

int cmd_rho1(double tol, const std::string& out) {
    const double a = solve_rho1(tol);
    const double b = solve_rho1_from_j(std::min(tol, 1e-13));
    const double diff = std::abs(a - b);
    const double kappa = a - 1.0 / a;
    std::cout << "rho1 (residual bisection) = " << num(a) << "\n"
              << "rho1 (J1 = J2 root)       = " << num(b) << "\n"
              << "difference                = " << num(diff) << "\n"
              << "kappa(rho1)               = " << num(kappa) << "\n";
    if (!out.empty()) {
        const fs::path dir = prepare_dir(out);
        write_json(dir / "rho1.json",
                   json{{"rho1_residual", a}, {"rho1_j", b}, {"difference", diff}, {"kappa", kappa}});
    }
    return diff < 1e-8 ? 0 : 1;
}

void write_curve(const fs::path& p, const ZeroCurve& c) {
    auto os = open_out(p);
    os << "beta,rho,residual,error\n";
    for (const auto& s : c.samples) os << num(s.beta) << ',' << num(s.rho) << ',' << num(s.residual) << ',' << num(s.error) << '\n';
}

int cmd_curves(double alpha, double rho_max, const std::string& out) {
    const fs::path dir = prepare_dir(out);
    CurveControls ctl;
    ctl.rho_max = rho_max;
    int status = 0;
    ZeroCurve curves[2];
    const CurveId ids[2] = {CurveId::Cplus, CurveId::Cminus};
    const char* names[2] = {"cplus", "cminus"};
    json report = json::object();
    for (int k = 0; k < 2; ++k) {
        curves[k].which = ids[k];
        curves[k].alpha = alpha;
        try {
            curves[k] = trace_zero_curve(ids[k], alpha, ctl);
        } catch (const Error& e) {
            std::cerr << names[k] << ": trace failed: " << e.what() << "\n";
            curves[k].stop_reason = std::string("trace failed: ") + e.what();
            status = 1;
        }
        write_curve(dir / (std::string(names[k]) + ".csv"), curves[k]);
        report[names[k]] = {{"exists", curves[k].exists}, {"samples", curves[k].samples.size()},
                            {"stop_reason", curves[k].stop_reason}};
        std::cout << names[k] << ": " << curves[k].samples.size() << " samples (" << curves[k].stop_reason << ")\n";
    }
    json pts = json::array();
    for (const auto& p : intersect_curves(curves[0], curves[1])) {
        pts.push_back({{"beta", p.beta},
                       {"rho", p.rho},
                       {"residual_x1", p.residual.x1},
                       {"residual_x2", p.residual.x2},
                       {"residual_norm", std::hypot(p.residual.x1, p.residual.x2)}});
        std::cout << "intersection: beta = " << num(p.beta) << ", rho = " << num(p.rho) << "\n";
    }
    write_json(dir / "intersections.json", json{{"alpha", alpha}, {"curves", report}, {"intersections", pts}});
    return status;
}

void write_family(const fs::path& p, const FamilyBranch& br) {
    auto os = open_out(p);
    os << "k,alpha,beta,rho,kappa,omega,R1,R2\n";
    for (const auto& s : br.samples)
        os << num(s.k()) << ',' << num(s.alpha) << ',' << num(s.beta) << ',' << num(s.rho) << ',' << num(s.kappa)
           << ',' << num(s.omega) << ',' << num(s.x1) << ',' << num(s.x2) << '\n';
}

int cmd_family(double beta_stop, const std::string& out) {
    const fs::path dir = prepare_dir(out);
    FamilyControls ctl;
    ctl.beta_stop = beta_stop;
    FamilyBranch br;
    try {
        br = trace_family(ctl);
    } catch (const StepFailure& e) {
        std::cerr << "continuation failed: " << e.what() << "\n";
        write_family(dir / "family.csv", br);
        return 1;
    }
    write_family(dir / "family.csv", br);
    json limit;
    try {
        const HelicoidLimit L = detect_helicoid_limit(br);
        const auto& last = br.samples.back();
        limit = {{"alpha_star", L.alpha_star},
                 {"alpha_star_error", L.alpha_error},
                 {"rho_star", L.rho_star},
                 {"rho_star_error", L.rho_error},
                 {"kappa_last", last.kappa},
                 {"kappa_limit_form_last", last.rho + 1.0 / last.rho - 2.0 * std::cos(last.alpha)},
                 {"kappa_gap_last", L.kappa_gap_last},
                 {"kappa_gap_over_beta2", L.kappa_gap_coeff},
                 {"lambda_plus", L.lambda_plus},
                 {"lambda_minus", L.lambda_minus},
                 {"tail_samples", L.tail_samples},
                 {"stop_reason", br.stop_reason}};
        std::cout << "samples: " << br.samples.size() << ", last beta = " << num(last.beta) << "\n"
                  << "alpha* = " << num(L.alpha_star) << " +- " << num(L.alpha_error) << "\n"
                  << "rho*   = " << num(L.rho_star) << " +- " << num(L.rho_error) << "\n";
    } catch (const InsufficientTail& e) {
        limit = {{"error", e.what()}, {"stop_reason", br.stop_reason}};
        write_json(dir / "limit.json", limit);
        std::cerr << e.what() << "\n";
        return 1;
    }
    write_json(dir / "limit.json", limit);
    return br.reached_beta_stop ? 0 : 1;
}

// Solution at a requested alpha: start from the family branch bracket that
// crosses alpha and polish with Newton at fixed alpha.
SolvedPoint solve_at_alpha(double alpha) {
    if (std::abs(alpha - pi / 2) < 1e-6) return solve_point(alpha, {pi / 2, solve_rho1()});
    const FamilyBranch br = trace_family();
    for (std::size_t i = 0; i + 1 < br.samples.size(); ++i) {
        const auto& a = br.samples[i];
        const auto& b = br.samples[i + 1];
        if ((a.alpha - alpha) * (b.alpha - alpha) <= 0.0) {
            const double w = (alpha - a.alpha) / (b.alpha - a.alpha);
            return solve_point(alpha, {a.beta + w * (b.beta - a.beta), a.rho + w * (b.rho - a.rho)});
        }
    }
    throw NoBracket("the family branch does not reach alpha = " + num(alpha));
}

SolvedPoint solve_at_k(double k, double& alpha) {
    const FamilyBranch br = trace_family();
    for (std::size_t i = 0; i + 1 < br.samples.size(); ++i) {
        const auto& a = br.samples[i];
        const auto& b = br.samples[i + 1];
        if (a.k() <= k && k <= b.k()) {
            const double w = (k - a.k()) / (b.k() - a.k());
            alpha = a.alpha + w * (b.alpha - a.alpha);
            if (w == 0.0) return solve_point(a.alpha, {a.beta, a.rho});
            return solve_point(alpha, {a.beta + w * (b.beta - a.beta), a.rho + w * (b.rho - a.rho)});
        }
    }
    throw NoBracket("k = " + num(k) + " is outside the traced branch [1, " + num(br.samples.back().k()) + "]");
}

int cmd_mesh(std::optional<double> alpha, std::optional<double> k, std::optional<double> beta,
             std::optional<double> rho, bool no_solve, const std::vector<int>& copies, const std::string& out,
             const std::string& format) {
    ModuliPoint m;
    if (no_solve) {
        if (!alpha || !beta || !rho) throw InvalidArgument("--no-solve needs --alpha, --beta and --rho");
        m = ModuliPoint(*alpha, *beta, *rho);
        std::cerr << "warning: meshing an unsolved point; the surface need not close\n";
    } else if (alpha) {
        const SolvedPoint p = solve_at_alpha(*alpha);
        m = ModuliPoint(*alpha, p.beta, p.rho);
    } else if (k) {
        double a = 0.0;
        const SolvedPoint p = solve_at_k(*k, a);
        m = ModuliPoint(a, p.beta, p.rho);
    } else {
        throw InvalidArgument("mesh needs --alpha, --k or --no-solve with explicit moduli");
    }
    const DerivedModuli d = derive_moduli(m);
    const SurfaceBuild b = build_surface(m, d, copies.at(0), copies.at(1));
    const fs::path path(out);
    if (path.has_parent_path()) prepare_dir(path.parent_path().string());
    export_mesh(b.mesh, format == "ply" ? MeshFormat::ply : MeshFormat::obj, out);
    std::cout << "moduli: alpha = " << num(m.alpha) << ", beta = " << num(m.beta) << ", rho = " << num(m.rho) << "\n"
              << "closure gaps: x1 = " << num(b.gaps.gap_x1) << ", x2 = " << num(b.gaps.gap_x2)
              << " (diameter " << num(b.patch_diameter) << ")\n"
              << "gap / diameter: " << num(std::max(b.gaps.gap_x1, b.gaps.gap_x2) / b.patch_diameter) << "\n"
              << "end seam translation = (" << b.jump_m << " v1 + " << b.jump_n << " v2) / 2\n"
              << "vertices: " << b.mesh.vertices.size() << ", faces: " << b.mesh.faces.size() << "\n"
              << "wrote " << out << "\n";
    if (!b.solved) std::cerr << "warning: closure gaps exceed 1e-6 * diameter\n";
    return 0;
}

int cmd_verify(const std::string& suite, const std::string& out) {
    std::vector<std::string> names;
    if (suite == "all") names = suite_names();
    else names = {suite};
    const std::string scratch = out.empty() ? fs::temp_directory_path().string() : prepare_dir(out).string();
    json results = json::array();
    bool all = true;
    for (const auto& n : names) {
        const SuiteResult r = run_suite(n, Exec::parallel, scratch);
        json metrics = json::object();
        for (const auto& [key, v] : r.metrics) metrics[key] = std::isfinite(v) ? json(v) : json(nullptr);
        results.push_back({{"suite", r.name}, {"passed", r.passed}, {"seconds", r.seconds},
                           {"metrics", metrics}, {"notes", r.notes}});
        all = all && r.passed;
    }
    const json report{{"passed", all}, {"suites", results}};
    std::cout << report.dump(2) << "\n";
    if (!out.empty()) write_json(fs::path(out) / "verify.json", report);
    return all ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Numerical construction of a genus-one family of doubly periodic minimal surfaces"};
    app.require_subcommand(1);

    double tol = 1e-10;
    std::string rho1_out;
    auto* rho1 = app.add_subcommand("rho1", "symmetric solution by two independent formulations");
    rho1->add_option("--tol", tol, "bisection tolerance")->check(CLI::PositiveNumber);
    rho1->add_option("--out", rho1_out, "directory for rho1.json");

    double alpha = pi / 2, rho_max = 12.0;
    std::string curves_out = ".";
    auto* curves = app.add_subcommand("curves", "zero curves of both residuals and their intersections");
    curves->add_option("--alpha", alpha, "branch-point angle in (0, pi/2]")->required();
    curves->add_option("--rho-max", rho_max, "trace bound in rho");
    curves->add_option("--out", curves_out, "output directory");

    double beta_stop = 0.02;
    std::string family_out = ".";
    auto* family = app.add_subcommand("family", "continuation of the solution branch to beta -> 0");
    family->add_option("--beta-stop", beta_stop, "terminate below this beta")->check(CLI::PositiveNumber);
    family->add_option("--out", family_out, "output directory");

    std::optional<double> m_alpha, m_k, m_beta, m_rho;
    bool no_solve = false;
    std::vector<int> copies{1, 1};
    std::string mesh_out = "surface.obj", format = "obj";
    auto* mesh = app.add_subcommand("mesh", "solve a point and export its surface");
    mesh->add_option("--alpha", m_alpha, "branch-point angle of the solved point");
    mesh->add_option("--k", m_k, "family parameter (1 at the symmetric surface)");
    mesh->add_option("--beta", m_beta, "end angle (with --no-solve)");
    mesh->add_option("--rho", m_rho, "end radius (with --no-solve)");
    mesh->add_flag("--no-solve", no_solve, "mesh the given moduli without solving the period problem");
    mesh->add_option("--copies", copies, "lattice cells along x1 and x2")->expected(2);
    mesh->add_option("--out", mesh_out, "output file");
    mesh->add_option("--format", format, "obj or ply")->check(CLI::IsMember({"obj", "ply"}));

    std::string suite = "all", verify_out;
    auto* verify = app.add_subcommand("verify", "run verification suites, JSON verdicts on stdout");
    verify->add_option("--suite", suite, "suite name or 'all'");
    verify->add_option("--out", verify_out, "directory for verify.json and scratch files");

    CLI11_PARSE(app, argc, argv);
    try {
        if (*rho1) return cmd_rho1(tol, rho1_out);
        if (*curves) return cmd_curves(alpha, rho_max, curves_out);
        if (*family) return cmd_family(beta_stop, family_out);
        if (*mesh) return cmd_mesh(m_alpha, m_k, m_beta, m_rho, no_solve, copies, mesh_out, format);
        if (*verify) return cmd_verify(suite, verify_out);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
