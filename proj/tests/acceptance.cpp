// Acceptance runner: one PASS/FAIL line per criterion. Exits nonzero only
// for unexpected failures; a failure that matches a documented deviation is
// printed as FAIL with the reason and does not change the exit status.

#include <cstdio>
#include <filesystem>
#include <string>
#include <vector>

#include "skf/verify.hpp"

using namespace skf;

namespace {

struct Criterion {
    int id;
    const char* suite;
    const char* title;
    double time_limit;  // seconds, <= 0 for none
};

const std::vector<Criterion> kCriteria = {
    {1, "rho1", "symmetric end radius from two formulations", 5.0},
    {2, "residues", "closed-form end residues against contour sums", 60.0},
    {3, "symmetric", "zero curves at the symmetric angle", 0.0},
    {4, "ode-vs-period", "support-function signs against period residuals", 0.0},
    {5, "antipodal-ends", "negative end slope for antipodal ends", 0.0},
    {6, "arc-bound", "arc integral bound near the branch angle", 0.0},
    {7, "large-radius", "large end radius limit of the slope", 0.0},
    {8, "family", "continuation to the helicoid limit", 600.0},
    {9, "mesh", "closure and tiling of meshed family samples", 0.0},
    {10, "quadrature", "quadrature identities and the J pair", 0.0},
};

// The only metric allowed to fail for a criterion, with the reason.
struct KnownDeviation {
    int id;
    const char* metric;
    const char* reason;
};

const std::vector<KnownDeviation> kKnown = {
    {10, "j1_increasing",
     "J1 as defined peaks near rho = 1.65 and is not increasing; J2 decreases and J1 - J2 increases, so the "
     "root is still unique"},
};

bool only_known_failure(const Criterion& c, const SuiteResult& r, const char** reason) {
    for (const auto& k : kKnown) {
        if (k.id != c.id) continue;
        // Every other metric of this suite must still pass: re-evaluated here
        // for the quadrature suite, the only one with a documented deviation.
        const bool others = r.metric("halfline_error") < 1e-10 && r.metric("j2_decreasing") == 1.0 &&
                            r.metric("j_difference_increasing") == 1.0 && r.metric("segment_length_error") < 1e-8;
        if (r.metric(k.metric) == 0.0 && others) {
            *reason = k.reason;
            return true;
        }
    }
    return false;
}

}  // namespace

int main() {
    const std::string scratch = (std::filesystem::temp_directory_path() / "skfamily_acceptance").string();
    std::filesystem::create_directories(scratch);
    int unexpected = 0;
    for (const auto& c : kCriteria) {
        SuiteResult r;
        std::string error;
        try {
            r = run_suite(c.suite, Exec::parallel, scratch);
        } catch (const std::exception& e) {
            error = e.what();
        }
        const bool in_time = c.time_limit <= 0.0 || r.seconds < c.time_limit;
        const bool pass = error.empty() && r.passed && in_time;
        const char* reason = nullptr;
        const bool known = !pass && error.empty() && in_time && only_known_failure(c, r, &reason);
        std::printf("Criterion %d: %s - %s [%s, %.2f s]\n", c.id, pass ? "PASS" : "FAIL", c.title, c.suite, r.seconds);
        for (const auto& [k, v] : r.metrics) std::printf("    %s = %.6g\n", k.c_str(), v);
        if (!error.empty()) std::printf("    error: %s\n", error.c_str());
        if (!in_time) std::printf("    over the %.0f s limit\n", c.time_limit);
        if (known) std::printf("    known deviation: %s\n", reason);
        if (!pass && !known) ++unexpected;
    }
    std::printf("%s\n", unexpected == 0 ? "acceptance: no unexpected failures" : "acceptance: unexpected failures");
    return unexpected == 0 ? 0 : 1;
}
