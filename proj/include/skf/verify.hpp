#pragma once
// Verification suites shared by the `verify` command and the acceptance
// runner. Each suite evaluates one group of invariants and reports named
// metrics together with a verdict.

#include <string>
#include <utility>
#include <vector>

#include "skf/scan.hpp"

namespace skf {

struct SuiteResult {
    std::string name;
    bool passed = false;
    double seconds = 0.0;
    std::vector<std::pair<std::string, double>> metrics;
    std::vector<std::string> notes;

    double metric(const std::string& key) const;  // NaN when absent
};

// rho1, residues, symmetric, ode-vs-period, antipodal-ends, arc-bound,
// large-radius, family, mesh, quadrature
const std::vector<std::string>& suite_names();

// Throws InvalidArgument for an unknown name. `scratch_dir` receives the
// mesh suite's exported files.
SuiteResult run_suite(const std::string& name, Exec exec = Exec::parallel, const std::string& scratch_dir = ".");

// Independent structural check of an ASCII OBJ file: every record is a
// comment, a 3-coordinate vertex or a face with in-range 1-based indices;
// returns an empty string when valid, otherwise the first problem found.
std::string check_obj_file(const std::string& path);

}  // namespace skf
