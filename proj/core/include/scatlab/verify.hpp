#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace scatlab {

struct CriterionResult {
    int id = 0;
    std::string name;
    bool pass = false;
    double margin = 0.0;
    std::string detail;
    double seconds = 0.0;
};

/// Criterion ids per verification suite: algebra {1,2}, oracle {11},
/// estimates {3,4,7,8,9,10}, scattering {5,6}, all = every in-process
/// criterion. (The CLI determinism check is a scripted double run, not an
/// in-process criterion.)
std::vector<int> suite_criteria(const std::string& suite);
bool is_known_suite(const std::string& suite);

CriterionResult run_criterion(int id);

/// Runs a suite, printing one PASS/FAIL line per criterion; returns the
/// number of failures.
int run_suite(const std::string& suite, std::ostream& os);

}  // namespace scatlab
