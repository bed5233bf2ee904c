// suite.hpp — configuration and suite orchestration.
//
// run_suite executes the selected module suites against deterministic
// ensembles derived from (seed, suite id, trial) child streams, writes the
// per-inequality report records plus a flat CSV, and returns counts with the
// exit-code contract: violations are reports whose bound failed on inputs
// satisfying the hypotheses; hypothesis failures are skips, never violations.

#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "ncpl/deviation.hpp"
#include "ncpl/ensemble.hpp"

namespace ncpl {

struct SuiteConfig {
    std::uint64_t seed = 20250824;
    std::vector<int> dims{4, 8};
    std::vector<int> n_steps{2, 4};
    std::vector<double> p_grid{1.0, 1.5, 2.0, 3.0, 4.0};
    std::vector<double> r_grid{0.25, 0.5, 1.0, 2.0, 4.0};
    std::vector<double> alpha_grid{0.25, 1.0 / 3.0, 0.5, 0.75};
    std::vector<double> lambda_grid{0.5, 1.0, 2.0, 4.0};
    int trials = 3;
    double tol = 1e-9;
    std::string output_dir = "reports";
    std::vector<std::string> suites{"specalg", "condexp", "mart", "devine", "ergo"};

    void validate() const;  // throws ConfigInvalid
    static SuiteConfig from_json_file(const std::string& path);
    std::string to_json() const;
};

struct SuiteSummary {
    int total = 0;
    int holds = 0;
    int violations = 0;
    int skipped = 0;
    // inequality id or check name -> (holds, total)
    std::map<std::string, std::pair<int, int>> by_name;
};

std::string report_to_json(const VerificationReport& rep);

SuiteSummary run_suite(const SuiteConfig& config);

// Tabular lhs(r) vs rhs(r) data for one martingale. The Cramer and L_p
// columns use the threshold convention tau[1_{(n r', inf)}] with r' = r/n so
// every column shares the same r axis; eps = 1/2 and p = 2 with C_2 = 4.
void emit_tail_curve(const Martingale& m, const std::vector<double>& r_grid,
                     std::ostream& out);

}  // namespace ncpl
