#pragma once

// Cross-validation harness: every check pits the closed-form path against
// the brute-force oracle (or an internal consistency property) and reports a
// scalar severity metric.  Used by the `verify` CLI command and the
// acceptance tests.

#include <string>
#include <vector>

#include "qbound/oracle.hpp"
#include "qbound/rng.hpp"

namespace qbound {

struct CheckResult {
    std::string group;   // identities, dual-path, gauge, stationarity, ...
    std::string name;    // one line per sub-check
    bool pass = false;
    double metric = 0.0;  // deviation/distance the pass decision is based on
    double tol = 0.0;
    std::string detail;
};

struct VerifyOptions {
    unsigned long long seed = 42;
    int dim = 30;
    int draws = 200;
    std::vector<std::string> only;  // empty = all groups
};

// One random probe/channel draw of the shared generator (families
// coherent/thermal/fock/custom, eta in [0.05, 0.95], nbar_b in [0, 3]).
struct ProbeDraw {
    ChannelParams params;
    ProbeSpec spec;           // custom carries moments of the drawn mixture
    TruncatedState state;     // built at the verification dimension
    ProbeMoments probe;       // true moments of state
};
ProbeDraw random_probe_draw(Rng& rng, int dim);

std::vector<CheckResult> check_identities(const VerifyOptions& opt);
std::vector<CheckResult> check_dual_path(const VerifyOptions& opt);
std::vector<CheckResult> check_gauge_invariance(const VerifyOptions& opt);
std::vector<CheckResult> check_stationarity(const VerifyOptions& opt);
std::vector<CheckResult> check_monotonicity(const VerifyOptions& opt);
std::vector<CheckResult> check_dominance(const VerifyOptions& opt);
std::vector<CheckResult> check_ecs_moments(const VerifyOptions& opt);

// Runs the groups selected by opt.only (all when empty), in a fixed order.
std::vector<CheckResult> run_checks(const VerifyOptions& opt);

bool all_pass(const std::vector<CheckResult>& results);

}  // namespace qbound
