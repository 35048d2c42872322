// bench.hpp -- reproducible success-rate experiments, minimal sample-budget
// search, scaling fits, serialization, and the numerical verification suites.
#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "pdqp/adversary.hpp"
#include "pdqp/algorithms.hpp"

namespace pdqp {

// One success-rate experiment. Per-trial randomness comes from substreams of
// `seed` keyed by (spec, trial), so results are independent of thread count
// and identical across runs.
struct ExperimentSpec {
    ProblemKind problem = ProblemKind::Search;
    std::string model = "pdqp"; // "pdqp" (adaptive) or "pdqp-naq" (one round)
    std::uint64_t n = 8;
    // Circuit scaling constant; <= 0 selects the per-problem default (1 for
    // amplitude-amplification search, 3 for the one-round partition circuits).
    double c = 0;
    std::optional<int> samples_override;
    // Query-budget override. Only the amplitude-amplification search circuit
    // has a free query count; the other circuits fix it structurally and
    // reject a conflicting override.
    std::optional<int> queries_override;
    int trials = 1000;
    std::uint64_t seed = 1;
    int threads = 1;
};

struct ExperimentResult {
    std::string problem;
    std::string model;
    std::uint64_t n = 0;
    int queries = 0;
    int samples = 0;
    int trials = 0;
    int successes = 0;
    double rate = 0, ci_lo = 0, ci_hi = 0;
    std::uint64_t seed = 0;
};

ExperimentResult estimate_success(const ExperimentSpec &spec);

struct WilsonInterval {
    double lo = 0, hi = 0;
};
WilsonInterval wilson_interval(int successes, int trials, double z = 1.959964);

// Smallest sample budget whose measured success rate reaches the target minus
// one binomial standard-error allowance (doubling then bisection; throws
// BudgetCapReached past `cap`). Probes are returned for reporting.
struct MinimalBudgetResult {
    int samples = 0;
    std::vector<ExperimentResult> probes;
};
MinimalBudgetResult minimal_budget(ExperimentSpec base, double target, int cap = 4096);

// Least-squares fit of y ~ scale * x^exponent on log-log axes.
struct PowerFit {
    double exponent = 0, scale = 0;
};
PowerFit fit_loglog(const std::vector<double> &xs, const std::vector<double> &ys);

// Stable text output: pinned column order, fixed precision, no timestamps.
std::string results_to_csv(const std::vector<ExperimentResult> &results);
std::string results_to_json(const std::vector<ExperimentResult> &results);
std::string bound_report_to_json(ProblemKind problem, std::uint64_t n, const BoundReport &report);

// ---- verification suites -------------------------------------------------------

struct VerifyOptions {
    int equivalence_circuits = 60;
    int equivalence_runs = 100000; // per executor per circuit
    double equivalence_tolerance = 0.02;
    int fault_runs = 40000;
    int monotone_cases = 1000;
    std::size_t polynomial_samples = 1000000;
    int collision_trials = 10000;
    int lifted_tuples = 500;
    std::uint64_t seed = 9021;
};

struct SuiteResult {
    std::string name;
    int checks = 0;
    int failures = 0;
    double worst = 0; // suite-specific extreme (largest TV, smallest margin, ...)
    std::string detail;
};

// Known suites: "equivalence" (direct vs purified sampling distributions),
// "fault-sensitivity" (the same harness must flag skipped reweights),
// "monotone" (fidelity never drops under equal-outcome measurements),
// "polynomial" (ks >= r^k - (r-s)^k), "hybrid" (query perturbation bound),
// "weight-identity" (per-query progress accounting), "lifted" (position-tuple
// lifting), "collision-error" (exact 2^{1-P} error law). Unknown names throw
// InvalidParameters; an empty list runs nothing.
std::vector<SuiteResult> verify_all(const std::vector<std::string> &suites,
                                    const VerifyOptions &options = {});

const std::vector<std::string> &all_suite_names();

} // namespace pdqp
