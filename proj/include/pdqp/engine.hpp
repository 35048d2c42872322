// engine.hpp -- circuit executors: direct semantics (sampling without
// collapse), the purified form (parallel workspace copies retired one per
// step, with reweighted equal-outcome measurements), and the copy-based model.
#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "pdqp/circuit.hpp"
#include "pdqp/oracle.hpp"
#include "pdqp/rng.hpp"
#include "pdqp/state.hpp"

namespace pdqp {

struct RunTranscript {
    // One entry per sample step: the sampled value of each listed register,
    // in the step's register order. For copy circuits this stays empty and
    // copies_used counts instead.
    std::vector<std::vector<std::uint64_t>> samples;
    std::vector<MeasurementOutcome> collapses; // collapsing outcomes, step order
    std::optional<std::uint64_t> final_outcome; // full-workspace measurement
    int queries_used = 0;
    int samples_used = 0;
    int copies_used = 0;
};

// One audit row per collapsing measurement in a purified run: the reweighted
// outcome distribution must sum to one, and each reweighted probability must
// match the single-copy probability of the same outcome.
struct ReweightAudit {
    int step = 0;
    double stochastic_sum = 0.0;
    double max_deviation = 0.0;
};

struct RunOptions {
    int qubit_cap = 20;        // purified executor: total qubits across copies
    int direct_qubit_cap = 24; // direct executor: largest merged factor
    bool final_measurement = false;
    bool audit_reweights = false;
    // Fault injection: skip the probability reweights (use d = 1 and
    // renormalise). Exists so tests can show the comparison harness notices.
    bool force_unit_reweights = false;
    double reweight_tolerance = 1e-9;
    double amp_floor = 1e-12; // outcomes below this single-copy mass are dropped
};

struct RunResult {
    RunTranscript transcript;
    std::vector<ReweightAudit> audits; // purified runs only
};

// Direct semantics. Copy steps are rejected here (use run_cbqp).
RunResult run_direct(const StepCircuit &circuit, const ProblemInstance *inst,
                     const RunOptions &options, Rng &rng);

// Direct semantics plus the final joined workspace state (subject to the
// direct qubit cap); used by tests that inspect post-run amplitudes.
struct TracedRun {
    RunResult result;
    QuantumState final_state;
};
TracedRun run_direct_traced(const StepCircuit &circuit, const ProblemInstance *inst,
                            const RunOptions &options, Rng &rng);

// Purified semantics: every step must sample or query, so a circuit with S
// steps uses S workspace copies; copy i retires at step i, and at each
// collapsing measurement the surviving copies undergo an equal-outcome
// measurement whose outcome probabilities are reweighted to match the
// single-copy distribution.
RunResult run_purified(const StepCircuit &circuit, const ProblemInstance *inst,
                       const RunOptions &options, Rng &rng);

// Copy-based model: copy steps allowed, sample steps rejected.
RunResult run_cbqp(const StepCircuit &circuit, const ProblemInstance *inst,
                   const RunOptions &options, Rng &rng);

// Deterministic state after the first `steps` steps (whole circuit if
// negative). The prefix must be measurement-free: collapses or copies throw
// MalformedCircuit; sample steps are no-ops on the state.
QuantumState state_after(const StepCircuit &circuit, const ProblemInstance *inst, int steps,
                         const RunOptions &options);

// ---- equal-outcome measurements on ensembles ---------------------------------

// M = sum_n d_n P_n^(x r) over `copies` parallel copies of `workspace`,
// measuring `measured_register` in each copy. Empty `reweights` derives
// d_n = a_n^{1-r} from the reference ensemble's single-copy outcome
// distribution (outcomes with negligible mass are dropped); explicit
// reweights must all be >= 1.
struct EqualOutcomeMeasure {
    RegisterLayout workspace; // single-copy layout
    std::string measured_register;
    int copies = 1;
    std::vector<double> reweights;
};

// Applies the measure without renormalising: each input member (w, psi)
// splits into branches (w * d_n * |P_n psi|^2, P_n psi / |P_n psi|). Total
// weight is preserved exactly when every member is a tensor power of a
// single-copy state measured with the matching reweights.
StateEnsemble apply_equal_outcome_measure(const StateEnsemble &ensemble,
                                          const EqualOutcomeMeasure &measure,
                                          const StateEnsemble &reference);

// Fidelity before vs after the measure (square-root convention, unnormalised
// ensembles). Returns {before, after}; monotonicity means after >= before.
struct MonotonePair {
    double before = 0.0;
    double after = 0.0;
};
MonotonePair check_fidelity_monotone(const StateEnsemble &a, const StateEnsemble &b,
                                     const EqualOutcomeMeasure &measure);

} // namespace pdqp
