// algorithms.hpp -- circuit builders for the query algorithms that pair a few
// collapsing queries with many non-collapsing samples, plus their classical
// decision rules.
#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>

#include "pdqp/circuit.hpp"
#include "pdqp/engine.hpp"
#include "pdqp/oracle.hpp"

namespace pdqp {

struct DecisionOutcome {
    int answer = 0;
    // False when the transcript lacks the evidence the rule needs (e.g. the
    // samples never covered every input position); such runs count as errors.
    bool complete = true;
};

using DecisionRule = std::function<DecisionOutcome(const RunTranscript &, const ProblemInstance &)>;

struct AlgorithmSpec {
    std::string name;
    StepCircuit circuit;
    int queries = 0;
    int samples = 0;
    DecisionRule decide;
};

struct ComplexityAccount {
    int queries = 0;
    int samples = 0;
};
ComplexityAccount account_complexity(const AlgorithmSpec &algo);

// Distinguishes 1-to-1 from 2-to-1 tables with one xor query: collapse the
// value register, then sample the index register `samples` times without
// collapsing. On 2-to-1 inputs the error is exactly 2^{1 - samples}.
AlgorithmSpec collision_algorithm(std::uint64_t n, int samples);

// Amplitude-amplification search with ceil(c * n^{1/3}) queries followed by
// ceil(c * n^{1/3} * ln n) non-collapsing samples of the index register.
// Non-power-of-two n is handled by reflection gates over ceil(log2 n) qubits.
AlgorithmSpec pdqp_search_algorithm(std::uint64_t n, double c = 1.0,
                                    std::optional<int> samples_override = std::nullopt,
                                    std::optional<int> queries_override = std::nullopt);

// One parallel query round over sqrt(n) blocks (phase kickback for boolean
// problems, xor for element distinctness) followed by ceil(c * sqrt(n) * ln n)
// joint samples; the decision rule works from the reconstructed table.
// Requires n to be a square with a power-of-two side.
AlgorithmSpec nonadaptive_partition_algorithm(ProblemKind kind, std::uint64_t n, double c = 3.0,
                                              std::optional<int> samples_override = std::nullopt);

} // namespace pdqp
