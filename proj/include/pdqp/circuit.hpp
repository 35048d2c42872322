// circuit.hpp -- stepwise circuits: per-step unitaries, an optional collapsing
// measurement, and one of {nothing, non-collapsing sample, query, register copy}.
#pragma once

#include <optional>
#include <string>
#include <vector>

#include "pdqp/gates.hpp"
#include "pdqp/oracle.hpp"
#include "pdqp/state.hpp"

namespace pdqp {

enum class StepKind { Plain, Sample, Query, Copy };

// Non-collapsing measurement of the listed registers; one joint sample per step.
struct SampleSpec {
    std::vector<std::string> registers;
};

// Duplicate `source` (which must hold a pure reduced state) into a fresh
// register named `dest`.
struct CopySpec {
    std::string source;
    std::string dest;
};

struct Step {
    std::vector<GateApplication> gates;
    std::optional<std::string> collapse; // collapsing measurement after the gates
    StepKind kind = StepKind::Plain;
    SampleSpec sample; // kind == Sample
    OracleSpec oracle; // kind == Query
    CopySpec copy;     // kind == Copy
};

struct StepCircuit {
    RegisterLayout workspace;
    std::vector<Step> steps;
    int declared_queries = 0; // parallel steps count one query per pair
    int declared_samples = 0; // sample steps, or copy steps for copy circuits
    // Set by validate_circuit; lets executors skip re-checking explicit gate
    // matrices on every run.
    bool validated = false;
};

// Structural checks: registers exist (copy destinations enter scope at their
// step), explicit matrices are unitary, sample lists are non-empty and
// duplicate-free, declared counts match the steps, and sample/copy steps are
// not mixed in one circuit. Throws MalformedCircuit / NonUnitaryMatrix /
// UnknownRegister; marks the circuit validated on success.
void validate_circuit(StepCircuit &circuit);

int count_queries(const StepCircuit &circuit);
int count_samples(const StepCircuit &circuit); // sample steps + copy steps

// JSON round trip; loading validates.
std::string circuit_to_json(const StepCircuit &circuit);
StepCircuit circuit_from_json(const std::string &text);

} // namespace pdqp
