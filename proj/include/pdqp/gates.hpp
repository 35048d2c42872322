// gates.hpp -- named gate matrices and the gate-application description used
// by circuits ("h" on (reg, bit), explicit matrix on a register, ...).
#pragma once

#include <optional>
#include <string>
#include <vector>

#include "pdqp/state.hpp"

namespace pdqp {

// One qubit inside a labeled register.
struct QubitRef {
    std::string reg;
    int bit = 0;
};

// A single gate application. Named gates: i, x, y, z, h, s, t, cx, cz, swap.
// name == "matrix" carries an explicit unitary over targets.size() qubits,
// with targets[0] the least significant gate index.
struct GateApplication {
    std::string name;
    std::vector<QubitRef> targets;
    std::optional<CMatrix> matrix;
};

// Matrix for a named gate; throws InvalidParameters for unknown names.
const CMatrix &gate_matrix(const std::string &name);
bool is_named_gate(const std::string &name);

// Resolves targets to global qubit positions under a layout.
std::vector<int> resolve_targets(const RegisterLayout &layout,
                                 const std::vector<QubitRef> &targets);

// Applies one gate description to a state (validates matrix gates).
QuantumState apply_gate(const QuantumState &state, const GateApplication &g);

// Unitary sending |0...0> to the uniform superposition over the first n of
// the 2^qubits basis states (a Householder reflection; equals what a column
// of Hadamards achieves when n == 2^qubits).
CMatrix uniform_prep_matrix(std::uint64_t n, int qubits);

// Reflection 2|u><u| - I about that uniform state (the Grover diffuser).
CMatrix diffusion_matrix(std::uint64_t n, int qubits);

} // namespace pdqp
