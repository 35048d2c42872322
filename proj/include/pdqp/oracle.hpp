// oracle.hpp -- problem instances with brute-force ground truth, and the
// query oracles (phase, xor-value, and their one-round parallel forms).
#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "pdqp/rng.hpp"
#include "pdqp/state.hpp"

namespace pdqp {

enum class ProblemKind { Search, Majority, Parity, Collision, ElementDistinctness };

std::string to_string(ProblemKind k);
ProblemKind problem_from_string(const std::string &s);

// An input table plus its ground-truth answer. For boolean problems table
// holds bits; for collision / element-distinctness it holds function values
// in [0, n). answer is 0/1 for decision problems and the collision arity k
// (1 or 2) for Collision.
struct ProblemInstance {
    ProblemKind kind = ProblemKind::Search;
    std::uint64_t n = 0;
    std::vector<std::uint32_t> table;
    int answer = 0;
};

// Optional generator controls; anything unset gets the problem's default
// (search: one marked item; collision: k = 2; element distinctness: one
// duplicate; majority/parity: i.i.d. fair bits).
struct GenParams {
    std::optional<int> marked;          // Search: number of marked positions
    std::optional<std::uint64_t> hamming_weight; // Majority / Parity
    std::optional<int> collision_k;     // Collision: 1 or 2
    std::optional<int> duplicate;       // ElementDistinctness: 0 or 1
};

ProblemInstance generate_instance(ProblemKind kind, std::uint64_t n, const GenParams &params,
                                  Rng &rng);

// Ground truth recomputed from the table alone (the generator uses this, and
// tests cross-check against an independent evaluator).
int brute_force_answer(ProblemKind kind, std::uint64_t n, const std::vector<std::uint32_t> &table);

// JSON round trip (stable field order).
std::string instance_to_json(const ProblemInstance &inst);
ProblemInstance instance_from_json(const std::string &text);

// ---- oracles -----------------------------------------------------------------

enum class OracleKind { Phase, XorValue, ParallelPhase, ParallelXor };

std::string to_string(OracleKind k);
OracleKind oracle_from_string(const std::string &s);

struct OraclePair {
    std::string index_reg;
    std::string target_reg; // 1-qubit bit register (phase) or value register (xor)
};

// Phase and XorValue carry exactly one pair; the parallel kinds apply one
// oracle gate to every listed pair simultaneously and count pairs.size()
// queries. The once-per-run rule for parallel kinds is enforced by the
// engine's run loop.
struct OracleSpec {
    OracleKind kind = OracleKind::Phase;
    std::vector<OraclePair> pairs;
};

int query_cost(const OracleSpec &spec);

// |i, b> -> (-1)^{x(i) * b} |i, b>; indices past n are untouched.
QuantumState apply_phase_oracle(const QuantumState &state, const ProblemInstance &inst,
                                const std::string &index_reg, const std::string &bit_reg);

// |i, y> -> |i, y xor f(i)>.
QuantumState apply_xor_oracle(const QuantumState &state, const ProblemInstance &inst,
                              const std::string &index_reg, const std::string &value_reg);

// Any OracleSpec applied in one shot.
QuantumState apply_oracle(const QuantumState &state, const ProblemInstance &inst,
                          const OracleSpec &spec);

namespace detail {
// In-place kernels on raw amplitudes under an explicit layout (engine path).
void phase_oracle_inplace(std::vector<cdouble> &amps, const RegisterLayout &layout,
                          const ProblemInstance &inst, const std::string &index_reg,
                          const std::string &bit_reg, int qubit_shift = 0);
void xor_oracle_inplace(std::vector<cdouble> &amps, const RegisterLayout &layout,
                        const ProblemInstance &inst, const std::string &index_reg,
                        const std::string &value_reg, int qubit_shift = 0);
} // namespace detail

} // namespace pdqp
