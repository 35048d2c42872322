// state.hpp -- dense statevector with labeled registers, plus the measurement
// and fidelity primitives the rest of the library is built on.
//
// Conventions:
//   * Registers occupy contiguous qubit blocks; the first declared register
//     holds the least significant bits of the basis index, and bit 0 of a
//     register is its least significant qubit.
//   * States are immutable snapshots: every exported operation takes the state
//     by const reference and returns a new value. In-place kernels for hot
//     loops live in pdqp::detail.
//   * fidelity uses the square-root convention: |<a|b>| for pure states and
//     Tr sqrt(sqrt(rho) sigma sqrt(rho)) for mixtures, so F in [0,1] for
//     normalized inputs and F(a,a) = 1. Ensemble fidelity scales with the
//     total weight mass, which may deliberately differ from 1.
#pragma once

#include <complex>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "pdqp/errors.hpp"
#include "pdqp/rng.hpp"

namespace pdqp {

using cdouble = std::complex<double>;

inline constexpr double kNormTolerance = 1e-10;
inline constexpr double kUnitaryTolerance = 1e-10;
inline constexpr int kDensityQubitCap = 12; // density matrices are materialized only below this

struct Register {
    std::string name;
    int qubits = 0;
};

// Ordered register map; resolves labels to (offset, width) bit fields.
class RegisterLayout {
  public:
    RegisterLayout() = default;
    explicit RegisterLayout(std::vector<Register> regs);

    int total_qubits() const { return total_qubits_; }
    std::size_t size() const { return regs_.size(); }
    const std::vector<Register> &registers() const { return regs_; }
    bool has(const std::string &name) const;

    // Throws UnknownRegister for unknown labels.
    int offset_of(const std::string &name) const;
    int width_of(const std::string &name) const;
    std::size_t index_of(const std::string &name) const;

    // Appends a register; used when copy operations grow the workspace.
    void append(const Register &reg);

    bool operator==(const RegisterLayout &other) const;

  private:
    std::vector<Register> regs_;
    std::vector<int> offsets_;
    int total_qubits_ = 0;
};

struct MeasurementOutcome {
    std::string register_label;
    std::uint64_t basis_index = 0; // value local to the measured register
    double probability = 0.0;      // Born weight of the realized branch
};

class QuantumState {
  public:
    QuantumState() = default;

    // |0...0> on the given layout.
    explicit QuantumState(RegisterLayout layout);

    // Adopts explicit amplitudes; rejects vectors whose L2 norm strays more
    // than kNormTolerance from 1 unless normalize is requested.
    QuantumState(RegisterLayout layout, std::vector<cdouble> amplitudes,
                 bool normalize = false);

    const RegisterLayout &layout() const { return layout_; }
    int n_qubits() const { return layout_.total_qubits(); }
    std::size_t dim() const { return amps_.size(); }
    const std::vector<cdouble> &amplitudes() const { return amps_; }
    cdouble amp(std::size_t i) const { return amps_[i]; }

    double norm() const;

    // Value of one register inside a global basis index.
    std::uint64_t register_value(std::uint64_t basis_index, const std::string &reg) const;

    std::vector<cdouble> &mutable_amplitudes() { return amps_; } // for detail kernels

  private:
    RegisterLayout layout_;
    std::vector<cdouble> amps_;
};

// Probability-weighted mixture of pure states (weights need not sum to 1; see
// the fidelity convention above).
struct WeightedState {
    double weight = 0.0;
    QuantumState state;
};

struct StateEnsemble {
    std::vector<WeightedState> members;
    double total_weight() const;
};

// Row-major dense complex matrix, only as large as a few qubits ever need.
struct CMatrix {
    std::size_t dim = 0;
    std::vector<cdouble> a;

    CMatrix() = default;
    explicit CMatrix(std::size_t d) : dim(d), a(d * d, cdouble(0, 0)) {}
    cdouble &operator()(std::size_t r, std::size_t c) { return a[r * dim + c]; }
    const cdouble &operator()(std::size_t r, std::size_t c) const { return a[r * dim + c]; }

    static CMatrix identity(std::size_t d);
};

bool is_unitary(const CMatrix &m, double tol = kUnitaryTolerance);

// ---- exported operations ----------------------------------------------------

// Applies a 2^k x 2^k unitary to the listed qubits (qubits[0] is the least
// significant gate index). Throws NonUnitaryMatrix / DimensionMismatch.
QuantumState apply_unitary(const QuantumState &state, const CMatrix &u,
                           const std::vector<int> &qubits);

// Same, targeting all qubits of one register (LSB first).
QuantumState apply_unitary(const QuantumState &state, const CMatrix &u,
                           const std::string &reg);

// Marginal Born distribution of one register (length 2^width, sums to 1).
std::vector<double> born_distribution(const QuantumState &state, const std::string &reg);

// Joint Born distribution over the whole state (length dim).
std::vector<double> born_distribution(const QuantumState &state);

// Collapsing measurement of one register: samples via rng, projects and
// renormalizes. Repeated collapse of the same register reproduces the outcome.
std::pair<QuantumState, MeasurementOutcome>
collapse(const QuantumState &state, const std::string &reg, Rng &rng);

// Square-root fidelity |<a|b>| of two pure states of equal dimension.
double fidelity(const QuantumState &a, const QuantumState &b);

// Uhlmann fidelity of two ensembles, computed from the Gram matrix of the
// weighted members (no 2^n x 2^n operator is ever materialized).
double fidelity(const StateEnsemble &a, const StateEnsemble &b);

// Reduced density matrix of one register (row-major, dim 2^width); the
// enclosing state may hold at most kDensityQubitCap qubits' worth of
// neighbors entangled with it -- larger requests throw QubitBudgetExceeded.
CMatrix reduced_density(const QuantumState &state, const std::string &reg);

// Tr(rho^2) of the register's reduced state; 1 for product factors.
double reduced_purity(const QuantumState &state, const std::string &reg);

// ---- small helpers used across modules --------------------------------------

cdouble inner_product(const QuantumState &a, const QuantumState &b);

// Tensor product; b's registers are appended after a's (labels must not clash).
QuantumState tensor(const QuantumState &a, const QuantumState &b);

// Haar-ish random state / unitary for property tests and verify suites.
QuantumState random_state(RegisterLayout layout, Rng &rng);
CMatrix random_unitary(std::size_t dim, Rng &rng);

// FNV-1a digest of the raw amplitude bytes; used to assert non-disturbance.
std::uint64_t state_digest(const QuantumState &state);

namespace detail {
// In-place gate kernel shared by the exported op and the engine hot path.
// Assumes u was already validated as unitary.
void apply_matrix_inplace(std::vector<cdouble> &amps, const CMatrix &u,
                          const std::vector<int> &qubits);
// Marginal distribution over an arbitrary (offset, width) bit field.
std::vector<double> marginal(const std::vector<cdouble> &amps, int offset, int width);
} // namespace detail

} // namespace pdqp
