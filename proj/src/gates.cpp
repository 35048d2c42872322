// gates.cpp -- named gate matrices, target resolution, reflection builders.

#include "pdqp/gates.hpp"

#include <cmath>
#include <map>

namespace pdqp {

static CMatrix make_gate(const std::string &name) {
    const double s = 1.0 / std::sqrt(2.0);
    if (name == "i") return CMatrix::identity(2);
    if (name == "x") {
        CMatrix m(2);
        m(0, 1) = 1;
        m(1, 0) = 1;
        return m;
    }
    if (name == "y") {
        CMatrix m(2);
        m(0, 1) = cdouble(0, -1);
        m(1, 0) = cdouble(0, 1);
        return m;
    }
    if (name == "z") {
        CMatrix m(2);
        m(0, 0) = 1;
        m(1, 1) = -1;
        return m;
    }
    if (name == "h") {
        CMatrix m(2);
        m(0, 0) = s;
        m(0, 1) = s;
        m(1, 0) = s;
        m(1, 1) = -s;
        return m;
    }
    if (name == "s") {
        CMatrix m(2);
        m(0, 0) = 1;
        m(1, 1) = cdouble(0, 1);
        return m;
    }
    if (name == "t") {
        CMatrix m(2);
        m(0, 0) = 1;
        m(1, 1) = std::polar(1.0, M_PI / 4);
        return m;
    }
    // two-qubit gates: target order (control, target) = (bit 0, bit 1) for cx
    if (name == "cx") {
        CMatrix m = CMatrix::identity(4);
        m(1, 1) = 0;
        m(3, 3) = 0;
        m(1, 3) = 1; // |control=1,target=0> -> |control=1,target=1>
        m(3, 1) = 1;
        return m;
    }
    if (name == "cz") {
        CMatrix m = CMatrix::identity(4);
        m(3, 3) = -1;
        return m;
    }
    if (name == "swap") {
        CMatrix m = CMatrix::identity(4);
        m(1, 1) = 0;
        m(2, 2) = 0;
        m(1, 2) = 1;
        m(2, 1) = 1;
        return m;
    }
    throw InvalidParameters("unknown gate '" + name + "'");
}

const CMatrix &gate_matrix(const std::string &name) {
    static std::map<std::string, CMatrix> cache;
    auto it = cache.find(name);
    if (it == cache.end()) it = cache.emplace(name, make_gate(name)).first;
    return it->second;
}

bool is_named_gate(const std::string &name) {
    static const char *names[] = {"i", "x", "y", "z", "h", "s", "t", "cx", "cz", "swap"};
    for (const char *n : names)
        if (name == n) return true;
    return false;
}

std::vector<int> resolve_targets(const RegisterLayout &layout,
                                 const std::vector<QubitRef> &targets) {
    std::vector<int> qubits;
    qubits.reserve(targets.size());
    for (const QubitRef &t : targets) {
        int off = layout.offset_of(t.reg);
        int w = layout.width_of(t.reg);
        if (t.bit < 0 || t.bit >= w)
            throw RegisterSizeMismatch("qubit " + std::to_string(t.bit) + " out of range for register '" +
                                       t.reg + "'");
        qubits.push_back(off + t.bit);
    }
    return qubits;
}

QuantumState apply_gate(const QuantumState &state, const GateApplication &g) {
    if (g.name == "i") return state; // identity is bit-for-bit a no-op
    std::vector<int> qubits = resolve_targets(state.layout(), g.targets);
    if (g.name == "matrix") {
        if (!g.matrix) throw MalformedCircuit("matrix gate without a matrix");
        return apply_unitary(state, *g.matrix, qubits);
    }
    const CMatrix &m = gate_matrix(g.name);
    if (m.dim != (std::size_t(1) << qubits.size()))
        throw DimensionMismatch("gate '" + g.name + "' target count mismatch");
    // named gates are unitary by construction; skip the O(d^3) re-check
    QuantumState out = state;
    detail::apply_matrix_inplace(out.mutable_amplitudes(), m, qubits);
    return out;
}

CMatrix uniform_prep_matrix(std::uint64_t n, int qubits) {
    const std::size_t d = std::size_t(1) << qubits;
    if (n == 0 || n > d) throw InvalidParameters("uniform_prep_matrix: n out of range");
    // Householder reflection through v = e0 - u, which swaps e0 and u.
    const double u = 1.0 / std::sqrt(double(n));
    std::vector<double> v(d, 0.0);
    v[0] = 1.0 - u;
    for (std::uint64_t i = 1; i < n; ++i) v[i] = -u;
    double v2 = 0.0;
    for (double x : v) v2 += x * x;
    CMatrix m = CMatrix::identity(d);
    if (v2 < 1e-30) return m; // n == 1: e0 already is the target
    for (std::size_t r = 0; r < d; ++r)
        for (std::size_t c = 0; c < d; ++c)
            m(r, c) -= 2.0 * v[r] * v[c] / v2;
    return m;
}

CMatrix diffusion_matrix(std::uint64_t n, int qubits) {
    const std::size_t d = std::size_t(1) << qubits;
    if (n == 0 || n > d) throw InvalidParameters("diffusion_matrix: n out of range");
    CMatrix m(d);
    const double two_over_n = 2.0 / double(n);
    for (std::size_t r = 0; r < d; ++r) {
        for (std::size_t c = 0; c < d; ++c) {
            double val = (r < n && c < n) ? two_over_n : 0.0;
            if (r == c) val -= 1.0;
            m(r, c) = val;
        }
    }
    return m;
}

} // namespace pdqp
