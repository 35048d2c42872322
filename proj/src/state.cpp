// state.cpp -- dense statevector operations, measurement, fidelity, purity.

#include "pdqp/state.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <cstring>
#include <unordered_set>

namespace pdqp {

// ---- RegisterLayout ----------------------------------------------------------

RegisterLayout::RegisterLayout(std::vector<Register> regs) : regs_(std::move(regs)) {
    std::unordered_set<std::string> seen;
    offsets_.reserve(regs_.size());
    for (const Register &r : regs_) {
        if (r.qubits <= 0)
            throw InvalidParameters("register '" + r.name + "' must have at least one qubit");
        if (!seen.insert(r.name).second)
            throw InvalidParameters("duplicate register label '" + r.name + "'");
        offsets_.push_back(total_qubits_);
        total_qubits_ += r.qubits;
    }
}

bool RegisterLayout::has(const std::string &name) const {
    for (const Register &r : regs_)
        if (r.name == name) return true;
    return false;
}

std::size_t RegisterLayout::index_of(const std::string &name) const {
    for (std::size_t i = 0; i < regs_.size(); ++i)
        if (regs_[i].name == name) return i;
    throw UnknownRegister("unknown register '" + name + "'");
}

int RegisterLayout::offset_of(const std::string &name) const {
    return offsets_[index_of(name)];
}

int RegisterLayout::width_of(const std::string &name) const {
    return regs_[index_of(name)].qubits;
}

void RegisterLayout::append(const Register &reg) {
    if (reg.qubits <= 0)
        throw InvalidParameters("register '" + reg.name + "' must have at least one qubit");
    if (has(reg.name))
        throw InvalidParameters("duplicate register label '" + reg.name + "'");
    offsets_.push_back(total_qubits_);
    regs_.push_back(reg);
    total_qubits_ += reg.qubits;
}

bool RegisterLayout::operator==(const RegisterLayout &other) const {
    if (regs_.size() != other.regs_.size()) return false;
    for (std::size_t i = 0; i < regs_.size(); ++i)
        if (regs_[i].name != other.regs_[i].name || regs_[i].qubits != other.regs_[i].qubits)
            return false;
    return true;
}

// ---- QuantumState ------------------------------------------------------------

QuantumState::QuantumState(RegisterLayout layout) : layout_(std::move(layout)) {
    amps_.assign(std::size_t(1) << layout_.total_qubits(), cdouble(0, 0));
    amps_[0] = cdouble(1, 0);
}

QuantumState::QuantumState(RegisterLayout layout, std::vector<cdouble> amplitudes, bool normalize)
    : layout_(std::move(layout)), amps_(std::move(amplitudes)) {
    if (amps_.size() != (std::size_t(1) << layout_.total_qubits()))
        throw DimensionMismatch("amplitude vector size does not match register layout");
    double n2 = 0.0;
    for (const cdouble &a : amps_) n2 += std::norm(a);
    double n = std::sqrt(n2);
    if (normalize) {
        if (n < 1e-150) throw ZeroProbabilityBranch("cannot normalize a zero vector");
        for (cdouble &a : amps_) a /= n;
    } else if (std::abs(n - 1.0) > kNormTolerance) {
        throw InvalidParameters("amplitudes are not normalized");
    }
}

double QuantumState::norm() const {
    double n2 = 0.0;
    for (const cdouble &a : amps_) n2 += std::norm(a);
    return std::sqrt(n2);
}

std::uint64_t QuantumState::register_value(std::uint64_t basis_index, const std::string &reg) const {
    int off = layout_.offset_of(reg);
    int w = layout_.width_of(reg);
    return (basis_index >> off) & ((std::uint64_t(1) << w) - 1);
}

double StateEnsemble::total_weight() const {
    double t = 0.0;
    for (const WeightedState &m : members) t += m.weight;
    return t;
}

// ---- matrices ----------------------------------------------------------------

CMatrix CMatrix::identity(std::size_t d) {
    CMatrix m(d);
    for (std::size_t i = 0; i < d; ++i) m(i, i) = cdouble(1, 0);
    return m;
}

bool is_unitary(const CMatrix &m, double tol) {
    if (m.dim == 0 || m.a.size() != m.dim * m.dim) return false;
    // max-abs entry of U^dagger U - I
    for (std::size_t r = 0; r < m.dim; ++r) {
        for (std::size_t c = 0; c < m.dim; ++c) {
            cdouble acc(0, 0);
            for (std::size_t k = 0; k < m.dim; ++k)
                acc += std::conj(m(k, r)) * m(k, c);
            if (r == c) acc -= cdouble(1, 0);
            if (std::abs(acc) > tol) return false;
        }
    }
    return true;
}

// ---- kernels -------------------------------------------------------------

namespace detail {

void apply_matrix_inplace(std::vector<cdouble> &amps, const CMatrix &u,
                          const std::vector<int> &qubits) {
    const std::size_t k = qubits.size();
    const std::size_t d = std::size_t(1) << k;
    std::uint64_t tmask = 0;
    for (int q : qubits) tmask |= std::uint64_t(1) << q;

    std::vector<std::uint64_t> spread(d, 0);
    for (std::size_t p = 0; p < d; ++p) {
        std::uint64_t s = 0;
        for (std::size_t j = 0; j < k; ++j)
            if ((p >> j) & 1) s |= std::uint64_t(1) << qubits[j];
        spread[p] = s;
    }

    std::vector<cdouble> g(d), out(d);
    const std::uint64_t dim = amps.size();
    for (std::uint64_t base = 0; base < dim; ++base) {
        if (base & tmask) continue;
        for (std::size_t p = 0; p < d; ++p) g[p] = amps[base | spread[p]];
        const cdouble *row = u.a.data();
        for (std::size_t r = 0; r < d; ++r, row += d) {
            cdouble acc(0, 0);
            for (std::size_t c = 0; c < d; ++c) acc += row[c] * g[c];
            out[r] = acc;
        }
        for (std::size_t p = 0; p < d; ++p) amps[base | spread[p]] = out[p];
    }
}

std::vector<double> marginal(const std::vector<cdouble> &amps, int offset, int width) {
    std::vector<double> p(std::size_t(1) << width, 0.0);
    const std::uint64_t mask = (std::uint64_t(1) << width) - 1;
    for (std::uint64_t i = 0; i < amps.size(); ++i)
        p[(i >> offset) & mask] += std::norm(amps[i]);
    return p;
}

} // namespace detail

// ---- exported operations -------------------------------------------------

static void check_targets(const QuantumState &state, const CMatrix &u,
                          const std::vector<int> &qubits) {
    if (qubits.empty()) throw InvalidParameters("gate needs at least one target qubit");
    if (u.dim != (std::size_t(1) << qubits.size()))
        throw DimensionMismatch("matrix dimension does not match target count");
    std::uint64_t seen = 0;
    for (int q : qubits) {
        if (q < 0 || q >= state.n_qubits())
            throw DimensionMismatch("target qubit out of range");
        std::uint64_t bit = std::uint64_t(1) << q;
        if (seen & bit) throw InvalidParameters("duplicate target qubit");
        seen |= bit;
    }
}

QuantumState apply_unitary(const QuantumState &state, const CMatrix &u,
                           const std::vector<int> &qubits) {
    check_targets(state, u, qubits);
    if (!is_unitary(u)) throw NonUnitaryMatrix("matrix is not unitary within tolerance");
    QuantumState out = state;
    detail::apply_matrix_inplace(out.mutable_amplitudes(), u, qubits);
    return out;
}

QuantumState apply_unitary(const QuantumState &state, const CMatrix &u, const std::string &reg) {
    int off = state.layout().offset_of(reg);
    int w = state.layout().width_of(reg);
    std::vector<int> qubits(w);
    for (int i = 0; i < w; ++i) qubits[i] = off + i;
    return apply_unitary(state, u, qubits);
}

std::vector<double> born_distribution(const QuantumState &state, const std::string &reg) {
    return detail::marginal(state.amplitudes(), state.layout().offset_of(reg),
                            state.layout().width_of(reg));
}

std::vector<double> born_distribution(const QuantumState &state) {
    std::vector<double> p(state.dim());
    for (std::size_t i = 0; i < p.size(); ++i) p[i] = std::norm(state.amp(i));
    return p;
}

std::pair<QuantumState, MeasurementOutcome>
collapse(const QuantumState &state, const std::string &reg, Rng &rng) {
    const int off = state.layout().offset_of(reg);
    const int w = state.layout().width_of(reg);
    std::vector<double> p = detail::marginal(state.amplitudes(), off, w);
    double total = 0.0;
    for (double v : p) total += v;
    std::size_t outcome = rng.sample_discrete(p, total);
    double pw = p[outcome];
    if (pw <= 1e-300) throw ZeroProbabilityBranch("collapse selected a zero-weight branch");

    QuantumState out = state;
    std::vector<cdouble> &amps = out.mutable_amplitudes();
    const std::uint64_t mask = (std::uint64_t(1) << w) - 1;
    const double scale = 1.0 / std::sqrt(pw);
    for (std::uint64_t i = 0; i < amps.size(); ++i) {
        if (((i >> off) & mask) == outcome)
            amps[i] *= scale;
        else
            amps[i] = cdouble(0, 0);
    }
    return {std::move(out), MeasurementOutcome{reg, outcome, pw}};
}

cdouble inner_product(const QuantumState &a, const QuantumState &b) {
    if (a.dim() != b.dim()) throw DimensionMismatch("states have different dimensions");
    cdouble acc(0, 0);
    for (std::size_t i = 0; i < a.dim(); ++i) acc += std::conj(a.amp(i)) * b.amp(i);
    return acc;
}

double fidelity(const QuantumState &a, const QuantumState &b) {
    return std::abs(inner_product(a, b));
}

double fidelity(const StateEnsemble &ea, const StateEnsemble &eb) {
    if (ea.members.empty() || eb.members.empty()) return 0.0;
    const std::size_t da = ea.members.front().state.dim();
    for (const WeightedState &m : ea.members) {
        if (m.weight < 0.0) throw InvalidParameters("ensemble weight is negative");
        if (m.state.dim() != da) throw DimensionMismatch("ensemble members differ in dimension");
    }
    for (const WeightedState &m : eb.members) {
        if (m.weight < 0.0) throw InvalidParameters("ensemble weight is negative");
        if (m.state.dim() != da) throw DimensionMismatch("ensemble members differ in dimension");
    }
    // F(rho, sigma) = ||A^dagger B||_tr where the columns of A (resp. B) are the
    // sqrt-weighted members; the trace norm of the small Gram product equals the
    // Uhlmann fidelity, so only a (members x members) SVD is needed.
    Eigen::MatrixXcd g(ea.members.size(), eb.members.size());
    for (std::size_t r = 0; r < ea.members.size(); ++r)
        for (std::size_t c = 0; c < eb.members.size(); ++c) {
            double w = std::sqrt(ea.members[r].weight * eb.members[c].weight);
            cdouble ip = inner_product(ea.members[r].state, eb.members[c].state);
            g(Eigen::Index(r), Eigen::Index(c)) = w * ip;
        }
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(g);
    return svd.singularValues().sum();
}

CMatrix reduced_density(const QuantumState &state, const std::string &reg) {
    const int off = state.layout().offset_of(reg);
    const int w = state.layout().width_of(reg);
    if (w > kDensityQubitCap)
        throw QubitBudgetExceeded("density matrix request exceeds the subsystem cap");
    const std::size_t d = std::size_t(1) << w;
    const std::uint64_t regmask = (std::uint64_t(1) << w) - 1;
    CMatrix rho(d);
    const std::vector<cdouble> &amps = state.amplitudes();
    // enumerate environment patterns: indices whose register bits are zero
    for (std::uint64_t idx = 0; idx < amps.size(); ++idx) {
        if ((idx >> off) & regmask) continue;
        for (std::uint64_t a = 0; a < d; ++a) {
            cdouble va = amps[idx | (a << off)];
            if (va == cdouble(0, 0)) continue;
            for (std::uint64_t b = 0; b < d; ++b)
                rho(a, b) += va * std::conj(amps[idx | (b << off)]);
        }
    }
    return rho;
}

double reduced_purity(const QuantumState &state, const std::string &reg) {
    CMatrix rho = reduced_density(state, reg);
    double acc = 0.0;
    for (const cdouble &v : rho.a) acc += std::norm(v); // Tr(rho^2), rho hermitian
    return acc;
}

QuantumState tensor(const QuantumState &a, const QuantumState &b) {
    RegisterLayout layout = a.layout();
    for (const Register &r : b.layout().registers()) layout.append(r);
    std::vector<cdouble> amps(a.dim() * b.dim());
    for (std::size_t ib = 0; ib < b.dim(); ++ib) {
        const cdouble vb = b.amp(ib);
        for (std::size_t ia = 0; ia < a.dim(); ++ia)
            amps[(ib << a.n_qubits()) | ia] = vb * a.amp(ia);
    }
    return QuantumState(std::move(layout), std::move(amps), true);
}

QuantumState random_state(RegisterLayout layout, Rng &rng) {
    std::size_t dim = std::size_t(1) << layout.total_qubits();
    std::vector<cdouble> amps(dim);
    for (cdouble &a : amps) a = cdouble(rng.normal(), rng.normal());
    return QuantumState(std::move(layout), std::move(amps), true);
}

CMatrix random_unitary(std::size_t dim, Rng &rng) {
    // Gaussian matrix orthonormalized column by column (modified Gram-Schmidt).
    CMatrix m(dim);
    for (cdouble &v : m.a) v = cdouble(rng.normal(), rng.normal());
    for (std::size_t c = 0; c < dim; ++c) {
        for (std::size_t prev = 0; prev < c; ++prev) {
            cdouble proj(0, 0);
            for (std::size_t r = 0; r < dim; ++r) proj += std::conj(m(r, prev)) * m(r, c);
            for (std::size_t r = 0; r < dim; ++r) m(r, c) -= proj * m(r, prev);
        }
        double n2 = 0.0;
        for (std::size_t r = 0; r < dim; ++r) n2 += std::norm(m(r, c));
        double inv = 1.0 / std::sqrt(n2);
        for (std::size_t r = 0; r < dim; ++r) m(r, c) *= inv;
    }
    return m;
}

std::uint64_t state_digest(const QuantumState &state) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    const auto &amps = state.amplitudes();
    const unsigned char *bytes = reinterpret_cast<const unsigned char *>(amps.data());
    std::size_t nbytes = amps.size() * sizeof(cdouble);
    for (std::size_t i = 0; i < nbytes; ++i) {
        h ^= bytes[i];
        h *= 0x100000001b3ULL;
    }
    return h;
}

} // namespace pdqp
