// oracle.cpp -- instance generation, brute-force ground truth, oracle kernels.
#include "pdqp/oracle.hpp"

#include <algorithm>
#include <json.hpp>
#include <numeric>
#include <unordered_set>

#include "pdqp/errors.hpp"

namespace pdqp {

using njson = nlohmann::ordered_json;

std::string to_string(ProblemKind k) {
    switch (k) {
    case ProblemKind::Search: return "search";
    case ProblemKind::Majority: return "majority";
    case ProblemKind::Parity: return "parity";
    case ProblemKind::Collision: return "collision";
    case ProblemKind::ElementDistinctness: return "element-distinctness";
    }
    throw InvalidParameters("unknown problem kind");
}

ProblemKind problem_from_string(const std::string &s) {
    if (s == "search") return ProblemKind::Search;
    if (s == "majority") return ProblemKind::Majority;
    if (s == "parity") return ProblemKind::Parity;
    if (s == "collision") return ProblemKind::Collision;
    if (s == "element-distinctness" || s == "ed") return ProblemKind::ElementDistinctness;
    throw InvalidParameters("unknown problem kind: " + s);
}

std::string to_string(OracleKind k) {
    switch (k) {
    case OracleKind::Phase: return "phase";
    case OracleKind::XorValue: return "xor";
    case OracleKind::ParallelPhase: return "parallel-phase";
    case OracleKind::ParallelXor: return "parallel-xor";
    }
    throw InvalidParameters("unknown oracle kind");
}

OracleKind oracle_from_string(const std::string &s) {
    if (s == "phase") return OracleKind::Phase;
    if (s == "xor") return OracleKind::XorValue;
    if (s == "parallel-phase") return OracleKind::ParallelPhase;
    if (s == "parallel-xor") return OracleKind::ParallelXor;
    throw InvalidParameters("unknown oracle kind: " + s);
}

int brute_force_answer(ProblemKind kind, std::uint64_t n,
                       const std::vector<std::uint32_t> &table) {
    if (table.size() != n) throw InvalidParameters("table size does not match n");
    switch (kind) {
    case ProblemKind::Search: {
        for (std::uint32_t v : table)
            if (v) return 1;
        return 0;
    }
    case ProblemKind::Majority: {
        // Strict threshold: 1 exactly when ones outnumber zeros.
        std::uint64_t s = 0;
        for (std::uint32_t v : table) s += (v & 1u);
        return 2 * s > n ? 1 : 0;
    }
    case ProblemKind::Parity: {
        std::uint64_t s = 0;
        for (std::uint32_t v : table) s += (v & 1u);
        return static_cast<int>(s & 1u);
    }
    case ProblemKind::Collision: {
        // Reports the arity: 1 when injective, 2 when exactly two-to-one.
        std::vector<std::uint64_t> counts(n, 0);
        for (std::uint32_t v : table) {
            if (v >= n) throw InvalidParameters("collision table value out of range");
            ++counts[v];
        }
        bool injective = true, two_to_one = true;
        for (std::uint64_t c : counts) {
            if (c > 1) injective = false;
            if (c != 0 && c != 2) two_to_one = false;
        }
        if (injective) return 1;
        if (two_to_one) return 2;
        throw InvalidParameters("collision table is neither 1-to-1 nor 2-to-1");
    }
    case ProblemKind::ElementDistinctness: {
        std::unordered_set<std::uint32_t> seen;
        for (std::uint32_t v : table) {
            if (v >= n) throw InvalidParameters("table value out of range");
            if (!seen.insert(v).second) return 1;
        }
        return 0;
    }
    }
    throw InvalidParameters("unknown problem kind");
}

namespace {

std::vector<std::uint32_t> random_permutation(std::uint64_t n, Rng &rng) {
    std::vector<std::uint32_t> p(n);
    std::iota(p.begin(), p.end(), 0u);
    rng.shuffle(p);
    return p;
}

std::vector<std::uint32_t> bits_with_weight(std::uint64_t n, std::uint64_t weight, Rng &rng) {
    if (weight > n) throw InvalidParameters("hamming weight exceeds n");
    std::vector<std::uint32_t> t(n, 0);
    std::fill(t.begin(), t.begin() + static_cast<std::ptrdiff_t>(weight), 1u);
    rng.shuffle(t);
    return t;
}

} // namespace

ProblemInstance generate_instance(ProblemKind kind, std::uint64_t n, const GenParams &params,
                                  Rng &rng) {
    if (n == 0) throw InvalidParameters("n must be positive");
    ProblemInstance inst;
    inst.kind = kind;
    inst.n = n;
    switch (kind) {
    case ProblemKind::Search: {
        int marked = params.marked.value_or(1);
        if (marked < 0 || static_cast<std::uint64_t>(marked) > n)
            throw InvalidParameters("marked count out of range");
        inst.table.assign(n, 0u);
        std::vector<std::uint32_t> pos = random_permutation(n, rng);
        for (int j = 0; j < marked; ++j) inst.table[pos[static_cast<std::size_t>(j)]] = 1u;
        break;
    }
    case ProblemKind::Majority:
    case ProblemKind::Parity: {
        if (params.hamming_weight) {
            inst.table = bits_with_weight(n, *params.hamming_weight, rng);
        } else {
            inst.table.resize(n);
            for (auto &v : inst.table) v = rng.bernoulli(0.5) ? 1u : 0u;
        }
        break;
    }
    case ProblemKind::Collision: {
        int k = params.collision_k.value_or(2);
        if (k != 1 && k != 2) throw InvalidParameters("collision arity must be 1 or 2");
        if (k == 1) {
            inst.table = random_permutation(n, rng);
        } else {
            if (n % 2 != 0) throw InvalidParameters("two-to-one tables need even n");
            std::vector<std::uint32_t> domain = random_permutation(n, rng);
            std::vector<std::uint32_t> values = random_permutation(n, rng);
            inst.table.assign(n, 0u);
            for (std::uint64_t p = 0; p < n / 2; ++p) {
                inst.table[domain[2 * p]] = values[p];
                inst.table[domain[2 * p + 1]] = values[p];
            }
        }
        break;
    }
    case ProblemKind::ElementDistinctness: {
        int dup = params.duplicate.value_or(1);
        if (dup != 0 && dup != 1) throw InvalidParameters("duplicate flag must be 0 or 1");
        inst.table = random_permutation(n, rng);
        if (dup == 1) {
            if (n < 2) throw InvalidParameters("duplicates need n >= 2");
            std::uint64_t a = rng.uniform_int(n);
            std::uint64_t b = rng.uniform_int(n - 1);
            if (b >= a) ++b; // b != a
            inst.table[a] = inst.table[b];
        }
        break;
    }
    }
    inst.answer = brute_force_answer(kind, n, inst.table);
    return inst;
}

std::string instance_to_json(const ProblemInstance &inst) {
    njson j;
    j["problem"] = to_string(inst.kind);
    j["n"] = inst.n;
    j["table"] = inst.table;
    j["answer"] = inst.answer;
    return j.dump();
}

ProblemInstance instance_from_json(const std::string &text) {
    njson j = njson::parse(text, nullptr, true);
    ProblemInstance inst;
    inst.kind = problem_from_string(j.at("problem").get<std::string>());
    inst.n = j.at("n").get<std::uint64_t>();
    inst.table = j.at("table").get<std::vector<std::uint32_t>>();
    inst.answer = j.at("answer").get<int>();
    if (inst.answer != brute_force_answer(inst.kind, inst.n, inst.table))
        throw InvalidParameters("instance answer does not match its table");
    return inst;
}

int query_cost(const OracleSpec &spec) {
    if (spec.pairs.empty()) throw MalformedCircuit("oracle spec has no register pairs");
    bool parallel =
        spec.kind == OracleKind::ParallelPhase || spec.kind == OracleKind::ParallelXor;
    if (!parallel && spec.pairs.size() != 1)
        throw MalformedCircuit("non-parallel oracle takes exactly one register pair");
    return static_cast<int>(spec.pairs.size());
}

namespace detail {

void phase_oracle_inplace(std::vector<cdouble> &amps, const RegisterLayout &layout,
                          const ProblemInstance &inst, const std::string &index_reg,
                          const std::string &bit_reg, int qubit_shift) {
    for (std::uint32_t v : inst.table)
        if (v > 1u) throw InvalidParameters("phase oracle requires a boolean table");
    if (layout.width_of(bit_reg) != 1)
        throw RegisterSizeMismatch("phase oracle target must be a single qubit");
    const int ioff = layout.offset_of(index_reg) + qubit_shift;
    const int iw = layout.width_of(index_reg);
    const int boff = layout.offset_of(bit_reg) + qubit_shift;
    const std::uint64_t imask = (iw >= 64) ? ~0ull : ((1ull << iw) - 1);
    for (std::uint64_t idx = 0; idx < amps.size(); ++idx) {
        std::uint64_t i = (idx >> ioff) & imask;
        if (i >= inst.n) continue; // indices past n read as x(i) = 0
        if (inst.table[i] && ((idx >> boff) & 1ull)) amps[idx] = -amps[idx];
    }
}

void xor_oracle_inplace(std::vector<cdouble> &amps, const RegisterLayout &layout,
                        const ProblemInstance &inst, const std::string &index_reg,
                        const std::string &value_reg, int qubit_shift) {
    const int voff = layout.offset_of(value_reg) + qubit_shift;
    const int vw = layout.width_of(value_reg);
    for (std::uint32_t v : inst.table)
        if (vw < 64 && v >= (1ull << vw))
            throw RegisterSizeMismatch("table value does not fit the value register");
    const int ioff = layout.offset_of(index_reg) + qubit_shift;
    const int iw = layout.width_of(index_reg);
    const std::uint64_t imask = (iw >= 64) ? ~0ull : ((1ull << iw) - 1);
    for (std::uint64_t idx = 0; idx < amps.size(); ++idx) {
        std::uint64_t i = (idx >> ioff) & imask;
        if (i >= inst.n) continue;
        std::uint64_t fv = inst.table[i];
        if (fv == 0) continue;
        std::uint64_t partner = idx ^ (fv << voff);
        if (partner > idx) std::swap(amps[idx], amps[partner]);
    }
}

} // namespace detail

QuantumState apply_phase_oracle(const QuantumState &state, const ProblemInstance &inst,
                                const std::string &index_reg, const std::string &bit_reg) {
    QuantumState out = state;
    detail::phase_oracle_inplace(out.mutable_amplitudes(), out.layout(), inst, index_reg, bit_reg);
    return out;
}

QuantumState apply_xor_oracle(const QuantumState &state, const ProblemInstance &inst,
                              const std::string &index_reg, const std::string &value_reg) {
    QuantumState out = state;
    detail::xor_oracle_inplace(out.mutable_amplitudes(), out.layout(), inst, index_reg, value_reg);
    return out;
}

QuantumState apply_oracle(const QuantumState &state, const ProblemInstance &inst,
                          const OracleSpec &spec) {
    query_cost(spec); // shape validation
    QuantumState out = state;
    for (const OraclePair &p : spec.pairs) {
        switch (spec.kind) {
        case OracleKind::Phase:
        case OracleKind::ParallelPhase:
            detail::phase_oracle_inplace(out.mutable_amplitudes(), out.layout(), inst, p.index_reg,
                                         p.target_reg);
            break;
        case OracleKind::XorValue:
        case OracleKind::ParallelXor:
            detail::xor_oracle_inplace(out.mutable_amplitudes(), out.layout(), inst, p.index_reg,
                                       p.target_reg);
            break;
        }
    }
    return out;
}

} // namespace pdqp
