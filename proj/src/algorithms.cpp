// algorithms.cpp -- builders for the collision sampler, amplified search, and
// the one-round partition algorithms, with their decision rules.
#include "pdqp/algorithms.hpp"

#include <cmath>
#include <unordered_map>
#include <unordered_set>

#include "pdqp/errors.hpp"
#include "pdqp/gates.hpp"

namespace pdqp {

namespace {

int bits_for(std::uint64_t n) {
    int b = 0;
    while ((1ull << b) < n) ++b;
    return b > 0 ? b : 1;
}

// Uniform superposition over [0, n) on the low bits of `reg` (width w): plain
// Hadamards when n fills the register, otherwise one reflection gate.
void add_uniform_prep(std::vector<GateApplication> &gates, const std::string &reg,
                      std::uint64_t n, int w) {
    if (n == (1ull << w)) {
        for (int b = 0; b < w; ++b) gates.push_back({"h", {{reg, b}}, std::nullopt});
        return;
    }
    GateApplication g;
    g.name = "uniform-prep";
    for (int b = 0; b < w; ++b) g.targets.push_back({reg, b});
    g.matrix = uniform_prep_matrix(n, w);
    gates.push_back(std::move(g));
}

GateApplication diffusion_gate(const std::string &reg, std::uint64_t n, int w) {
    GateApplication g;
    g.name = "diffusion";
    for (int b = 0; b < w; ++b) g.targets.push_back({reg, b});
    g.matrix = diffusion_matrix(n, w);
    return g;
}

} // namespace

ComplexityAccount account_complexity(const AlgorithmSpec &algo) {
    return {count_queries(algo.circuit), count_samples(algo.circuit)};
}

AlgorithmSpec collision_algorithm(std::uint64_t n, int samples) {
    if (n < 2) throw InvalidParameters("collision needs n >= 2");
    if (samples < 1) throw InvalidParameters("collision needs at least one sample");
    const int w = bits_for(n);
    AlgorithmSpec algo;
    algo.name = "collision-sampler";
    algo.circuit.workspace.append({"index", w});
    algo.circuit.workspace.append({"value", w});

    Step prep;
    add_uniform_prep(prep.gates, "index", n, w);
    prep.kind = StepKind::Query;
    prep.oracle = {OracleKind::XorValue, {{"index", "value"}}};
    algo.circuit.steps.push_back(std::move(prep));

    for (int t = 0; t < samples; ++t) {
        Step s;
        if (t == 0) s.collapse = "value";
        s.kind = StepKind::Sample;
        s.sample.registers = {"index"};
        algo.circuit.steps.push_back(std::move(s));
    }
    algo.circuit.declared_queries = 1;
    algo.circuit.declared_samples = samples;
    validate_circuit(algo.circuit);
    algo.queries = 1;
    algo.samples = samples;
    // All samples land in the collapsed value's preimage: one distinct index
    // means (almost surely) a 1-to-1 table, two mean a 2-to-1 table.
    algo.decide = [](const RunTranscript &t, const ProblemInstance &) {
        std::unordered_set<std::uint64_t> seen;
        for (const auto &v : t.samples) seen.insert(v.at(0));
        return DecisionOutcome{seen.size() > 1 ? 2 : 1, true};
    };
    return algo;
}

AlgorithmSpec pdqp_search_algorithm(std::uint64_t n, double c,
                                    std::optional<int> samples_override,
                                    std::optional<int> queries_override) {
    if (n < 2) throw InvalidParameters("search needs n >= 2");
    if (c <= 0.0) throw InvalidParameters("scaling constant must be positive");
    const int w = bits_for(n);
    // ceil with a guard so exact powers (cbrt(27) = 3.0000000000000004, ...)
    // land on the integer instead of one past it.
    const auto ceil_budget = [](double v) {
        return std::max(1, static_cast<int>(std::ceil(v - 1e-9)));
    };
    const int queries = queries_override.value_or(ceil_budget(c * std::cbrt(double(n))));
    if (queries < 1) throw InvalidParameters("search needs at least one query");
    const int samples = samples_override.value_or(
        ceil_budget(c * std::cbrt(double(n)) * std::log(double(n))));
    if (samples < 1) throw InvalidParameters("search needs at least one sample");

    AlgorithmSpec algo;
    algo.name = "amplified-search";
    algo.circuit.workspace.append({"index", w});
    algo.circuit.workspace.append({"bit", 1});

    for (int q = 0; q < queries; ++q) {
        Step s;
        if (q == 0) {
            s.gates.push_back({"x", {{"bit", 0}}, std::nullopt});
            add_uniform_prep(s.gates, "index", n, w);
        } else {
            s.gates.push_back(diffusion_gate("index", n, w));
        }
        s.kind = StepKind::Query;
        s.oracle = {OracleKind::Phase, {{"index", "bit"}}};
        algo.circuit.steps.push_back(std::move(s));
    }
    for (int t = 0; t < samples; ++t) {
        Step s;
        if (t == 0) s.gates.push_back(diffusion_gate("index", n, w)); // close the last round
        s.kind = StepKind::Sample;
        s.sample.registers = {"index"};
        algo.circuit.steps.push_back(std::move(s));
    }
    algo.circuit.declared_queries = queries;
    algo.circuit.declared_samples = samples;
    validate_circuit(algo.circuit);
    algo.queries = queries;
    algo.samples = samples;
    algo.decide = [n](const RunTranscript &t, const ProblemInstance &inst) {
        for (const auto &v : t.samples) {
            std::uint64_t i = v.at(0);
            if (i < n && inst.table[i]) return DecisionOutcome{1, true};
        }
        return DecisionOutcome{0, true};
    };
    return algo;
}

AlgorithmSpec nonadaptive_partition_algorithm(ProblemKind kind, std::uint64_t n, double c,
                                              std::optional<int> samples_override) {
    if (kind == ProblemKind::Collision)
        throw InvalidParameters("the partition algorithm does not cover collision");
    if (c <= 0.0) throw InvalidParameters("scaling constant must be positive");
    std::uint64_t side = static_cast<std::uint64_t>(std::llround(std::sqrt(double(n))));
    if (side * side != n) throw NotPerfectSquare("n must be a perfect square");
    if (side < 2 || (side & (side - 1)) != 0)
        throw InvalidParameters("the block side must be a power of two (>= 2)");
    const int wb = bits_for(side);
    const int wg = 2 * wb; // global index: low bits = offset, high bits = block
    const bool boolean = kind != ProblemKind::ElementDistinctness;
    const int wv = boolean ? 1 : bits_for(n);
    const int samples = samples_override.value_or(
        std::max(1, static_cast<int>(std::ceil(c * double(side) * std::log(double(n))))));
    if (samples < 1) throw InvalidParameters("partition needs at least one sample");

    AlgorithmSpec algo;
    algo.name = "partition-" + to_string(kind);
    std::vector<std::string> sample_regs;
    Step round;
    round.kind = StepKind::Query;
    round.oracle.kind = boolean ? OracleKind::ParallelPhase : OracleKind::ParallelXor;
    Step decode;
    decode.kind = StepKind::Sample;
    for (std::uint64_t j = 0; j < side; ++j) {
        const std::string ireg = "i" + std::to_string(j);
        const std::string treg = (boolean ? "b" : "v") + std::to_string(j);
        algo.circuit.workspace.append({ireg, wg});
        algo.circuit.workspace.append({treg, wv});
        // Block j spans global indices [j*side, (j+1)*side): offset bits in
        // superposition, block bits written classically.
        for (int b = 0; b < wb; ++b) round.gates.push_back({"h", {{ireg, b}}, std::nullopt});
        for (int b = 0; b < wb; ++b)
            if ((j >> b) & 1ull) round.gates.push_back({"x", {{ireg, wb + b}}, std::nullopt});
        if (boolean) {
            // |-), so the phase oracle kicks x(i) back into the bit register.
            round.gates.push_back({"x", {{treg, 0}}, std::nullopt});
            round.gates.push_back({"h", {{treg, 0}}, std::nullopt});
            decode.gates.push_back({"h", {{treg, 0}}, std::nullopt});
            decode.gates.push_back({"x", {{treg, 0}}, std::nullopt});
        }
        round.oracle.pairs.push_back({ireg, treg});
        sample_regs.push_back(ireg);
        sample_regs.push_back(treg);
    }
    decode.sample.registers = sample_regs;
    algo.circuit.steps.push_back(std::move(round));
    algo.circuit.steps.push_back(std::move(decode));
    for (int t = 1; t < samples; ++t) {
        Step s;
        s.kind = StepKind::Sample;
        s.sample.registers = sample_regs;
        algo.circuit.steps.push_back(std::move(s));
    }
    algo.circuit.declared_queries = static_cast<int>(side);
    algo.circuit.declared_samples = samples;
    validate_circuit(algo.circuit);
    algo.queries = static_cast<int>(side);
    algo.samples = samples;

    algo.decide = [kind, n, side](const RunTranscript &t, const ProblemInstance &) {
        std::unordered_map<std::uint64_t, std::uint64_t> known; // index -> value
        for (const auto &v : t.samples) {
            for (std::uint64_t j = 0; j < side; ++j) {
                std::uint64_t idx = v.at(2 * j);
                std::uint64_t val = v.at(2 * j + 1);
                if (idx < n) known.emplace(idx, val);
            }
        }
        switch (kind) {
        case ProblemKind::Search: {
            for (const auto &[idx, val] : known)
                if (val) return DecisionOutcome{1, true};
            return DecisionOutcome{0, true};
        }
        case ProblemKind::Majority:
        case ProblemKind::Parity: {
            if (known.size() != n) return DecisionOutcome{0, false};
            std::uint64_t s = 0;
            for (const auto &[idx, val] : known) s += (val & 1ull);
            int ans = kind == ProblemKind::Majority ? (2 * s > n ? 1 : 0)
                                                    : static_cast<int>(s & 1ull);
            return DecisionOutcome{ans, true};
        }
        case ProblemKind::ElementDistinctness: {
            std::unordered_map<std::uint64_t, std::uint64_t> owner; // value -> index
            for (const auto &[idx, val] : known) {
                auto [it, fresh] = owner.emplace(val, idx);
                if (!fresh && it->second != idx) return DecisionOutcome{1, true};
            }
            if (known.size() == n) return DecisionOutcome{0, true};
            return DecisionOutcome{0, false};
        }
        default:
            return DecisionOutcome{0, false};
        }
    };
    return algo;
}

} // namespace pdqp
