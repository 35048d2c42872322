// Acceptance gate: one check per shipped guarantee, one PASS/FAIL line each.
// Exit status is the number of failed criteria, so ctest reports the gate as a
// single test while the log shows each guarantee separately.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "pdqp/adversary.hpp"
#include "pdqp/algorithms.hpp"
#include "pdqp/bench.hpp"
#include "pdqp/circuit.hpp"
#include "pdqp/engine.hpp"
#include "pdqp/errors.hpp"
#include "pdqp/gates.hpp"
#include "pdqp/oracle.hpp"
#include "pdqp/rng.hpp"

using namespace pdqp;

namespace {

struct Stopwatch {
    std::chrono::steady_clock::time_point t0 = std::chrono::steady_clock::now();
    double seconds() const {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    }
};

std::string fmt(double v, int prec = 4) {
    std::ostringstream os;
    os << std::setprecision(prec) << v;
    return os.str();
}

// Real rotation sending |0> to sqrt(p0)|0> + sqrt(1-p0)|1>.
CMatrix rotation(double p0) {
    CMatrix m(2);
    const double c = std::sqrt(p0), s = std::sqrt(1.0 - p0);
    m(0, 0) = c;
    m(0, 1) = -s;
    m(1, 0) = s;
    m(1, 1) = c;
    return m;
}

// Random 1-3 qubit sampling circuit with at least one collapsing measurement,
// independent of the benchmark module's own circuit family.
StepCircuit random_audit_circuit(Rng &rng) {
    static const std::vector<std::vector<std::pair<std::string, int>>> layouts = {
        {{"a", 1}},
        {{"a", 2}},
        {{"a", 1}, {"b", 1}},
        {{"a", 2}, {"b", 1}},
        {{"a", 1}, {"b", 1}, {"c", 1}},
    };
    const auto &layout = layouts[rng.uniform_int(layouts.size())];
    StepCircuit c;
    std::vector<std::string> regs;
    std::vector<QubitRef> qubits;
    for (const auto &[name, width] : layout) {
        c.workspace.append({name, width});
        regs.push_back(name);
        for (int b = 0; b < width; ++b)
            qubits.push_back({name, b});
    }
    static const std::vector<std::string> named = {"h", "x", "z", "s", "t"};
    const int steps = 2 + int(rng.uniform_int(2));
    bool any_collapse = false;
    for (int st = 0; st < steps; ++st) {
        Step s;
        s.kind = StepKind::Sample;
        s.sample.registers = regs;
        const int gates = 1 + int(rng.uniform_int(2));
        for (int g = 0; g < gates; ++g) {
            const double pick = rng.uniform01();
            if (qubits.size() >= 2 && pick < 0.25) {
                const std::size_t a = rng.uniform_int(qubits.size());
                std::size_t b = rng.uniform_int(qubits.size() - 1);
                if (b >= a)
                    b += 1;
                s.gates.push_back({"cx", {qubits[a], qubits[b]}, std::nullopt});
            } else if (pick < 0.6) {
                s.gates.push_back({named[rng.uniform_int(named.size())],
                                   {qubits[rng.uniform_int(qubits.size())]},
                                   std::nullopt});
            } else {
                const double p0 = 0.05 + 0.9 * rng.uniform01();
                s.gates.push_back(
                    {"matrix", {qubits[rng.uniform_int(qubits.size())]}, rotation(p0)});
            }
        }
        if (rng.bernoulli(0.5)) {
            s.collapse = regs[rng.uniform_int(regs.size())];
            any_collapse = true;
        }
        c.steps.push_back(std::move(s));
    }
    if (!any_collapse)
        c.steps.front().collapse = regs.front();
    c.declared_samples = steps;
    validate_circuit(c);
    return c;
}

// Every related pair's tables must differ exactly at the listed positions.
bool pairs_differ_exactly(const RelationInstance &rel) {
    for (const RelatedPair &pr : rel.pairs) {
        const auto &x = rel.xs[pr.x];
        const auto &y = rel.ys[pr.y];
        if (x.size() != rel.n || y.size() != rel.n)
            return false;
        std::vector<std::uint64_t> diff;
        for (std::uint64_t i = 0; i < rel.n; ++i)
            if (x[i] != y[i])
                diff.push_back(i);
        if (diff != pr.diff)
            return false;
    }
    return true;
}

// ---- criterion 1: direct and purified executors sample the same distribution ----
bool criterion_equivalence(std::ostringstream &detail) {
    Stopwatch sw;
    const VerifyOptions options; // 60 circuits, 1e5 runs per executor, tolerance 0.02
    const std::vector<SuiteResult> res = verify_all({"equivalence"}, options);
    const double elapsed = sw.seconds();
    const bool ok = res.size() == 1 && res[0].failures == 0 && res[0].checks >= 50 &&
                    elapsed < 300.0;
    detail << res[0].checks << " circuits (<=3 qubits, <=3 steps, all with collapses), worst TV "
           << fmt(res[0].worst) << " <= 0.02, " << fmt(elapsed, 3) << "s < 300s";
    return ok;
}

// ---- criterion 2: reweighted collapse distributions match single-copy Born ----
bool criterion_reweight_exactness(std::ostringstream &detail) {
    RunOptions options;
    options.audit_reweights = true;
    int audits = 0;
    double worst_sum = 0.0, worst_dev = 0.0;
    auto absorb = [&](const RunResult &res) {
        for (const ReweightAudit &a : res.audits) {
            audits += 1;
            worst_sum = std::max(worst_sum, std::abs(a.stochastic_sum - 1.0));
            worst_dev = std::max(worst_dev, a.max_deviation);
        }
    };
    Rng gen(0xACC2);
    for (int ci = 0; ci < 30; ++ci) {
        const StepCircuit c = random_audit_circuit(gen);
        Rng rng = gen.derive(0xC2, std::uint64_t(ci));
        for (int r = 0; r < 40; ++r)
            absorb(run_purified(c, nullptr, options, rng));
    }
    // A query-plus-samples circuit at the purified width limit (4 qubits x 5 copies).
    const AlgorithmSpec algo = collision_algorithm(4, 4);
    Rng crng(0xC2C0);
    for (int r = 0; r < 100; ++r) {
        const ProblemInstance inst = generate_instance(ProblemKind::Collision, 4, {}, crng);
        absorb(run_purified(algo.circuit, &inst, options, crng));
    }
    const bool ok = audits > 0 && worst_sum <= 1e-9 && worst_dev <= 1e-9;
    detail << audits << " audited collapses, worst |sum-1| " << fmt(worst_sum, 3)
           << ", worst Born deviation " << fmt(worst_dev, 3) << " <= 1e-9";
    return ok;
}

// ---- criterion 3: fidelity never drops under equal-outcome measurements ----
bool criterion_monotone(std::ostringstream &detail) {
    Stopwatch sw;
    const VerifyOptions options; // 1000 random ensemble/measure cases
    const std::vector<SuiteResult> res = verify_all({"monotone"}, options);
    const double elapsed = sw.seconds();
    const bool ok = res.size() == 1 && res[0].failures == 0 && res[0].checks >= 1000 &&
                    elapsed < 60.0;
    detail << res[0].checks << " cases, zero violations, smallest margin " << fmt(res[0].worst)
           << ", " << fmt(elapsed, 3) << "s < 60s";
    return ok;
}

// ---- criterion 4: collision error is exactly 2^{1-P} with one query ----
bool criterion_collision_error(std::ostringstream &detail) {
    const RunOptions options;
    bool ok = true;
    bool all_one_query = true;
    double worst_z = 0.0;
    for (std::uint64_t n : {std::uint64_t(8), std::uint64_t(16)}) {
        for (int P = 2; P <= 10; ++P) {
            const AlgorithmSpec algo = collision_algorithm(n, P);
            const int trials = 10000;
            int errors = 0;
            for (int t = 0; t < trials; ++t) {
                Rng rng = Rng(0xC0111510ULL).derive(n, std::uint64_t(P), std::uint64_t(t));
                GenParams gp;
                gp.collision_k = 2;
                const ProblemInstance inst = generate_instance(ProblemKind::Collision, n, gp, rng);
                const RunResult res = run_direct(algo.circuit, &inst, options, rng);
                all_one_query = all_one_query && res.transcript.queries_used == 1;
                const DecisionOutcome d = algo.decide(res.transcript, inst);
                errors += (!d.complete || d.answer != inst.answer) ? 1 : 0;
            }
            const double q = std::ldexp(1.0, 1 - P);
            const double sigma = std::sqrt(q * (1.0 - q) / trials);
            const double z = std::abs(double(errors) / trials - q) / sigma;
            worst_z = std::max(worst_z, z);
            ok = ok && z <= 3.0;
        }
        // 1-to-1 tables: the collapsed value has a unique preimage, so the rule
        // can never be fooled and the error must be identically zero.
        const AlgorithmSpec algo = collision_algorithm(n, 4);
        for (int t = 0; t < 1000; ++t) {
            Rng rng = Rng(0xC0111511ULL).derive(n, 1, std::uint64_t(t));
            GenParams gp;
            gp.collision_k = 1;
            const ProblemInstance inst = generate_instance(ProblemKind::Collision, n, gp, rng);
            const RunResult res = run_direct(algo.circuit, &inst, options, rng);
            all_one_query = all_one_query && res.transcript.queries_used == 1;
            const DecisionOutcome d = algo.decide(res.transcript, inst);
            ok = ok && d.complete && d.answer == inst.answer;
        }
    }
    ok = ok && all_one_query;
    detail << "N in {8,16}, P in 2..10 at 1e4 trials: worst |err - 2^{1-P}| z-score "
           << fmt(worst_z, 3) << " <= 3; 1-to-1 error 0/1000; every run used 1 query";
    return ok;
}

// ---- criterion 5: minimal search budget scales like a cube-root law ----
bool criterion_search_scaling(std::ostringstream &detail) {
    Stopwatch sw;
    std::vector<double> xs, budgets;
    std::ostringstream rows;
    for (std::uint64_t n : {std::uint64_t(27), std::uint64_t(64), std::uint64_t(125)}) {
        ExperimentSpec base;
        base.problem = ProblemKind::Search;
        base.model = "pdqp";
        base.n = n;
        base.trials = 1500;
        base.seed = 0xC5;
        const MinimalBudgetResult mb = minimal_budget(base, 2.0 / 3.0, 4096);
        int queries = 0;
        for (const ExperimentResult &probe : mb.probes)
            if (probe.samples == mb.samples)
                queries = probe.queries;
        xs.push_back(double(n));
        budgets.push_back(double(queries + mb.samples));
        rows << " N=" << n << ":Q+P*=" << queries + mb.samples;
    }
    const PowerFit fit = fit_loglog(xs, budgets);
    const double elapsed = sw.seconds();
    const bool ok = fit.exponent >= 0.23 && fit.exponent <= 0.45 && elapsed < 600.0;
    detail << "target 2/3 budgets" << rows.str() << ", exponent " << fmt(fit.exponent, 3)
           << " in [0.23, 0.45], " << fmt(elapsed, 3) << "s < 600s";
    return ok;
}

// ---- criterion 6: one-round circuits succeed and their budgets scale ----
bool criterion_one_round(std::ostringstream &detail) {
    const ProblemKind kinds[] = {ProblemKind::Search, ProblemKind::Majority,
                                 ProblemKind::ElementDistinctness};
    bool ok = true;
    std::ostringstream rates;
    for (ProblemKind kind : kinds) {
        for (std::uint64_t n : {std::uint64_t(16), std::uint64_t(64)}) {
            ExperimentSpec spec;
            spec.problem = kind;
            spec.model = "pdqp-naq";
            spec.n = n;
            spec.trials = 1200;
            spec.seed = 0xC6;
            const ExperimentResult res = estimate_success(spec);
            const int side = int(std::llround(std::sqrt(double(n))));
            const int expect_p = int(std::ceil(3.0 * side * std::log(double(n))));
            const bool good = res.queries == side && res.samples == expect_p &&
                              res.rate >= 2.0 / 3.0;
            ok = ok && good;
            rates << ' ' << res.problem << "/" << n << ":" << fmt(res.rate, 3);
        }
    }
    // Budget scaling between N = 16 and N = 64. Only the search circuit is
    // gated: the other decision rules need full-coverage sampling, whose
    // sqrt(N) log N budget has a local log-log slope of about 0.75 on this
    // span, so those exponents are reported without a fence.
    double expo[3] = {0, 0, 0};
    for (int k = 0; k < 3; ++k) {
        double budget[2] = {0, 0};
        int slot = 0;
        for (std::uint64_t n : {std::uint64_t(16), std::uint64_t(64)}) {
            ExperimentSpec base;
            base.problem = kinds[k];
            base.model = "pdqp-naq";
            base.n = n;
            base.trials = 800;
            base.seed = 0xC6E;
            const MinimalBudgetResult mb = minimal_budget(base, 2.0 / 3.0, 4096);
            int queries = 0;
            for (const ExperimentResult &probe : mb.probes)
                if (probe.samples == mb.samples)
                    queries = probe.queries;
            budget[slot++] = double(queries + mb.samples);
        }
        expo[k] = std::log(budget[1] / budget[0]) / std::log(4.0);
    }
    ok = ok && expo[0] >= 0.4 && expo[0] <= 0.65;
    detail << "rates" << rates.str() << "; budget exponents search " << fmt(expo[0], 3)
           << " in [0.4, 0.65], majority " << fmt(expo[1], 3) << " and distinctness "
           << fmt(expo[2], 3) << " (coverage-bound, reported unfenced)";
    return ok;
}

// ---- criterion 7: boundary relations reproduce their structural degrees ----
bool criterion_relation_degrees(std::ostringstream &detail) {
    bool ok = true;
    for (std::uint64_t n : {std::uint64_t(4), std::uint64_t(8)}) {
        const RelationInstance rel = build_relation(ProblemKind::Search, n);
        ok = ok && rel.exhaustive && rel.xs.size() == 1 && rel.ys.size() == n &&
             rel.pairs.size() == n && rel.degree_x == double(n) && rel.degree_y == 1 &&
             rel.overlap_x == 1 && rel.overlap_y == 1 && pairs_differ_exactly(rel);
    }
    for (std::uint64_t n : {std::uint64_t(4), std::uint64_t(8)}) {
        const RelationInstance rel = build_relation(ProblemKind::Majority, n);
        ok = ok && rel.exhaustive && rel.degree_x == double(n) / 2 &&
             rel.degree_y == double(n) / 2 + 1 && rel.overlap_x == 1 && rel.overlap_y == 1 &&
             pairs_differ_exactly(rel);
        for (const auto &x : rel.xs)
            ok = ok && std::uint64_t(std::count(x.begin(), x.end(), 1u)) == n / 2;
        for (const auto &y : rel.ys)
            ok = ok && std::uint64_t(std::count(y.begin(), y.end(), 1u)) == n / 2 + 1;
    }
    {
        const RelationInstance rel = build_relation(ProblemKind::ElementDistinctness, 4);
        ok = ok && rel.exhaustive && rel.xs.size() == 24 && rel.degree_x == 4 &&
             rel.degree_y == 2 && pairs_differ_exactly(rel);
    }
    {
        // Past the enumeration threshold the relation is sampled; the degrees
        // stay the structural values and every sampled pair must still be a
        // permutation with one entry bumped to its successor.
        const RelationInstance rel = build_relation(ProblemKind::ElementDistinctness, 8);
        ok = ok && !rel.exhaustive && rel.degree_x == 8 && rel.degree_y == 2 &&
             rel.pairs.size() == 2000 && pairs_differ_exactly(rel);
        for (const RelatedPair &pr : rel.pairs) {
            const auto &x = rel.xs[pr.x];
            const auto &y = rel.ys[pr.y];
            std::vector<std::uint32_t> sorted = x;
            std::sort(sorted.begin(), sorted.end());
            bool perm = true;
            for (std::uint32_t i = 0; i < 8; ++i)
                perm = perm && sorted[i] == i;
            ok = ok && perm && pr.diff.size() == 1 &&
                 y[pr.diff[0]] == (x[pr.diff[0]] + 1) % 8;
        }
    }
    detail << "search (N,1,1,1), majority (N/2,N/2+1,1,1), distinctness (N,2,1,1) at N in {4,8} "
              "(distinctness sampled past N=6 with structural degrees intact)";
    return ok;
}

// ---- criterion 8: computed lower bounds sit below the achieved budgets ----
bool criterion_bound_ordering(std::ostringstream &detail) {
    struct Combo {
        ProblemKind kind;
        const char *model;
        std::uint64_t n;
        int queries;
        int samples;
    };
    std::vector<Combo> combos;
    for (std::uint64_t n : {std::uint64_t(8), std::uint64_t(16), std::uint64_t(32),
                            std::uint64_t(64)}) {
        const AlgorithmSpec algo = pdqp_search_algorithm(n);
        combos.push_back({ProblemKind::Search, "pdqp", n, algo.queries, algo.samples});
    }
    const ProblemKind partition_kinds[] = {ProblemKind::Search, ProblemKind::Majority,
                                           ProblemKind::Parity,
                                           ProblemKind::ElementDistinctness};
    for (ProblemKind kind : partition_kinds) {
        for (std::uint64_t n : {std::uint64_t(16), std::uint64_t(64)}) {
            const AlgorithmSpec algo = nonadaptive_partition_algorithm(kind, n);
            // The one-round circuit is also a valid adaptive-model algorithm,
            // so it witnesses the additive bound under both models.
            if (kind != ProblemKind::Search)
                combos.push_back({kind, "pdqp", n, algo.queries, algo.samples});
            combos.push_back({kind, "pdqp-naq", n, algo.queries, algo.samples});
        }
    }
    bool ok = true;
    double min_ratio = 1e300;
    for (const Combo &cb : combos) {
        const RelationInstance rel = build_relation(cb.kind, cb.n);
        const BoundReport rep = compute_bounds(rel, uniform_scheme());
        const double achieved = double(cb.queries + cb.samples);
        ok = ok && rep.additive_lower <= achieved + 1e-9;
        min_ratio = std::min(min_ratio, achieved / rep.additive_lower);
        if (std::string(cb.model) == "pdqp-naq") {
            const double product = double(cb.queries) * double(cb.samples);
            ok = ok && rep.nonadaptive_lower <= product + 1e-9;
        }
    }
    detail << combos.size()
           << " (problem, model, N<=64) combinations: additive bound <= Q+P everywhere "
              "(one-round product bound <= Q*P as well); tightest achieved/bound ratio "
           << fmt(min_ratio, 3) << "; collision skipped (no boundary relation)";
    return ok;
}

// ---- criterion 9: the numerical inequality verifiers find no violations ----
bool criterion_inequalities(std::ostringstream &detail) {
    bool ok = true;
    Rng rng(41);
    const double poly = verify_polynomial_inequality(1000000, rng);
    ok = ok && poly <= 1e-12;

    std::ostringstream extra;
    for (std::uint64_t n : {std::uint64_t(16), std::uint64_t(32)}) {
        const std::vector<HybridPoint> pts = verify_hybrid_bound(n, 8);
        ok = ok && pts.size() == 9;
        for (const HybridPoint &hp : pts) {
            ok = ok && std::abs(hp.rhs - 4.0 * hp.t * hp.t) <= 1e-12;
            ok = ok && hp.lhs <= hp.rhs + 1e-9;
        }
    }

    const std::vector<WeightIdentityCheck> chain = verify_weight_identity(8, 3);
    ok = ok && chain.size() == 3;
    for (const WeightIdentityCheck &c : chain) {
        ok = ok && std::abs((c.phi - c.phi_next) - c.drop) <= 1e-12;
        ok = ok && c.drop <= c.overlap2 + 1e-9 && c.overlap2 <= c.cap + 1e-9;
    }

    const RelationInstance rel = build_relation(ProblemKind::Search, 8);
    Rng lrng(7);
    const LiftedReport lift = verify_lifted_weights(rel, uniform_scheme(), 2, 0, lrng);
    ok = ok && lift.valid && lift.checks == 64 && lift.worst_margin >= -1e-12;

    detail << "polynomial worst violation " << fmt(poly, 3) << " over 1e6 samples; hybrid N in "
              "{16,32} t<=8 all LHS <= 4t^2; per-query progress chain holds at N=8, t in {0,1,2}; "
              "lifted tuples exhaustive at N=8, k=2 ("
           << lift.checks << " checks, worst margin " << fmt(lift.worst_margin, 3) << ")";
    return ok;
}

// ---- criterion 10: the copy-based model behaves and its bound scales ----
bool criterion_copy_model(std::ostringstream &detail) {
    bool ok = true;

    // (a) copying |+> gives two independent unbiased bits.
    {
        StepCircuit c;
        c.workspace.append({"a", 1});
        Step s0;
        s0.kind = StepKind::Copy;
        s0.copy = {"a", "b"};
        s0.gates.push_back({"h", {{"a", 0}}, std::nullopt});
        c.steps.push_back(std::move(s0));
        c.declared_samples = 1; // copy steps count against the sample budget
        validate_circuit(c);
        RunOptions options;
        options.final_measurement = true;
        Rng rng(0xCB01);
        const int runs = 4000;
        int counts[4] = {0, 0, 0, 0};
        for (int r = 0; r < runs; ++r) {
            const RunResult res = run_cbqp(c, nullptr, options, rng);
            ok = ok && res.transcript.copies_used == 1 && res.transcript.final_outcome.has_value();
            counts[*res.transcript.final_outcome & 3] += 1;
        }
        const double expect = runs / 4.0;
        double chi2 = 0.0;
        for (int k = 0; k < 4; ++k)
            chi2 += (counts[k] - expect) * (counts[k] - expect) / expect;
        ok = ok && chi2 < 16.266; // df = 3, alpha = 0.001
    }

    // (b) entangling the copy afterwards correlates the halves exactly:
    // copy |0>, then H on the source and CNOT onto the copy form a Bell pair.
    {
        StepCircuit c;
        c.workspace.append({"a", 1});
        Step s0;
        s0.kind = StepKind::Copy;
        s0.copy = {"a", "b"};
        c.steps.push_back(std::move(s0));
        Step s1;
        s1.gates.push_back({"h", {{"a", 0}}, std::nullopt});
        s1.gates.push_back({"cx", {{"a", 0}, {"b", 0}}, std::nullopt});
        c.steps.push_back(std::move(s1));
        c.declared_samples = 1;
        validate_circuit(c);
        RunOptions options;
        options.final_measurement = true;
        Rng rng(0xCB02);
        const int runs = 4000;
        int ones = 0;
        for (int r = 0; r < runs; ++r) {
            const RunResult res = run_cbqp(c, nullptr, options, rng);
            const std::uint64_t v = *res.transcript.final_outcome;
            ok = ok && (v == 0b00 || v == 0b11);
            ones += v == 0b11 ? 1 : 0;
        }
        const double freq = double(ones) / runs;
        ok = ok && std::abs(freq - 0.5) < 4.0 * std::sqrt(0.25 / runs) + 1e-12;
    }

    // (c) copying one half of an entangled pair must be rejected.
    {
        StepCircuit c;
        c.workspace.append({"a", 1});
        c.workspace.append({"b", 1});
        Step s0;
        s0.gates.push_back({"h", {{"a", 0}}, std::nullopt});
        s0.gates.push_back({"cx", {{"a", 0}, {"b", 0}}, std::nullopt});
        c.steps.push_back(std::move(s0));
        Step s1;
        s1.kind = StepKind::Copy;
        s1.copy = {"a", "c"};
        c.steps.push_back(std::move(s1));
        c.declared_samples = 1;
        validate_circuit(c);
        const RunOptions options;
        Rng rng(0xCB03);
        bool threw = false;
        try {
            run_cbqp(c, nullptr, options, rng);
        } catch (const CopyOfEntangledRegister &) {
            threw = true;
        }
        ok = ok && threw;
    }

    // Copy-count bound on search: at one query, copies >= log2(C sqrt(N)),
    // i.e. the copy budget grows like (1/2) log2 N and queries * 2^copies
    // stays above C sqrt(N).
    const double C = adversary_constant(1.0 / 3.0);
    double prev = 0.0;
    std::ostringstream row;
    bool first = true;
    for (std::uint64_t n : {std::uint64_t(16), std::uint64_t(64), std::uint64_t(256),
                            std::uint64_t(1024)}) {
        const RelationInstance rel = build_relation(ProblemKind::Search, n);
        const BoundReport rep = compute_bounds(rel, uniform_scheme());
        const double expect = 0.5 * std::log2(double(n)) + std::log2(C);
        ok = ok && std::abs(rep.copies_at_one_query - expect) <= 1e-9;
        ok = ok && std::abs(rep.product_lower - C * std::sqrt(double(n))) <= 1e-9;
        if (!first)
            ok = ok && std::abs((rep.copies_at_one_query - prev) - 1.0) <= 1e-9;
        prev = rep.copies_at_one_query;
        first = false;
        row << " N=" << n << ":" << fmt(rep.copies_at_one_query, 3);
    }
    detail << "copied |+> independent (chi-square), post-copy CNOT correlates exactly, "
              "entangled copy rejected; copies at one query" << row.str()
           << " (= log2 C + (1/2) log2 N, so P grows with log N)";
    return ok;
}

// ---- criterion 11: identical seeds reproduce byte-identical outputs ----
bool criterion_determinism(std::ostringstream &detail) {
    namespace fs = std::filesystem;
    const fs::path dir = fs::current_path() / "acceptance-io";
    fs::create_directories(dir);
    auto slurp = [](const fs::path &p) {
        std::ifstream in(p, std::ios::binary);
        std::ostringstream buf;
        buf << in.rdbuf();
        return buf.str();
    };
    auto shell = [](const std::string &cmd) { return std::system(cmd.c_str()) == 0; };
    const std::string cli = "\"" PDQPSIM_CLI_PATH "\"";
    bool ok = true;

    const fs::path s1 = dir / "sweep-a.csv", s2 = dir / "sweep-b.csv";
    const std::string sweep = cli +
                              " sweep --problem collision --n 8 --n 16 --p 6 --trials 400"
                              " --seed 5 --out csv --output ";
    ok = ok && shell(sweep + "\"" + s1.string() + "\"");
    ok = ok && shell(sweep + "\"" + s2.string() + "\"");
    const std::string sa = slurp(s1), sb = slurp(s2);
    ok = ok && !sa.empty() && sa == sb;

    const fs::path j1 = dir / "sweep-a.json", j2 = dir / "sweep-b.json";
    const std::string sweep_json = cli +
                                   " sweep --problem search --model pdqp --n 8 --n 27 --n 64"
                                   " --trials 300 --seed 11 --fit --out json --output ";
    ok = ok && shell(sweep_json + "\"" + j1.string() + "\"");
    ok = ok && shell(sweep_json + "\"" + j2.string() + "\"");
    const std::string ja = slurp(j1), jb = slurp(j2);
    ok = ok && !ja.empty() && ja == jb;

    const fs::path v1 = dir / "verify-a.txt", v2 = dir / "verify-b.txt";
    const std::string verify = cli +
                               " verify --suite polynomial --suite weight-identity"
                               " --samples 200000 --seed 3";
    ok = ok && shell(verify + " > \"" + v1.string() + "\" 2>&1");
    ok = ok && shell(verify + " > \"" + v2.string() + "\" 2>&1");
    const std::string va = slurp(v1), vb = slurp(v2);
    ok = ok && !va.empty() && va == vb;

    detail << "sweep (csv and json+fit) and verify reruns with equal seeds are byte-identical ("
           << sa.size() << ", " << ja.size() << ", " << va.size() << " bytes)";
    return ok;
}

struct Criterion {
    std::string name;
    std::function<bool(std::ostringstream &)> run;
};

} // namespace

int main() {
    const std::vector<Criterion> criteria = {
        {"semantics-equivalence", criterion_equivalence},
        {"reweight-exactness", criterion_reweight_exactness},
        {"fidelity-monotone", criterion_monotone},
        {"collision-error-law", criterion_collision_error},
        {"search-budget-scaling", criterion_search_scaling},
        {"one-round-success", criterion_one_round},
        {"relation-degrees", criterion_relation_degrees},
        {"bound-vs-achieved", criterion_bound_ordering},
        {"inequality-suites", criterion_inequalities},
        {"copy-model", criterion_copy_model},
        {"determinism", criterion_determinism},
    };
    int failures = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        std::ostringstream detail;
        bool ok = false;
        try {
            ok = criteria[i].run(detail);
        } catch (const std::exception &e) {
            detail << "threw: " << e.what();
            ok = false;
        }
        std::cout << (ok ? "PASS" : "FAIL") << " criterion-" << std::setw(2)
                  << std::setfill('0') << (i + 1) << std::setfill(' ') << ' '
                  << criteria[i].name << ": " << detail.str() << std::endl;
        failures += ok ? 0 : 1;
    }
    std::cout << "acceptance: " << (criteria.size() - failures) << "/" << criteria.size()
              << " criteria passed" << std::endl;
    return failures;
}
