// bench.cpp -- experiment harness, budget search, serialization, and the
// verification suites that back the test battery.
#include "pdqp/bench.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <iomanip>
#include <json.hpp>
#include <map>
#include <sstream>
#include <thread>

#include "pdqp/engine.hpp"
#include "pdqp/errors.hpp"
#include "pdqp/gates.hpp"

namespace pdqp {
namespace {

std::uint64_t fnv64(const std::string &s, std::uint64_t h = 1469598103934665603ULL) {
    for (unsigned char ch : s) {
        h ^= ch;
        h *= 1099511628211ULL;
    }
    return h;
}

std::string fmt6(double v) {
    std::ostringstream os;
    os << std::fixed << std::setprecision(6) << v;
    return os.str();
}

// c <= 0 asks for the per-problem default: 1 for the adaptive amplitude
// amplification circuit, 3 for the one-round partition circuits (whose
// decision rules need enough samples to cover every block).
double resolved_c(const ExperimentSpec &spec) {
    if (spec.c > 0)
        return spec.c;
    const bool one_round = spec.model == "pdqp-naq";
    if (spec.problem == ProblemKind::Search && !one_round)
        return 1.0;
    if (spec.problem == ProblemKind::Collision)
        return 1.0; // collision takes no scaling constant
    return 3.0;
}

AlgorithmSpec build_algorithm(const ExperimentSpec &spec, double c) {
    const bool one_round = spec.model == "pdqp-naq";
    if (spec.model != "pdqp" && !one_round)
        throw InvalidParameters("unknown model: " + spec.model +
                                " (expected pdqp or pdqp-naq)");
    // Only the amplitude-amplification circuit has a free query count; the
    // others fix it structurally and accept only a matching override.
    auto check_fixed_queries = [&](const AlgorithmSpec &algo) {
        if (spec.queries_override && *spec.queries_override != algo.queries)
            throw InvalidParameters("this circuit uses exactly " +
                                    std::to_string(algo.queries) + " queries");
        return algo;
    };
    switch (spec.problem) {
    case ProblemKind::Search:
        if (one_round)
            return check_fixed_queries(nonadaptive_partition_algorithm(
                spec.problem, spec.n, c, spec.samples_override));
        return pdqp_search_algorithm(spec.n, c, spec.samples_override,
                                     spec.queries_override);
    case ProblemKind::Collision:
        if (one_round)
            throw InvalidParameters("collision has no one-round circuit");
        return check_fixed_queries(
            collision_algorithm(spec.n, spec.samples_override.value_or(4)));
    default:
        // Majority / parity / element distinctness use the partition circuit
        // under both models; the adaptive model simply inherits it.
        return check_fixed_queries(nonadaptive_partition_algorithm(
            spec.problem, spec.n, c, spec.samples_override));
    }
}

std::uint64_t spec_tag(const ExperimentSpec &spec, double c, const AlgorithmSpec &algo) {
    std::uint64_t h = fnv64(to_string(spec.problem));
    h = fnv64("|" + spec.model, h);
    h ^= 0x9e3779b97f4a7c15ULL * std::uint64_t(algo.samples + 1);
    h ^= 0x94d049bb133111ebULL * std::uint64_t(algo.queries + 1);
    std::uint64_t cbits = 0;
    static_assert(sizeof(double) == sizeof(std::uint64_t));
    std::memcpy(&cbits, &c, sizeof(cbits));
    h ^= 0xbf58476d1ce4e5b9ULL * (cbits + 1);
    return h;
}

// Per-trial instance classes: search looks for one marked item; collision
// mixes 1-to-1 and 2-to-1 tables; element distinctness mixes distinct and
// one-duplicate tables; majority/parity draw i.i.d. fair tables.
ProblemInstance instance_for_trial(ProblemKind kind, std::uint64_t n, Rng &rng) {
    GenParams params;
    switch (kind) {
    case ProblemKind::Search:
        params.marked = 1;
        break;
    case ProblemKind::Collision:
        params.collision_k = rng.bernoulli(0.5) ? 2 : 1;
        break;
    case ProblemKind::ElementDistinctness:
        params.duplicate = rng.bernoulli(0.5) ? 1 : 0;
        break;
    default:
        break;
    }
    return generate_instance(kind, n, params, rng);
}

} // namespace

ExperimentResult estimate_success(const ExperimentSpec &spec) {
    if (spec.trials <= 0)
        throw InvalidParameters("trials must be positive");
    const double c = resolved_c(spec);
    const AlgorithmSpec algo = build_algorithm(spec, c);
    const std::uint64_t tag = spec_tag(spec, c, algo);
    const RunOptions options;

    auto run_trial = [&](int trial) -> bool {
        Rng rng = Rng(spec.seed).derive(tag, spec.n, std::uint64_t(trial));
        const ProblemInstance inst = instance_for_trial(spec.problem, spec.n, rng);
        const RunResult run = run_direct(algo.circuit, &inst, options, rng);
        const DecisionOutcome out = algo.decide(run.transcript, inst);
        return out.complete && out.answer == inst.answer;
    };

    int successes = 0;
    const int threads = std::min(std::max(spec.threads, 1), spec.trials);
    if (threads == 1) {
        for (int t = 0; t < spec.trials; ++t)
            successes += run_trial(t) ? 1 : 0;
    } else {
        // Per-trial substreams make the tally independent of the partition.
        std::vector<int> partial(std::size_t(threads), 0);
        std::vector<std::thread> pool;
        const int chunk = (spec.trials + threads - 1) / threads;
        for (int w = 0; w < threads; ++w) {
            const int lo = w * chunk;
            const int hi = std::min(spec.trials, lo + chunk);
            pool.emplace_back([&, w, lo, hi] {
                int local = 0;
                for (int t = lo; t < hi; ++t)
                    local += run_trial(t) ? 1 : 0;
                partial[std::size_t(w)] = local;
            });
        }
        for (std::thread &th : pool)
            th.join();
        for (int p : partial)
            successes += p;
    }

    ExperimentResult res;
    res.problem = to_string(spec.problem);
    res.model = spec.model;
    res.n = spec.n;
    res.queries = algo.queries;
    res.samples = algo.samples;
    res.trials = spec.trials;
    res.successes = successes;
    res.rate = double(successes) / double(spec.trials);
    const WilsonInterval ci = wilson_interval(successes, spec.trials);
    res.ci_lo = ci.lo;
    res.ci_hi = ci.hi;
    res.seed = spec.seed;
    return res;
}

WilsonInterval wilson_interval(int successes, int trials, double z) {
    if (trials <= 0 || successes < 0 || successes > trials)
        throw InvalidParameters("wilson_interval needs 0 <= successes <= trials, trials > 0");
    const double n = trials;
    const double p = double(successes) / n;
    const double z2 = z * z;
    const double denom = 1.0 + z2 / n;
    const double center = (p + z2 / (2.0 * n)) / denom;
    const double half = z * std::sqrt(p * (1.0 - p) / n + z2 / (4.0 * n * n)) / denom;
    // Clamp to [0, 1] but keep the point estimate inside: at p = 0 or 1 the
    // upper/lower limit can otherwise land one rounding ulp past p.
    return {std::min(p, std::max(0.0, center - half)), std::max(p, std::min(1.0, center + half))};
}

MinimalBudgetResult minimal_budget(ExperimentSpec base, double target, int cap) {
    if (!(target > 0.0 && target < 1.0))
        throw InvalidParameters("target rate must lie in (0, 1)");
    if (cap < 1)
        throw InvalidParameters("sample budget cap must be positive");
    // Accept when the measured rate is within one 95% binomial allowance of
    // the target, so a budget that truly meets the target is rarely rejected.
    const double allowance = 1.959964 * std::sqrt(target * (1.0 - target) / base.trials);
    const double floor_rate = target - allowance;

    MinimalBudgetResult out;
    auto accepted = [&](int samples) {
        base.samples_override = samples;
        ExperimentResult probe = estimate_success(base);
        out.probes.push_back(probe);
        return probe.rate >= floor_rate;
    };

    int hi = 1;
    while (!accepted(hi)) {
        if (hi > cap / 2)
            throw BudgetCapReached("no sample budget up to " + std::to_string(cap) +
                                   " reached the target rate");
        hi *= 2;
    }
    int lo = hi / 2 + 1;
    while (lo < hi) {
        const int mid = lo + (hi - lo) / 2;
        if (accepted(mid))
            hi = mid;
        else
            lo = mid + 1;
    }
    out.samples = hi;
    return out;
}

PowerFit fit_loglog(const std::vector<double> &xs, const std::vector<double> &ys) {
    if (xs.size() != ys.size() || xs.size() < 2)
        throw InvalidParameters("fit_loglog needs two matched samples or more");
    const std::size_t m = xs.size();
    double sx = 0, sy = 0;
    std::vector<double> lx(m), ly(m);
    for (std::size_t i = 0; i < m; ++i) {
        if (!(xs[i] > 0.0) || !(ys[i] > 0.0))
            throw InvalidParameters("fit_loglog needs strictly positive data");
        lx[i] = std::log(xs[i]);
        ly[i] = std::log(ys[i]);
        sx += lx[i];
        sy += ly[i];
    }
    const double mx = sx / double(m);
    const double my = sy / double(m);
    double sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < m; ++i) {
        sxx += (lx[i] - mx) * (lx[i] - mx);
        sxy += (lx[i] - mx) * (ly[i] - my);
    }
    if (sxx <= 0.0)
        throw InvalidParameters("fit_loglog needs at least two distinct x values");
    PowerFit fit;
    fit.exponent = sxy / sxx;
    fit.scale = std::exp(my - fit.exponent * mx);
    return fit;
}

std::string results_to_csv(const std::vector<ExperimentResult> &results) {
    std::ostringstream os;
    os << "problem,model,N,Q,P,trials,successes,rate,ci_lo,ci_hi,seed\n";
    os << std::fixed << std::setprecision(6);
    for (const ExperimentResult &r : results)
        os << r.problem << ',' << r.model << ',' << r.n << ',' << r.queries << ',' << r.samples
           << ',' << r.trials << ',' << r.successes << ',' << r.rate << ',' << r.ci_lo << ','
           << r.ci_hi << ',' << r.seed << '\n';
    return os.str();
}

std::string results_to_json(const std::vector<ExperimentResult> &results) {
    nlohmann::ordered_json arr = nlohmann::ordered_json::array();
    for (const ExperimentResult &r : results) {
        nlohmann::ordered_json o;
        o["problem"] = r.problem;
        o["model"] = r.model;
        o["N"] = r.n;
        o["Q"] = r.queries;
        o["P"] = r.samples;
        o["trials"] = r.trials;
        o["successes"] = r.successes;
        o["rate"] = r.rate;
        o["ci_lo"] = r.ci_lo;
        o["ci_hi"] = r.ci_hi;
        o["seed"] = r.seed;
        arr.push_back(std::move(o));
    }
    return arr.dump(2) + "\n";
}

std::string bound_report_to_json(ProblemKind problem, std::uint64_t n, const BoundReport &report) {
    nlohmann::ordered_json o;
    o["problem"] = to_string(problem);
    o["N"] = n;
    o["epsilon"] = report.epsilon;
    o["v_x"] = report.profile.v_x;
    o["v_y"] = report.profile.v_y;
    o["v_max"] = report.profile.v_max;
    o["product_lower"] = report.product_lower;
    o["nonadaptive_lower"] = report.nonadaptive_lower;
    o["additive_lower"] = report.additive_lower;
    o["copies_at_one_query"] = report.copies_at_one_query;
    return o.dump(2) + "\n";
}

// ---- verification suites -------------------------------------------------------

namespace {

// A comparison circuit plus the instance it queries and the bit width of each
// sampled value (flattened in transcript order), for outcome packing.
struct FamilyCircuit {
    StepCircuit circuit;
    ProblemInstance instance;
    std::vector<int> sample_widths;
};

std::uint64_t transcript_key(const RunTranscript &t, const std::vector<int> &widths) {
    std::uint64_t key = 1;
    std::size_t vi = 0;
    for (const auto &step : t.samples)
        for (std::uint64_t v : step) {
            key = (key << widths.at(vi)) | v;
            ++vi;
        }
    return key;
}

// Deterministic family of small mixed circuits. Shapes keep the purified
// executor cheap (workspace qubits x steps <= 9) and the joint sampled
// outcome space small (<= 4 sampled bits), so two 1e5-run histograms resolve
// distribution differences well below the comparison tolerance.
struct FamilyShape {
    std::vector<Register> regs;
    int steps;
};

const std::vector<FamilyShape> &family_shapes() {
    static const std::vector<FamilyShape> shapes = {
        {{{"a", 1}, {"b", 1}}, 2},           {{{"a", 1}, {"b", 1}}, 3},
        {{{"a", 2}, {"b", 1}}, 2},           {{{"a", 1}, {"b", 1}, {"c", 1}}, 3},
        {{{"a", 2}, {"b", 1}}, 3},
    };
    return shapes;
}

FamilyCircuit make_family_circuit(std::uint64_t seed, int idx) {
    Rng rng = Rng(seed).derive(0xFA31ULL, std::uint64_t(idx));
    const FamilyShape &shape = family_shapes()[std::size_t(idx) % family_shapes().size()];

    FamilyCircuit fc;
    for (const Register &reg : shape.regs)
        fc.circuit.workspace.append(reg);
    const int wa = shape.regs[0].qubits;
    const int wb = shape.regs[1].qubits;

    fc.instance.kind = ProblemKind::Search;
    fc.instance.n = 1ull << wa;
    fc.instance.table.resize(fc.instance.n);
    for (auto &v : fc.instance.table)
        v = std::uint32_t(rng.uniform_int(2));
    fc.instance.answer =
        brute_force_answer(ProblemKind::Search, fc.instance.n, fc.instance.table);

    static const char *kNames1Q[] = {"h", "x", "z", "s", "t"};
    auto random_qubit = [&]() -> QubitRef {
        const std::size_t r = rng.uniform_int(shape.regs.size());
        return {shape.regs[r].name, int(rng.uniform_int(std::uint64_t(shape.regs[r].qubits)))};
    };

    int sample_budget = 4;
    for (int s = 0; s < shape.steps; ++s) {
        Step step;
        const int n_gates = 1 + int(rng.uniform_int(2));
        for (int g = 0; g < n_gates; ++g) {
            const double roll = rng.uniform01();
            GateApplication ga;
            if (roll < 0.6) {
                ga.name = kNames1Q[rng.uniform_int(5)];
                ga.targets = {random_qubit()};
            } else if (roll < 0.8) {
                QubitRef q1 = random_qubit();
                QubitRef q2 = random_qubit();
                while (q2.reg == q1.reg && q2.bit == q1.bit)
                    q2 = random_qubit();
                ga.name = "cx";
                ga.targets = {q1, q2};
            } else {
                ga.name = "matrix";
                ga.matrix = random_unitary(2, rng);
                ga.targets = {random_qubit()};
            }
            step.gates.push_back(std::move(ga));
        }
        if (rng.uniform01() < 0.35)
            step.collapse = shape.regs[rng.uniform_int(shape.regs.size())].name;

        const bool is_last = (s + 1 == shape.steps);
        bool want_sample = is_last || rng.bernoulli(0.5);
        if (want_sample) {
            std::vector<std::size_t> fits;
            for (std::size_t r = 0; r < shape.regs.size(); ++r)
                if (shape.regs[r].qubits <= sample_budget)
                    fits.push_back(r);
            if (fits.empty()) {
                want_sample = false; // budget exhausted; fall through to a query
            } else {
                const std::size_t pick = fits[rng.uniform_int(fits.size())];
                step.kind = StepKind::Sample;
                step.sample.registers = {shape.regs[pick].name};
                sample_budget -= shape.regs[pick].qubits;
                fc.sample_widths.push_back(shape.regs[pick].qubits);
            }
        }
        if (!want_sample) {
            // The shapes guarantee the forced final sample always fits, so a
            // fall-through here can only happen on a non-final step.
            step.kind = StepKind::Query;
            step.oracle.kind =
                (wb == 1 && rng.bernoulli(0.5)) ? OracleKind::Phase : OracleKind::XorValue;
            step.oracle.pairs = {{shape.regs[0].name, shape.regs[1].name}};
        }
        fc.circuit.steps.push_back(std::move(step));
    }
    bool any_collapse = false;
    for (const Step &st : fc.circuit.steps)
        any_collapse = any_collapse || st.collapse.has_value();
    if (!any_collapse)
        fc.circuit.steps.front().collapse = shape.regs[0].name;
    fc.circuit.declared_queries = count_queries(fc.circuit);
    fc.circuit.declared_samples = count_samples(fc.circuit);
    validate_circuit(fc.circuit);
    return fc;
}

CMatrix rotation_gate(double p0) {
    // Maps |0> to sqrt(p0)|0> + sqrt(1-p0)|1>.
    const double c = std::sqrt(p0);
    const double s = std::sqrt(1.0 - p0);
    CMatrix m(2);
    m(0, 0) = c;
    m(0, 1) = -s;
    m(1, 0) = s;
    m(1, 1) = c;
    return m;
}

// Circuits whose sampling distribution depends on the collapse reweights:
// each collapses a skewed superposition while two or more workspace copies
// are still live, so skipping the reweights visibly distorts the samples.
std::vector<FamilyCircuit> fault_family() {
    std::vector<FamilyCircuit> out;

    auto finish = [](FamilyCircuit &fc) {
        fc.circuit.declared_queries = count_queries(fc.circuit);
        fc.circuit.declared_samples = count_samples(fc.circuit);
        validate_circuit(fc.circuit);
    };

    {
        FamilyCircuit fc;
        fc.circuit.workspace.append({"a", 1});
        Step s0;
        s0.gates = {{"matrix", {{"a", 0}}, rotation_gate(0.9)}};
        s0.collapse = "a";
        s0.kind = StepKind::Sample;
        s0.sample.registers = {"a"};
        Step s1;
        s1.kind = StepKind::Sample;
        s1.sample.registers = {"a"};
        fc.circuit.steps = {s0, s1};
        fc.sample_widths = {1, 1};
        finish(fc);
        out.push_back(std::move(fc));
    }
    {
        FamilyCircuit fc;
        fc.circuit.workspace.append({"a", 1});
        fc.circuit.workspace.append({"b", 1});
        Step s0;
        s0.gates = {{"matrix", {{"a", 0}}, rotation_gate(0.8)}, {"cx", {{"a", 0}, {"b", 0}}, {}}};
        s0.collapse = "b";
        s0.kind = StepKind::Sample;
        s0.sample.registers = {"a"};
        Step s1;
        s1.kind = StepKind::Sample;
        s1.sample.registers = {"b"};
        fc.circuit.steps = {s0, s1};
        fc.sample_widths = {1, 1};
        finish(fc);
        out.push_back(std::move(fc));
    }
    {
        FamilyCircuit fc;
        fc.circuit.workspace.append({"a", 1});
        Step s0;
        s0.gates = {{"h", {{"a", 0}}, {}}};
        s0.kind = StepKind::Sample;
        s0.sample.registers = {"a"};
        Step s1;
        s1.gates = {{"matrix", {{"a", 0}}, rotation_gate(0.85)}};
        s1.collapse = "a";
        s1.kind = StepKind::Sample;
        s1.sample.registers = {"a"};
        Step s2;
        s2.kind = StepKind::Sample;
        s2.sample.registers = {"a"};
        fc.circuit.steps = {s0, s1, s2};
        fc.sample_widths = {1, 1, 1};
        finish(fc);
        out.push_back(std::move(fc));
    }
    return out;
}

// Total-variation distance between the sampled-outcome histograms of the two
// executors over `runs` runs each.
double sampling_tv(const FamilyCircuit &fc, int runs, std::uint64_t seed, std::uint64_t tag,
                   bool force_unit_reweights) {
    RunOptions direct_options;
    RunOptions purified_options;
    purified_options.force_unit_reweights = force_unit_reweights;

    std::map<std::uint64_t, long long> delta;
    for (int r = 0; r < runs; ++r) {
        Rng rng = Rng(seed).derive(tag, 1, std::uint64_t(r));
        const RunResult out = run_direct(fc.circuit, &fc.instance, direct_options, rng);
        ++delta[transcript_key(out.transcript, fc.sample_widths)];
    }
    for (int r = 0; r < runs; ++r) {
        Rng rng = Rng(seed).derive(tag, 2, std::uint64_t(r));
        const RunResult out = run_purified(fc.circuit, &fc.instance, purified_options, rng);
        --delta[transcript_key(out.transcript, fc.sample_widths)];
    }
    double tv = 0.0;
    for (const auto &[key, d] : delta)
        tv += std::abs(double(d));
    return tv / (2.0 * double(runs));
}

SuiteResult equivalence_suite(const VerifyOptions &o) {
    SuiteResult res;
    res.name = "equivalence";
    double max_tv = 0.0;
    int worst_idx = -1;
    for (int idx = 0; idx < o.equivalence_circuits; ++idx) {
        const FamilyCircuit fc = make_family_circuit(o.seed, idx);
        const double tv =
            sampling_tv(fc, o.equivalence_runs, o.seed, 0xD12EC7ULL + std::uint64_t(idx), false);
        ++res.checks;
        if (!(tv <= o.equivalence_tolerance))
            ++res.failures;
        if (tv > max_tv) {
            max_tv = tv;
            worst_idx = idx;
        }
    }
    res.worst = max_tv;
    res.detail = "max sample TV " + fmt6(max_tv) + " (circuit " + std::to_string(worst_idx) +
                 ", " + std::to_string(o.equivalence_runs) + " runs/executor, tolerance " +
                 fmt6(o.equivalence_tolerance) + ")";
    return res;
}

SuiteResult fault_sensitivity_suite(const VerifyOptions &o) {
    SuiteResult res;
    res.name = "fault-sensitivity";
    double min_tv = 1.0;
    const std::vector<FamilyCircuit> circuits = fault_family();
    for (std::size_t i = 0; i < circuits.size(); ++i) {
        const double tv = sampling_tv(circuits[i], o.fault_runs, o.seed,
                                      0xFA017ULL + std::uint64_t(i), true);
        ++res.checks;
        if (!(tv > o.equivalence_tolerance))
            ++res.failures;
        min_tv = std::min(min_tv, tv);
    }
    res.worst = min_tv;
    res.detail = "min sample TV " + fmt6(min_tv) +
                 " with reweights skipped; every circuit must exceed the tolerance " +
                 fmt6(o.equivalence_tolerance);
    return res;
}

// amps(copy c) occupy qubit window [c*l, (c+1)*l), matching the engine's
// copy indexing.
QuantumState tensor_power_state(const QuantumState &single, int copies) {
    RegisterLayout big;
    for (int c = 0; c < copies; ++c)
        for (const Register &reg : single.layout().registers())
            big.append({reg.name + "_" + std::to_string(c), reg.qubits});
    std::vector<cdouble> cur{cdouble(1, 0)};
    int qubits_done = 0;
    for (int c = 0; c < copies; ++c) {
        const auto &s = single.amplitudes();
        std::vector<cdouble> next(cur.size() * s.size());
        for (std::size_t hi = 0; hi < s.size(); ++hi)
            for (std::size_t lo = 0; lo < cur.size(); ++lo)
                next[(hi << qubits_done) | lo] = cur[lo] * s[hi];
        cur = std::move(next);
        qubits_done += single.n_qubits();
    }
    return QuantumState(big, std::move(cur));
}

SuiteResult monotone_suite(const VerifyOptions &o) {
    SuiteResult res;
    res.name = "monotone";
    Rng rng = Rng(o.seed).derive(0x303EULL);
    double worst_margin = 1e9;
    double worst_weight_error = 0.0;
    for (int i = 0; i < o.monotone_cases; ++i) {
        RegisterLayout ws;
        int copies = 2;
        switch (i % 5) {
        case 0:
            ws.append({"m", 1});
            copies = 2;
            break;
        case 1:
            ws.append({"m", 1});
            copies = 3;
            break;
        case 2:
            ws.append({"m", 2});
            copies = 2;
            break;
        case 3:
            ws.append({"m", 1});
            ws.append({"e", 1});
            copies = 2;
            break;
        default:
            ws.append({"m", 1});
            copies = 1;
            break;
        }
        const QuantumState phi = random_state(ws, rng);
        const QuantumState chi = random_state(ws, rng);
        StateEnsemble a;
        a.members.push_back({1.0, tensor_power_state(phi, copies)});
        StateEnsemble b;
        b.members.push_back({1.0, tensor_power_state(chi, copies)});
        EqualOutcomeMeasure measure;
        measure.workspace = ws;
        measure.measured_register = "m";
        measure.copies = copies;

        const MonotonePair pair = check_fidelity_monotone(a, b, measure);
        ++res.checks;
        const double margin = pair.after - pair.before;
        if (margin < -1e-9)
            ++res.failures;
        worst_margin = std::min(worst_margin, margin);

        // The reference ensemble's own total weight is preserved exactly.
        const StateEnsemble pa = apply_equal_outcome_measure(a, measure, a);
        ++res.checks;
        const double weight_error = std::abs(pa.total_weight() - a.total_weight());
        if (weight_error > 1e-9)
            ++res.failures;
        worst_weight_error = std::max(worst_weight_error, weight_error);
    }
    res.worst = worst_margin;
    res.detail = "min fidelity margin " + fmt6(worst_margin) + ", max weight drift " +
                 fmt6(worst_weight_error) + " over " + std::to_string(o.monotone_cases) +
                 " random tensor-power pairs";
    return res;
}

SuiteResult polynomial_suite(const VerifyOptions &o) {
    SuiteResult res;
    res.name = "polynomial";
    Rng rng = Rng(o.seed).derive(0x7011ULL);
    const double worst = verify_polynomial_inequality(o.polynomial_samples, rng);
    res.checks = int(std::min<std::size_t>(o.polynomial_samples, std::size_t(INT32_MAX)));
    res.failures = worst > 1e-12 ? 1 : 0;
    res.worst = worst;
    res.detail = "largest violation of ks >= r^k - (r-s)^k: " + fmt6(worst);
    return res;
}

SuiteResult hybrid_suite(const VerifyOptions &) {
    SuiteResult res;
    res.name = "hybrid";
    double worst = -1e9;
    for (std::uint64_t n : {std::uint64_t(16), std::uint64_t(32)}) {
        for (const HybridPoint &pt : verify_hybrid_bound(n, 8)) {
            ++res.checks;
            if (pt.lhs > pt.rhs + 1e-9)
                ++res.failures;
            worst = std::max(worst, pt.lhs - pt.rhs);
        }
    }
    res.worst = worst;
    res.detail = "max (perturbation - 4t^2) over n in {16,32}, t <= 8: " + fmt6(worst);
    return res;
}

SuiteResult weight_identity_suite(const VerifyOptions &) {
    SuiteResult res;
    res.name = "weight-identity";
    double worst = -1e9;
    bool doubled_needed = false;
    for (std::uint64_t n : {std::uint64_t(8), std::uint64_t(16)}) {
        for (const WeightIdentityCheck &c : verify_weight_identity(n, 3)) {
            res.checks += 2;
            if (c.drop > c.overlap2 + 1e-9)
                ++res.failures;
            if (c.overlap2 > c.cap + 1e-9)
                ++res.failures;
            worst = std::max({worst, c.drop - c.overlap2, c.overlap2 - c.cap});
            if (n == 8 && c.overlap2 > 0.5 * c.cap + 1e-9)
                doubled_needed = true;
        }
    }
    // The doubled cap is not slack: some step must exceed half of it.
    ++res.checks;
    if (!doubled_needed)
        ++res.failures;
    res.worst = worst;
    res.detail = std::string("max slack violation ") + fmt6(worst) +
                 (doubled_needed ? "; halved cap exceeded at n=8 as expected"
                                 : "; halved cap never exceeded (unexpected)");
    return res;
}

SuiteResult lifted_suite(const VerifyOptions &o) {
    SuiteResult res;
    res.name = "lifted";
    WeightScheme skew;
    skew.name = "skew-4-1";
    skew.w = [](const RelationInstance &, const RelatedPair &) { return 2.0; };
    skew.wp = [](const RelationInstance &, const RelatedPair &, std::uint64_t, bool x_side) {
        return x_side ? 4.0 : 1.0;
    };

    const std::vector<std::pair<ProblemKind, std::uint64_t>> relations = {
        {ProblemKind::Search, 8},
        {ProblemKind::Majority, 8},
        {ProblemKind::ElementDistinctness, 5},
    };
    double worst = 1e9;
    std::uint64_t combo = 0;
    for (const auto &[kind, n] : relations) {
        const RelationInstance rel = build_relation(kind, n);
        for (const WeightScheme &scheme : {uniform_scheme(), skew}) {
            for (int k : {2, 3}) {
                Rng rng = Rng(o.seed).derive(0x11F7ULL, combo++);
                const LiftedReport rep =
                    verify_lifted_weights(rel, scheme, k, o.lifted_tuples, rng);
                res.checks += rep.checks;
                if (!rep.valid || rep.worst_margin < -1e-9)
                    ++res.failures;
                worst = std::min(worst, rep.worst_margin);
            }
        }
    }
    res.worst = worst;
    res.detail = "min load-inequality margin " + fmt6(worst) +
                 " across search/majority/element-distinctness, k in {2,3}";
    return res;
}

SuiteResult collision_error_suite(const VerifyOptions &o) {
    SuiteResult res;
    res.name = "collision-error";
    double worst = 0.0;
    for (std::uint64_t n : {std::uint64_t(8), std::uint64_t(16)}) {
        for (int p = 2; p <= 10; ++p) {
            const AlgorithmSpec algo = collision_algorithm(n, p);
            const RunOptions options;
            int errors = 0;
            for (int t = 0; t < o.collision_trials; ++t) {
                Rng rng = Rng(o.seed).derive(0xC011ULL + std::uint64_t(p), n, std::uint64_t(t));
                GenParams params;
                params.collision_k = 2;
                const ProblemInstance inst =
                    generate_instance(ProblemKind::Collision, n, params, rng);
                const RunResult run = run_direct(algo.circuit, &inst, options, rng);
                const DecisionOutcome out = algo.decide(run.transcript, inst);
                errors += (out.complete && out.answer == 2) ? 0 : 1;
            }
            const double expected = std::ldexp(1.0, 1 - p); // 2^{1-p}
            const double observed = double(errors) / double(o.collision_trials);
            const double se =
                std::sqrt(expected * (1.0 - expected) / double(o.collision_trials));
            const double slack = 4.0 * se + 1e-3;
            ++res.checks;
            if (std::abs(observed - expected) > slack)
                ++res.failures;
            worst = std::max(worst, std::abs(observed - expected) - slack);

            // 1-to-1 tables can never be mistaken for 2-to-1: every sample
            // repeats the one surviving index.
            if (p == 2 || p == 5) {
                int false_collisions = 0;
                for (int t = 0; t < o.collision_trials; ++t) {
                    Rng rng =
                        Rng(o.seed).derive(0xC0AAULL + std::uint64_t(p), n, std::uint64_t(t));
                    GenParams params;
                    params.collision_k = 1;
                    const ProblemInstance inst =
                        generate_instance(ProblemKind::Collision, n, params, rng);
                    const RunResult run = run_direct(algo.circuit, &inst, options, rng);
                    const DecisionOutcome out = algo.decide(run.transcript, inst);
                    false_collisions += (out.complete && out.answer == 1) ? 0 : 1;
                }
                ++res.checks;
                if (false_collisions != 0)
                    ++res.failures;
            }
        }
    }
    res.worst = worst;
    res.detail = "max |observed - 2^{1-P}| beyond the 4-sigma allowance: " + fmt6(worst);
    return res;
}

} // namespace

const std::vector<std::string> &all_suite_names() {
    static const std::vector<std::string> names = {
        "equivalence", "fault-sensitivity", "monotone",         "polynomial",
        "hybrid",      "weight-identity",   "lifted",           "collision-error"};
    return names;
}

std::vector<SuiteResult> verify_all(const std::vector<std::string> &suites,
                                    const VerifyOptions &options) {
    std::vector<SuiteResult> out;
    for (const std::string &name : suites) {
        if (name == "equivalence")
            out.push_back(equivalence_suite(options));
        else if (name == "fault-sensitivity")
            out.push_back(fault_sensitivity_suite(options));
        else if (name == "monotone")
            out.push_back(monotone_suite(options));
        else if (name == "polynomial")
            out.push_back(polynomial_suite(options));
        else if (name == "hybrid")
            out.push_back(hybrid_suite(options));
        else if (name == "weight-identity")
            out.push_back(weight_identity_suite(options));
        else if (name == "lifted")
            out.push_back(lifted_suite(options));
        else if (name == "collision-error")
            out.push_back(collision_error_suite(options));
        else
            throw InvalidParameters("unknown verification suite: " + name);
    }
    return out;
}

} // namespace pdqp
