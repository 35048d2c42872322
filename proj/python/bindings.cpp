// bindings.cpp -- python surface for the core operations: states, problem
// instances, circuits, the three executors, experiments, adversary bounds,
// and the verification suites.
#include <pybind11/complex.h>
#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "pdqp/bench.hpp"
#include "pdqp/errors.hpp"

namespace py = pybind11;
using namespace pdqp;

namespace {

GenParams make_gen_params(std::optional<int> marked, std::optional<std::uint64_t> hamming_weight,
                          std::optional<int> collision_k, std::optional<int> duplicate) {
    GenParams params;
    params.marked = marked;
    params.hamming_weight = hamming_weight;
    params.collision_k = collision_k;
    params.duplicate = duplicate;
    return params;
}

RunOptions make_run_options(bool final_measurement, bool audit_reweights,
                            bool force_unit_reweights) {
    RunOptions options;
    options.final_measurement = final_measurement;
    options.audit_reweights = audit_reweights;
    options.force_unit_reweights = force_unit_reweights;
    return options;
}

} // namespace

PYBIND11_MODULE(_pdqpsim, m) {
    m.doc() = "quantum query circuits with non-collapsing samples";

    py::register_exception<Error>(m, "PdqpError");

    // ---- states ---------------------------------------------------------------
    py::class_<RegisterLayout>(m, "RegisterLayout")
        .def(py::init<>())
        .def("append",
             [](RegisterLayout &l, const std::string &name, int qubits) {
                 l.append({name, qubits});
             },
             py::arg("name"), py::arg("qubits"))
        .def_property_readonly("total_qubits", &RegisterLayout::total_qubits)
        .def("offset_of", &RegisterLayout::offset_of)
        .def("width_of", &RegisterLayout::width_of);

    py::class_<QuantumState>(m, "QuantumState")
        .def(py::init([](const RegisterLayout &layout) { return QuantumState(layout); }),
             py::arg("layout"))
        .def_property_readonly("amplitudes",
                               [](const QuantumState &s) { return s.amplitudes(); })
        .def_property_readonly("n_qubits", &QuantumState::n_qubits)
        .def("norm", &QuantumState::norm)
        .def("register_value", &QuantumState::register_value);

    m.def("fidelity",
          [](const QuantumState &a, const QuantumState &b) { return fidelity(a, b); },
          "square-root fidelity |<a|b>| between pure states");
    m.def("born_distribution",
          [](const QuantumState &s, const std::string &reg) { return born_distribution(s, reg); },
          py::arg("state"), py::arg("register"));

    // ---- problem instances ------------------------------------------------------
    py::class_<ProblemInstance>(m, "ProblemInstance")
        .def_property_readonly("kind",
                               [](const ProblemInstance &i) { return to_string(i.kind); })
        .def_readonly("n", &ProblemInstance::n)
        .def_readonly("table", &ProblemInstance::table)
        .def_readonly("answer", &ProblemInstance::answer)
        .def("__repr__", [](const ProblemInstance &i) {
            return "<ProblemInstance " + to_string(i.kind) + " n=" + std::to_string(i.n) +
                   " answer=" + std::to_string(i.answer) + ">";
        });

    m.def(
        "generate_instance",
        [](const std::string &kind, std::uint64_t n, std::uint64_t seed,
           std::optional<int> marked, std::optional<std::uint64_t> hamming_weight,
           std::optional<int> collision_k, std::optional<int> duplicate) {
            Rng rng(seed);
            return generate_instance(problem_from_string(kind), n,
                                     make_gen_params(marked, hamming_weight, collision_k,
                                                     duplicate),
                                     rng);
        },
        py::arg("kind"), py::arg("n"), py::arg("seed") = 1, py::arg("marked") = std::nullopt,
        py::arg("hamming_weight") = std::nullopt, py::arg("collision_k") = std::nullopt,
        py::arg("duplicate") = std::nullopt);
    m.def("brute_force_answer",
          [](const std::string &kind, std::uint64_t n, const std::vector<std::uint32_t> &table) {
              return brute_force_answer(problem_from_string(kind), n, table);
          });
    m.def("instance_to_json", &instance_to_json);
    m.def("instance_from_json", &instance_from_json);

    // ---- circuits and runs ------------------------------------------------------
    py::class_<StepCircuit>(m, "StepCircuit")
        .def_property_readonly("queries", [](const StepCircuit &c) { return count_queries(c); })
        .def_property_readonly("samples", [](const StepCircuit &c) { return count_samples(c); })
        .def_property_readonly("steps", [](const StepCircuit &c) { return c.steps.size(); });
    m.def("circuit_to_json", &circuit_to_json);
    m.def("circuit_from_json", &circuit_from_json);

    py::class_<MeasurementOutcome>(m, "MeasurementOutcome")
        .def_readonly("register_label", &MeasurementOutcome::register_label)
        .def_readonly("basis_index", &MeasurementOutcome::basis_index)
        .def_readonly("probability", &MeasurementOutcome::probability);

    py::class_<ReweightAudit>(m, "ReweightAudit")
        .def_readonly("step", &ReweightAudit::step)
        .def_readonly("stochastic_sum", &ReweightAudit::stochastic_sum)
        .def_readonly("max_deviation", &ReweightAudit::max_deviation);

    py::class_<RunTranscript>(m, "RunTranscript")
        .def_readonly("samples", &RunTranscript::samples)
        .def_readonly("collapses", &RunTranscript::collapses)
        .def_readonly("final_outcome", &RunTranscript::final_outcome)
        .def_readonly("queries_used", &RunTranscript::queries_used)
        .def_readonly("samples_used", &RunTranscript::samples_used)
        .def_readonly("copies_used", &RunTranscript::copies_used);

    py::class_<RunResult>(m, "RunResult")
        .def_readonly("transcript", &RunResult::transcript)
        .def_readonly("audits", &RunResult::audits);

    auto run_binding = [](RunResult (*runner)(const StepCircuit &, const ProblemInstance *,
                                              const RunOptions &, Rng &)) {
        return [runner](const StepCircuit &circuit, std::optional<ProblemInstance> instance,
                        std::uint64_t seed, bool final_measurement, bool audit_reweights,
                        bool force_unit_reweights) {
            Rng rng(seed);
            const RunOptions options =
                make_run_options(final_measurement, audit_reweights, force_unit_reweights);
            return runner(circuit, instance ? &*instance : nullptr, options, rng);
        };
    };
    m.def("run_direct", run_binding(&run_direct), py::arg("circuit"),
          py::arg("instance") = std::nullopt, py::arg("seed") = 1,
          py::arg("final_measurement") = false, py::arg("audit_reweights") = false,
          py::arg("force_unit_reweights") = false);
    m.def("run_purified", run_binding(&run_purified), py::arg("circuit"),
          py::arg("instance") = std::nullopt, py::arg("seed") = 1,
          py::arg("final_measurement") = false, py::arg("audit_reweights") = false,
          py::arg("force_unit_reweights") = false);
    m.def("run_cbqp", run_binding(&run_cbqp), py::arg("circuit"),
          py::arg("instance") = std::nullopt, py::arg("seed") = 1,
          py::arg("final_measurement") = true, py::arg("audit_reweights") = false,
          py::arg("force_unit_reweights") = false);

    // ---- algorithms ---------------------------------------------------------------
    py::class_<DecisionOutcome>(m, "DecisionOutcome")
        .def_readonly("answer", &DecisionOutcome::answer)
        .def_readonly("complete", &DecisionOutcome::complete);

    py::class_<AlgorithmSpec>(m, "AlgorithmSpec")
        .def_readonly("name", &AlgorithmSpec::name)
        .def_readonly("circuit", &AlgorithmSpec::circuit)
        .def_readonly("queries", &AlgorithmSpec::queries)
        .def_readonly("samples", &AlgorithmSpec::samples)
        .def("decide", [](const AlgorithmSpec &a, const RunTranscript &t,
                          const ProblemInstance &i) { return a.decide(t, i); });

    m.def("collision_algorithm", &collision_algorithm, py::arg("n"), py::arg("samples"));
    m.def("search_algorithm", &pdqp_search_algorithm, py::arg("n"), py::arg("c") = 1.0,
          py::arg("samples_override") = std::nullopt, py::arg("queries_override") = std::nullopt);
    m.def(
        "partition_algorithm",
        [](const std::string &kind, std::uint64_t n, double c, std::optional<int> samples) {
            return nonadaptive_partition_algorithm(problem_from_string(kind), n, c, samples);
        },
        py::arg("kind"), py::arg("n"), py::arg("c") = 3.0,
        py::arg("samples_override") = std::nullopt);

    // ---- experiments ----------------------------------------------------------------
    py::class_<ExperimentResult>(m, "ExperimentResult")
        .def_readonly("problem", &ExperimentResult::problem)
        .def_readonly("model", &ExperimentResult::model)
        .def_readonly("n", &ExperimentResult::n)
        .def_readonly("queries", &ExperimentResult::queries)
        .def_readonly("samples", &ExperimentResult::samples)
        .def_readonly("trials", &ExperimentResult::trials)
        .def_readonly("successes", &ExperimentResult::successes)
        .def_readonly("rate", &ExperimentResult::rate)
        .def_readonly("ci_lo", &ExperimentResult::ci_lo)
        .def_readonly("ci_hi", &ExperimentResult::ci_hi)
        .def_readonly("seed", &ExperimentResult::seed);

    m.def(
        "estimate_success",
        [](const std::string &problem, const std::string &model, std::uint64_t n, double c,
           std::optional<int> samples, int trials, std::uint64_t seed, int threads) {
            ExperimentSpec spec;
            spec.problem = problem_from_string(problem);
            spec.model = model;
            spec.n = n;
            spec.c = c;
            spec.samples_override = samples;
            spec.trials = trials;
            spec.seed = seed;
            spec.threads = threads;
            return estimate_success(spec);
        },
        py::arg("problem"), py::arg("model") = "pdqp", py::arg("n") = 8, py::arg("c") = 0.0,
        py::arg("samples") = std::nullopt, py::arg("trials") = 1000, py::arg("seed") = 1,
        py::arg("threads") = 1);

    py::class_<MinimalBudgetResult>(m, "MinimalBudgetResult")
        .def_readonly("samples", &MinimalBudgetResult::samples)
        .def_readonly("probes", &MinimalBudgetResult::probes);

    m.def(
        "minimal_budget",
        [](const std::string &problem, const std::string &model, std::uint64_t n, double c,
           int trials, std::uint64_t seed, double target, int cap) {
            ExperimentSpec spec;
            spec.problem = problem_from_string(problem);
            spec.model = model;
            spec.n = n;
            spec.c = c;
            spec.trials = trials;
            spec.seed = seed;
            return minimal_budget(spec, target, cap);
        },
        py::arg("problem"), py::arg("model") = "pdqp", py::arg("n") = 8, py::arg("c") = 0.0,
        py::arg("trials") = 1000, py::arg("seed") = 1, py::arg("target") = 2.0 / 3.0,
        py::arg("cap") = 4096);

    py::class_<PowerFit>(m, "PowerFit")
        .def_readonly("exponent", &PowerFit::exponent)
        .def_readonly("scale", &PowerFit::scale);
    m.def("fit_loglog", &fit_loglog);
    m.def("results_to_csv", &results_to_csv);
    m.def("results_to_json", &results_to_json);

    // ---- adversary bounds -------------------------------------------------------------
    py::class_<BoundReport>(m, "BoundReport")
        .def_property_readonly("v_x", [](const BoundReport &r) { return r.profile.v_x; })
        .def_property_readonly("v_y", [](const BoundReport &r) { return r.profile.v_y; })
        .def_property_readonly("v_max", [](const BoundReport &r) { return r.profile.v_max; })
        .def_readonly("epsilon", &BoundReport::epsilon)
        .def_readonly("product_lower", &BoundReport::product_lower)
        .def_readonly("nonadaptive_lower", &BoundReport::nonadaptive_lower)
        .def_readonly("additive_lower", &BoundReport::additive_lower)
        .def_readonly("copies_at_one_query", &BoundReport::copies_at_one_query);

    m.def(
        "compute_bounds",
        [](const std::string &problem, std::uint64_t n, double eps) {
            const RelationInstance rel = build_relation(problem_from_string(problem), n);
            return compute_bounds(rel, uniform_scheme(), eps);
        },
        py::arg("problem"), py::arg("n"), py::arg("eps") = 1.0 / 3.0);
    m.def("adversary_constant", &adversary_constant, py::arg("eps"));

    // ---- verification -----------------------------------------------------------------
    py::class_<SuiteResult>(m, "SuiteResult")
        .def_readonly("name", &SuiteResult::name)
        .def_readonly("checks", &SuiteResult::checks)
        .def_readonly("failures", &SuiteResult::failures)
        .def_readonly("worst", &SuiteResult::worst)
        .def_readonly("detail", &SuiteResult::detail);

    m.def(
        "verify",
        [](const std::vector<std::string> &suites, std::uint64_t seed, int circuits, int runs,
           int fault_runs, int cases, long long samples, int trials, int tuples,
           double tolerance) {
            VerifyOptions options;
            options.seed = seed;
            if (circuits > 0)
                options.equivalence_circuits = circuits;
            if (runs > 0)
                options.equivalence_runs = runs;
            if (fault_runs > 0)
                options.fault_runs = fault_runs;
            if (cases > 0)
                options.monotone_cases = cases;
            if (samples > 0)
                options.polynomial_samples = std::size_t(samples);
            if (trials > 0)
                options.collision_trials = trials;
            if (tuples > 0)
                options.lifted_tuples = tuples;
            if (tolerance > 0)
                options.equivalence_tolerance = tolerance;
            return verify_all(suites, options);
        },
        py::arg("suites"), py::arg("seed") = 9021, py::arg("circuits") = -1,
        py::arg("runs") = -1, py::arg("fault_runs") = -1, py::arg("cases") = -1,
        py::arg("samples") = -1, py::arg("trials") = -1, py::arg("tuples") = -1,
        py::arg("tolerance") = -1.0);
    m.def("all_suite_names", [] { return all_suite_names(); });
}
