// pdqpsim -- command line front end: success-rate experiments, adversary
// bounds, scaling sweeps, minimal sample budgets, and verification suites.
//
// Exit codes: 0 on success, 1 when a requested check or budget search fails,
// 2 on usage errors.
#include <CLI11.hpp>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <json.hpp>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "pdqp/bench.hpp"
#include "pdqp/errors.hpp"

namespace {

using nlohmann::ordered_json;

struct CommonArgs {
    std::string problem = "search";
    std::string model = "pdqp";
    std::vector<std::uint64_t> ns;
    double c = 0; // <= 0: per-problem default
    int q = -1;   // query budget override; < 0 keeps the circuit default
    int p = -1;   // sample budget override; < 0 keeps the formula default
    int trials = 1000;
    std::uint64_t seed = 1;
    int threads = 1;
    std::string out = "csv"; // csv | json
    std::string output;      // file path; empty writes to stdout
    std::string config;      // JSON file with the same keys as the flags
    // minimal-p only:
    double target = 2.0 / 3.0;
    int cap = 4096;
    bool fit = false;
};

struct VerifyArgs {
    std::vector<std::string> suites;
    std::uint64_t seed = 9021;
    int circuits = -1;
    int runs = -1;
    int fault_runs = -1;
    int cases = -1;
    long long samples = -1;
    int trials = -1;
    int tuples = -1;
    double tolerance = -1;
    std::string config;
};

// Fills flag targets from a JSON config file; explicitly passed flags win.
// Unknown keys are rejected so typos do not silently change an experiment.
void merge_config(const CLI::App *cmd, CommonArgs &a) {
    if (a.config.empty())
        return;
    std::ifstream in(a.config);
    if (!in)
        throw pdqp::InvalidParameters("cannot read config file: " + a.config);
    ordered_json j = ordered_json::parse(in);
    static const std::vector<std::string> known = {"problem", "model",  "n",      "c",
                                                   "q",       "p",      "trials", "seed",
                                                   "threads", "out",    "output", "target",
                                                   "cap"};
    for (const auto &item : j.items()) {
        if (std::find(known.begin(), known.end(), item.key()) == known.end())
            throw pdqp::InvalidParameters("unknown config key: " + item.key());
    }
    auto unset = [&](const std::string &flag) {
        const CLI::Option *opt = cmd->get_option_no_throw(flag);
        return opt != nullptr && opt->count() == 0;
    };
    if (j.contains("problem") && unset("--problem"))
        a.problem = j["problem"].get<std::string>();
    if (j.contains("model") && unset("--model"))
        a.model = j["model"].get<std::string>();
    if (j.contains("n") && unset("--n")) {
        a.ns.clear();
        if (j["n"].is_array())
            for (const auto &v : j["n"])
                a.ns.push_back(v.get<std::uint64_t>());
        else
            a.ns.push_back(j["n"].get<std::uint64_t>());
    }
    if (j.contains("c") && unset("--c"))
        a.c = j["c"].get<double>();
    if (j.contains("q") && unset("--q"))
        a.q = j["q"].get<int>();
    if (j.contains("p") && unset("--p"))
        a.p = j["p"].get<int>();
    if (j.contains("trials") && unset("--trials"))
        a.trials = j["trials"].get<int>();
    if (j.contains("seed") && unset("--seed"))
        a.seed = j["seed"].get<std::uint64_t>();
    if (j.contains("threads") && unset("--threads"))
        a.threads = j["threads"].get<int>();
    if (j.contains("out") && unset("--out"))
        a.out = j["out"].get<std::string>();
    if (j.contains("output") && unset("--output"))
        a.output = j["output"].get<std::string>();
    if (j.contains("target") && unset("--target"))
        a.target = j["target"].get<double>();
    if (j.contains("cap") && unset("--cap"))
        a.cap = j["cap"].get<int>();
}

void write_text(const std::string &path, const std::string &text) {
    if (path.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw pdqp::InvalidParameters("cannot open output file: " + path);
    out << text;
}

pdqp::ExperimentSpec make_spec(const CommonArgs &a, std::uint64_t n) {
    pdqp::ExperimentSpec spec;
    spec.problem = pdqp::problem_from_string(a.problem);
    spec.model = a.model;
    spec.n = n;
    spec.c = a.c;
    if (a.q >= 0)
        spec.queries_override = a.q;
    if (a.p >= 0)
        spec.samples_override = a.p;
    spec.trials = a.trials;
    spec.seed = a.seed;
    spec.threads = a.threads;
    return spec;
}

std::vector<std::uint64_t> grid_of(const CommonArgs &a) {
    return a.ns.empty() ? std::vector<std::uint64_t>{8} : a.ns;
}

int do_run(const CLI::App *cmd, CommonArgs a, bool with_fit) {
    merge_config(cmd, a);
    std::vector<pdqp::ExperimentResult> rows;
    for (std::uint64_t n : grid_of(a))
        rows.push_back(pdqp::estimate_success(make_spec(a, n)));
    if (a.out == "csv") {
        write_text(a.output, pdqp::results_to_csv(rows));
        if (with_fit && a.fit && rows.size() >= 2)
            std::cerr << "fit: csv output omits the fit block; use --out json\n";
    } else if (a.out == "json") {
        ordered_json doc;
        doc["rows"] = ordered_json::parse(pdqp::results_to_json(rows));
        if (with_fit && a.fit && rows.size() >= 2) {
            std::vector<double> xs, ys;
            for (const auto &r : rows) {
                xs.push_back(double(r.n));
                ys.push_back(double(r.queries + r.samples));
            }
            const pdqp::PowerFit fit = pdqp::fit_loglog(xs, ys);
            doc["budget_fit"] = {{"exponent", fit.exponent}, {"scale", fit.scale}};
        }
        write_text(a.output, doc.dump(2) + "\n");
    } else {
        throw pdqp::InvalidParameters("unknown output format: " + a.out);
    }
    return 0;
}

int do_bound(const CLI::App *cmd, CommonArgs a, double eps) {
    merge_config(cmd, a);
    const pdqp::ProblemKind kind = pdqp::problem_from_string(a.problem);
    ordered_json arr = ordered_json::array();
    std::string csv = "problem,N,epsilon,v_x,v_y,v_max,product_lower,nonadaptive_lower,"
                      "additive_lower,copies_at_one_query\n";
    for (std::uint64_t n : grid_of(a)) {
        const pdqp::RelationInstance rel = pdqp::build_relation(kind, n);
        const pdqp::BoundReport rep = pdqp::compute_bounds(rel, pdqp::uniform_scheme(), eps);
        arr.push_back(ordered_json::parse(pdqp::bound_report_to_json(kind, n, rep)));
        std::ostringstream line;
        line << pdqp::to_string(kind) << ',' << n << ',' << std::fixed << std::setprecision(6)
             << rep.epsilon << ',' << rep.profile.v_x << ',' << rep.profile.v_y << ','
             << rep.profile.v_max << ',' << rep.product_lower << ',' << rep.nonadaptive_lower
             << ',' << rep.additive_lower << ',' << rep.copies_at_one_query << '\n';
        csv += line.str();
    }
    if (a.out == "json")
        write_text(a.output, arr.dump(2) + "\n");
    else if (a.out == "csv")
        write_text(a.output, csv);
    else
        throw pdqp::InvalidParameters("unknown output format: " + a.out);
    return 0;
}

int do_minimal_p(const CLI::App *cmd, CommonArgs a) {
    merge_config(cmd, a);
    ordered_json rows = ordered_json::array();
    std::vector<pdqp::ExperimentResult> accepted;
    std::vector<double> xs, ps, budgets;
    for (std::uint64_t n : grid_of(a)) {
        pdqp::ExperimentSpec base = make_spec(a, n);
        base.samples_override.reset(); // the search owns the budget
        const pdqp::MinimalBudgetResult mb = pdqp::minimal_budget(base, a.target, a.cap);
        const pdqp::ExperimentResult *final_probe = nullptr;
        for (const auto &probe : mb.probes)
            if (probe.samples == mb.samples)
                final_probe = &probe;
        if (final_probe == nullptr)
            throw pdqp::Error("budget search returned no matching probe");
        accepted.push_back(*final_probe);
        rows.push_back({{"N", n},
                        {"Q", final_probe->queries},
                        {"P_star", mb.samples},
                        {"rate", final_probe->rate},
                        {"probes", mb.probes.size()}});
        xs.push_back(double(n));
        ps.push_back(double(mb.samples));
        budgets.push_back(double(final_probe->queries + mb.samples));
    }
    if (a.out == "csv") {
        write_text(a.output, pdqp::results_to_csv(accepted));
        if (a.fit)
            std::cerr << "fit: csv output omits the fit block; use --out json\n";
    } else if (a.out == "json") {
        ordered_json doc;
        doc["target"] = a.target;
        doc["rows"] = rows;
        if (a.fit && xs.size() >= 2) {
            const pdqp::PowerFit pf = pdqp::fit_loglog(xs, ps);
            const pdqp::PowerFit bf = pdqp::fit_loglog(xs, budgets);
            doc["p_fit"] = {{"exponent", pf.exponent}, {"scale", pf.scale}};
            doc["budget_fit"] = {{"exponent", bf.exponent}, {"scale", bf.scale}};
        }
        write_text(a.output, doc.dump(2) + "\n");
    } else {
        throw pdqp::InvalidParameters("unknown output format: " + a.out);
    }
    return 0;
}

int do_verify(const VerifyArgs &a) {
    pdqp::VerifyOptions options;
    options.seed = a.seed;
    if (a.circuits > 0)
        options.equivalence_circuits = a.circuits;
    if (a.runs > 0)
        options.equivalence_runs = a.runs;
    if (a.fault_runs > 0)
        options.fault_runs = a.fault_runs;
    if (a.cases > 0)
        options.monotone_cases = a.cases;
    if (a.samples > 0)
        options.polynomial_samples = std::size_t(a.samples);
    if (a.trials > 0)
        options.collision_trials = a.trials;
    if (a.tuples > 0)
        options.lifted_tuples = a.tuples;
    if (a.tolerance > 0)
        options.equivalence_tolerance = a.tolerance;

    const std::vector<std::string> suites = a.suites.empty() ? pdqp::all_suite_names() : a.suites;
    const std::vector<pdqp::SuiteResult> results = pdqp::verify_all(suites, options);
    int failed = 0;
    for (const pdqp::SuiteResult &r : results) {
        const bool ok = r.failures == 0;
        failed += ok ? 0 : 1;
        std::cout << (ok ? "PASS " : "FAIL ") << r.name << " (checks=" << r.checks
                  << ", failures=" << r.failures << "): " << r.detail << "\n";
    }
    return failed == 0 ? 0 : 1;
}

void add_common_flags(CLI::App *cmd, CommonArgs &a, bool budget_flags, bool fit_flag) {
    cmd->add_option("--problem", a.problem,
                    "search | majority | parity | collision | element-distinctness");
    cmd->add_option("--model", a.model, "pdqp (adaptive) or pdqp-naq (one query round)");
    cmd->add_option("--n", a.ns, "input size; repeat for a grid");
    cmd->add_option("--c", a.c, "scaling constant (<= 0 keeps the per-problem default)");
    cmd->add_option("--q", a.q, "query budget override (free for search; fixed elsewhere)");
    cmd->add_option("--p", a.p, "sample budget override (>= 0)");
    cmd->add_option("--trials", a.trials, "trials per configuration");
    cmd->add_option("--seed", a.seed, "experiment seed");
    cmd->add_option("--threads", a.threads, "worker threads (results are identical)");
    cmd->add_option("--out", a.out, "output format: csv or json");
    cmd->add_option("--output", a.output, "output file (default stdout)");
    cmd->add_option("--config", a.config, "JSON config file; explicit flags override it");
    if (budget_flags) {
        cmd->add_option("--target", a.target, "target success rate in (0, 1)");
        cmd->add_option("--cap", a.cap, "largest sample budget to try");
    }
    if (fit_flag)
        cmd->add_flag("--fit", a.fit, "fit a power law across the n grid (json output)");
}

} // namespace

int main(int argc, char **argv) {
    CLI::App app{"simulator and analysis toolkit for quantum query algorithms with "
                 "non-collapsing samples"};
    app.require_subcommand(1);

    CommonArgs run_args;
    CLI::App *run_cmd = app.add_subcommand("run", "measure success rates on an n grid");
    add_common_flags(run_cmd, run_args, false, false);

    CommonArgs sweep_args;
    CLI::App *sweep_cmd =
        app.add_subcommand("sweep", "success-rate grid plus an optional budget power-law fit");
    add_common_flags(sweep_cmd, sweep_args, false, true);

    CommonArgs bound_args;
    double bound_eps = 1.0 / 3.0;
    CLI::App *bound_cmd =
        app.add_subcommand("bound", "adversary lower bounds for a problem on an n grid");
    add_common_flags(bound_cmd, bound_args, false, false);
    bound_cmd->add_option("--eps", bound_eps, "allowed two-sided error (default 1/3)");

    CommonArgs min_args;
    CLI::App *min_cmd = app.add_subcommand(
        "minimal-p", "smallest sample budget reaching the target rate, per n");
    add_common_flags(min_cmd, min_args, true, true);

    VerifyArgs verify_args;
    CLI::App *verify_cmd = app.add_subcommand("verify", "run the numerical verification suites");
    verify_cmd->add_option("--suite", verify_args.suites,
                           "suite name; repeatable (default: all suites)");
    verify_cmd->add_option("--seed", verify_args.seed, "verification seed");
    verify_cmd->add_option("--circuits", verify_args.circuits, "equivalence: circuits");
    verify_cmd->add_option("--runs", verify_args.runs, "equivalence: runs per executor");
    verify_cmd->add_option("--fault-runs", verify_args.fault_runs, "fault suite: runs");
    verify_cmd->add_option("--cases", verify_args.cases, "monotone: random cases");
    verify_cmd->add_option("--samples", verify_args.samples, "polynomial: sample count");
    verify_cmd->add_option("--trials", verify_args.trials, "collision-error: trials per cell");
    verify_cmd->add_option("--tuples", verify_args.tuples, "lifted: sampled tuples");
    verify_cmd->add_option("--tolerance", verify_args.tolerance, "equivalence: TV tolerance");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError &e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (run_cmd->parsed())
            return do_run(run_cmd, run_args, false);
        if (sweep_cmd->parsed())
            return do_run(sweep_cmd, sweep_args, true);
        if (bound_cmd->parsed())
            return do_bound(bound_cmd, bound_args, bound_eps);
        if (min_cmd->parsed())
            return do_minimal_p(min_cmd, min_args);
        if (verify_cmd->parsed())
            return do_verify(verify_args);
    } catch (const pdqp::InvalidParameters &e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return 2;
    } catch (const pdqp::InvalidScheme &e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return 2;
    } catch (const pdqp::NotPerfectSquare &e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception &e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 2;
}
