// Unit tests for the algorithm builders and their decision rules.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "pdqp/algorithms.hpp"

using namespace pdqp;

namespace {

// Success rate of an algorithm over freshly generated instances.
double success_rate(const AlgorithmSpec &algo, ProblemKind kind, std::uint64_t n,
                    const GenParams &params, int trials, std::uint64_t seed) {
    const RunOptions options;
    int good = 0;
    for (int t = 0; t < trials; ++t) {
        Rng rng = Rng(seed).derive(0xA16ULL, n, std::uint64_t(t));
        const ProblemInstance inst = generate_instance(kind, n, params, rng);
        const RunResult run = run_direct(algo.circuit, &inst, options, rng);
        const DecisionOutcome out = algo.decide(run.transcript, inst);
        good += (out.complete && out.answer == inst.answer) ? 1 : 0;
    }
    return double(good) / trials;
}

} // namespace

TEST_CASE("collision circuit shape: one query, P samples") {
    const AlgorithmSpec algo = collision_algorithm(8, 4);
    CHECK(algo.queries == 1);
    CHECK(algo.samples == 4);
    const ComplexityAccount acct = account_complexity(algo);
    CHECK(acct.queries == 1);
    CHECK(acct.samples == 4);
    CHECK(algo.circuit.declared_queries == 1);
    CHECK(algo.circuit.declared_samples == 4);
    CHECK(count_queries(algo.circuit) == 1);
}

TEST_CASE("collision samples stay inside one preimage pair") {
    const AlgorithmSpec algo = collision_algorithm(8, 6);
    GenParams p;
    p.collision_k = 2;
    const RunOptions options;
    for (int t = 0; t < 50; ++t) {
        Rng rng = Rng(77).derive(1, 0, std::uint64_t(t));
        const ProblemInstance inst = generate_instance(ProblemKind::Collision, 8, p, rng);
        const RunResult run = run_direct(algo.circuit, &inst, options, rng);
        CHECK(run.transcript.queries_used == 1);
        REQUIRE(run.transcript.collapses.size() == 1);
        const std::uint64_t value = run.transcript.collapses[0].basis_index;
        for (const auto &step : run.transcript.samples) {
            REQUIRE(step.size() == 1);
            CHECK(inst.table[step[0]] == value);
        }
    }
}

TEST_CASE("collision error on 2-to-1 inputs tracks 2^{1-P}") {
    const AlgorithmSpec algo = collision_algorithm(8, 3);
    GenParams p;
    p.collision_k = 2;
    const int trials = 2000;
    const double rate = success_rate(algo, ProblemKind::Collision, 8, p, trials, 5);
    const double want = 1.0 - std::pow(2.0, 1.0 - 3.0); // 0.75
    const double sigma = std::sqrt(want * (1 - want) / trials);
    CHECK(std::abs(rate - want) < 4 * sigma + 1e-12);
}

TEST_CASE("collision never errs on 1-to-1 inputs") {
    const AlgorithmSpec algo = collision_algorithm(8, 2);
    GenParams p;
    p.collision_k = 1;
    CHECK(success_rate(algo, ProblemKind::Collision, 8, p, 500, 6) == doctest::Approx(1.0));
}

TEST_CASE("amplified search succeeds with the default budgets") {
    GenParams p;
    p.marked = 1;
    const AlgorithmSpec a8 = pdqp_search_algorithm(8);
    CHECK(a8.queries == 2);
    CHECK(success_rate(a8, ProblemKind::Search, 8, p, 500, 7) >= 0.97);

    const AlgorithmSpec a27 = pdqp_search_algorithm(27);
    CHECK(a27.queries == 3);
    CHECK(success_rate(a27, ProblemKind::Search, 27, p, 300, 8) >= 0.97);
}

TEST_CASE("search respects query and sample overrides") {
    const AlgorithmSpec algo = pdqp_search_algorithm(8, 1.0, 9, 5);
    CHECK(algo.queries == 5);
    CHECK(algo.samples == 9);
    CHECK(algo.circuit.declared_queries == 5);
    CHECK(algo.circuit.declared_samples == 9);
    CHECK_THROWS_AS(pdqp_search_algorithm(8, 1.0, std::nullopt, 0), InvalidParameters);
    CHECK_THROWS_AS(pdqp_search_algorithm(8, 0.0), InvalidParameters);
    CHECK_THROWS_AS(pdqp_search_algorithm(1), InvalidParameters);
}

TEST_CASE("one-round circuits decide search, parity, and distinctness at n=16") {
    GenParams none;
    const AlgorithmSpec search = nonadaptive_partition_algorithm(ProblemKind::Search, 16);
    CHECK(search.queries == 4);
    GenParams marked;
    marked.marked = 1;
    CHECK(success_rate(search, ProblemKind::Search, 16, marked, 400, 9) >= 0.75);

    const AlgorithmSpec parity = nonadaptive_partition_algorithm(ProblemKind::Parity, 16);
    CHECK(success_rate(parity, ProblemKind::Parity, 16, none, 300, 10) >= 0.95);

    const AlgorithmSpec ed =
        nonadaptive_partition_algorithm(ProblemKind::ElementDistinctness, 16);
    CHECK(success_rate(ed, ProblemKind::ElementDistinctness, 16, none, 300, 11) >= 0.95);

    const AlgorithmSpec majority = nonadaptive_partition_algorithm(ProblemKind::Majority, 16);
    CHECK(success_rate(majority, ProblemKind::Majority, 16, none, 300, 12) >= 0.95);
}

TEST_CASE("the one-round builder validates its domain shape") {
    CHECK_THROWS_AS(nonadaptive_partition_algorithm(ProblemKind::Search, 12), NotPerfectSquare);
    CHECK_THROWS_AS(nonadaptive_partition_algorithm(ProblemKind::Search, 36), InvalidParameters);
    CHECK_THROWS_AS(nonadaptive_partition_algorithm(ProblemKind::Collision, 16),
                    InvalidParameters);
}

TEST_CASE("declared budgets line up with the steps for every builder") {
    for (const AlgorithmSpec &algo :
         {collision_algorithm(16, 5), pdqp_search_algorithm(16),
          nonadaptive_partition_algorithm(ProblemKind::Majority, 16)}) {
        CHECK(count_queries(algo.circuit) == algo.queries);
        CHECK(count_samples(algo.circuit) == algo.samples);
        CHECK(algo.circuit.validated);
    }
}
