// Unit tests for problem generation, ground truth, and the oracle gates.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <json.hpp>
#include <map>

#include "pdqp/gates.hpp"
#include "pdqp/oracle.hpp"

using namespace pdqp;

TEST_CASE("majority ground truth uses the strict threshold") {
    CHECK(brute_force_answer(ProblemKind::Majority, 4, {1, 1, 0, 0}) == 0); // tie -> 0
    CHECK(brute_force_answer(ProblemKind::Majority, 4, {1, 1, 1, 0}) == 1);
    CHECK(brute_force_answer(ProblemKind::Majority, 4, {0, 0, 0, 0}) == 0);
    CHECK(brute_force_answer(ProblemKind::Majority, 4, {1, 1, 1, 1}) == 1);
}

TEST_CASE("parity, search, and element-distinctness ground truth") {
    CHECK(brute_force_answer(ProblemKind::Parity, 4, {1, 0, 1, 1}) == 1);
    CHECK(brute_force_answer(ProblemKind::Parity, 4, {1, 0, 1, 0}) == 0);
    CHECK(brute_force_answer(ProblemKind::Search, 4, {0, 0, 0, 0}) == 0);
    CHECK(brute_force_answer(ProblemKind::Search, 4, {0, 0, 1, 0}) == 1);
    // Element distinctness answers 1 exactly when a duplicate exists.
    CHECK(brute_force_answer(ProblemKind::ElementDistinctness, 4, {3, 1, 0, 2}) == 0);
    CHECK(brute_force_answer(ProblemKind::ElementDistinctness, 4, {3, 1, 3, 2}) == 1);
}

TEST_CASE("collision arity detection and malformed-table rejection") {
    CHECK(brute_force_answer(ProblemKind::Collision, 4, {2, 0, 3, 1}) == 1);
    CHECK(brute_force_answer(ProblemKind::Collision, 4, {2, 2, 1, 1}) == 2);
    CHECK(brute_force_answer(ProblemKind::Collision, 3, {0, 1, 2}) == 1); // odd but injective
    // Neither 1-to-1 nor 2-to-1.
    CHECK_THROWS_AS(brute_force_answer(ProblemKind::Collision, 4, {0, 0, 0, 1}),
                    InvalidParameters);
}

TEST_CASE("generators honor their controls and self-report correct answers") {
    Rng rng(3);
    GenParams p;
    p.marked = 2;
    ProblemInstance s = generate_instance(ProblemKind::Search, 8, p, rng);
    CHECK(std::count(s.table.begin(), s.table.end(), 1u) == 2);
    CHECK(s.answer == 1);

    GenParams pm;
    pm.hamming_weight = 5;
    ProblemInstance m = generate_instance(ProblemKind::Majority, 8, pm, rng);
    CHECK(std::count(m.table.begin(), m.table.end(), 1u) == 5);
    CHECK(m.answer == 1);

    GenParams pc;
    pc.collision_k = 2;
    ProblemInstance c = generate_instance(ProblemKind::Collision, 8, pc, rng);
    std::map<std::uint32_t, int> hist;
    for (auto v : c.table) hist[v] += 1;
    for (const auto &kv : hist) CHECK(kv.second == 2);
    CHECK(c.answer == 2);

    GenParams pe;
    pe.duplicate = 0;
    ProblemInstance e = generate_instance(ProblemKind::ElementDistinctness, 8, pe, rng);
    CHECK(e.answer == 0); // all distinct -> no duplicate found
    pe.duplicate = 1;
    ProblemInstance e2 = generate_instance(ProblemKind::ElementDistinctness, 8, pe, rng);
    CHECK(e2.answer == 1);

    for (int i = 0; i < 20; ++i) {
        ProblemInstance any = generate_instance(ProblemKind::Majority, 16, {}, rng);
        CHECK(any.answer == brute_force_answer(any.kind, any.n, any.table));
    }
}

TEST_CASE("phase oracle flips exactly the marked components") {
    RegisterLayout l({{"i", 2}, {"b", 1}});
    ProblemInstance inst{ProblemKind::Search, 4, {0, 1, 0, 1}, 1};

    QuantumState s{l};
    s = apply_unitary(s, uniform_prep_matrix(4, 2), "i");
    s = apply_unitary(s, gate_matrix("x"), "b");
    QuantumState q = apply_phase_oracle(s, inst, "i", "b");
    for (std::size_t i = 0; i < 4; ++i) {
        const double sign = inst.table[i] ? -1.0 : 1.0;
        CHECK(std::abs(q.amp(4 + i) - sign * s.amp(4 + i)) < 1e-12);
    }
    // With the bit register in |0> the oracle acts as the identity (up to the
    // sign of zero amplitudes, so compare values rather than digests).
    QuantumState s0{l};
    s0 = apply_unitary(s0, uniform_prep_matrix(4, 2), "i");
    QuantumState q0 = apply_phase_oracle(s0, inst, "i", "b");
    for (std::size_t k = 0; k < 8; ++k)
        CHECK(q0.amp(k) == s0.amp(k));
}

TEST_CASE("xor oracle writes f(i) and is an involution") {
    RegisterLayout l({{"i", 2}, {"v", 2}});
    ProblemInstance inst{ProblemKind::Collision, 4, {2, 2, 1, 1}, 2};
    QuantumState s{l};
    s = apply_unitary(s, uniform_prep_matrix(4, 2), "i");
    QuantumState once = apply_xor_oracle(s, inst, "i", "v");
    for (std::size_t i = 0; i < 4; ++i) {
        const std::size_t idx = i + 4 * inst.table[i];
        CHECK(std::abs(once.amp(idx) - cdouble(0.5, 0)) < 1e-12);
    }
    QuantumState twice = apply_xor_oracle(once, inst, "i", "v");
    CHECK(fidelity(twice, s) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("parallel oracles touch every listed pair and cost one query each") {
    RegisterLayout l({{"i0", 1}, {"b0", 1}, {"i1", 1}, {"b1", 1}});
    // Two one-qubit blocks over the table {1, 0}: block 0 reads index 0, block
    // 1 reads index 1 (identity layout for a 2-entry table).
    ProblemInstance inst{ProblemKind::Search, 2, {1, 0}, 1};
    OracleSpec spec{OracleKind::ParallelPhase, {{"i0", "b0"}, {"i1", "b1"}}};
    CHECK(query_cost(spec) == 2);
    CHECK(query_cost(OracleSpec{OracleKind::Phase, {{"i0", "b0"}}}) == 1);

    QuantumState s{l};
    for (const char *b : {"b0", "b1"})
        s = apply_unitary(s, gate_matrix("x"), b);
    // i0 = 0 hits table[0] = 1 -> sign flip; i1 = 0 hits table[0] too.
    QuantumState q = apply_oracle(s, inst, spec);
    // index 0b1010: b0 = 1, b1 = 1, i0 = i1 = 0 -> two flips -> net +.
    CHECK(std::abs(q.amp(0b1010) - s.amp(0b1010)) < 1e-12);

    // One flipped index register: exactly one sign flip.
    QuantumState t{l};
    t = apply_unitary(t, gate_matrix("x"), "b0");
    t = apply_unitary(t, gate_matrix("x"), "b1");
    t = apply_unitary(t, gate_matrix("x"), "i1");
    QuantumState qt = apply_oracle(t, inst, spec);
    CHECK(std::abs(qt.amp(0b1110) + t.amp(0b1110)) < 1e-12);
}

TEST_CASE("instance JSON round trip is stable and validates the answer") {
    Rng rng(9);
    ProblemInstance inst = generate_instance(ProblemKind::Collision, 8, {}, rng);
    const std::string text = instance_to_json(inst);
    ProblemInstance back = instance_from_json(text);
    CHECK(back.kind == inst.kind);
    CHECK(back.n == inst.n);
    CHECK(back.table == inst.table);
    CHECK(back.answer == inst.answer);
    CHECK(instance_to_json(back) == text);

    // A tampered answer is rejected on load.
    nlohmann::ordered_json doc = nlohmann::ordered_json::parse(text);
    doc["answer"] = 3 - inst.answer; // 1 <-> 2
    CHECK_THROWS_AS(instance_from_json(doc.dump()), InvalidParameters);
}

TEST_CASE("problem and oracle names round trip") {
    for (ProblemKind k : {ProblemKind::Search, ProblemKind::Majority, ProblemKind::Parity,
                          ProblemKind::Collision, ProblemKind::ElementDistinctness})
        CHECK(problem_from_string(to_string(k)) == k);
    CHECK_THROWS_AS(problem_from_string("sudoku"), InvalidParameters);
    for (OracleKind k : {OracleKind::Phase, OracleKind::XorValue, OracleKind::ParallelPhase,
                         OracleKind::ParallelXor})
        CHECK(oracle_from_string(to_string(k)) == k);
}
