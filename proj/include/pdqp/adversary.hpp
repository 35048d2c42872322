// adversary.hpp -- hardness side: boundary relations between accepting and
// rejecting inputs, weight schemes and their load profiles, the query lower
// bounds they imply, and the numerical verifiers behind those bounds.
#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "pdqp/oracle.hpp"
#include "pdqp/rng.hpp"

namespace pdqp {

// One related pair: indices into xs/ys plus the positions where the tables differ.
struct RelatedPair {
    std::size_t x = 0;
    std::size_t y = 0;
    std::vector<std::uint64_t> diff;
};

// A relation between inputs with answer A (xs) and answer B (ys). The
// per-side degree constants describe its structure: every x relates to
// `degree_x` ys and vice versa, and at most `overlap_x` related ys differ
// from a given x at any fixed position (resp. overlap_y).
struct RelationInstance {
    ProblemKind kind = ProblemKind::Search;
    std::uint64_t n = 0;
    std::vector<std::vector<std::uint32_t>> xs;
    std::vector<std::vector<std::uint32_t>> ys;
    std::vector<RelatedPair> pairs;
    double degree_x = 0, degree_y = 0;   // m, m'
    double overlap_x = 0, overlap_y = 0; // l, l'
    bool exhaustive = false; // xs/ys/pairs list the whole relation
};

enum class BuildPolicy { Auto, Exhaustive, Sampled };

// Boundary relations: search pairs the all-zero table with each singleton;
// majority pairs weight n/2 with weight n/2+1 (one bit raised); parity pairs
// tables across one flipped bit; element distinctness pairs each permutation
// with the near-permutations obtained by bumping one entry to its successor
// value (mod n). Auto enumerates exhaustively while |xs|+|ys|+|pairs| fits
// the budget (permutation inputs: n <= 6) and otherwise samples
// `sample_pairs` representative pairs; degrees are structural either way.
RelationInstance build_relation(ProblemKind kind, std::uint64_t n,
                                BuildPolicy policy = BuildPolicy::Auto,
                                std::size_t budget = 200000, std::size_t sample_pairs = 2000,
                                std::uint64_t seed = 7);

// w assigns a nonnegative weight to each related pair; wp("w-prime") assigns
// the side-specific position weights. Validity requires
// wp(x-side) * wp(y-side) >= w^2 at every differing position of every pair.
struct WeightScheme {
    std::string name;
    std::function<double(const RelationInstance &, const RelatedPair &)> w;
    std::function<double(const RelationInstance &, const RelatedPair &, std::uint64_t i,
                         bool x_side)>
        wp;
};

WeightScheme uniform_scheme();

// Throws InvalidScheme on negative weights or a validity violation.
void validate_weight_scheme(const RelationInstance &rel, const WeightScheme &scheme);

// v_x = max over (x, i) of v(x, i) / wt(x), where wt(x) sums w over the
// related ys and v(x, i) sums wp over the related ys differing at i; v_y is
// the mirror image and v_max their geometric mean. Custom schemes need an
// exhaustive relation; sampled relations fall back to the structural degrees
// (valid for the uniform scheme, where v_x = overlap_x / degree_x).
struct LoadProfile {
    double v_x = 0, v_y = 0, v_max = 0;
};
LoadProfile load_profile(const RelationInstance &rel, const WeightScheme &scheme);

// sqrt((1 - 2 sqrt(eps (1 - eps))) / 2): the success-gap constant in the bounds.
double adversary_constant(double eps);

// Lower bounds implied by the load profile for algorithms that err with
// probability at most eps on both sides:
//   * adaptive model:     queries * samples   >= C / v_max
//   * one-round model:    queries * samples   >= C^2 * max(1/v_x, 1/v_y)
//   * additive form:      queries + samples   >= 2 sqrt(C / v_max)
//   * copy model:         queries * 2^copies  >= C / v_max
struct BoundReport {
    LoadProfile profile;
    double epsilon = 0;
    double product_lower = 0;
    double nonadaptive_lower = 0;
    double additive_lower = 0;
    double copies_at_one_query = 0; // log2(C / v_max): copies needed when queries = 1
};
BoundReport compute_bounds(const RelationInstance &rel, const WeightScheme &scheme,
                           double eps = 1.0 / 3.0);

// ---- numerical verifiers -------------------------------------------------------

// Progress measure of amplitude-amplification search against the search
// boundary relation: phi(t) = sum over pairs of w * |<psi_t^x | psi_t^y>|,
// evaluated after t queries (states tracked by an independent dense walk, not
// the circuit engine). Returns phi(0..t_max).
std::vector<double> progress_trace(std::uint64_t n, int t_max);

// Per-query progress accounting for the same walk. At each t:
//   drop     = phi(t) - phi(t+1)
//   overlap2 = 2 * sum over pairs, over differing positions i, of
//              sqrt(wp_x wp_y) |<psi_t^x| P_i |psi_t^y>|
//   cap      = 2 * v_max * phi(0)
// The verified chain is drop <= overlap2 <= cap. (The factor 2 in the cap is
// necessary: at n = 8, t = 1 the overlap term exceeds v_max * phi(0).)
struct WeightIdentityCheck {
    int t = 0;
    double phi = 0, phi_next = 0, drop = 0, overlap2 = 0, cap = 0;
};
std::vector<WeightIdentityCheck> verify_weight_identity(std::uint64_t n, int t_max);

// ks >= r^k - (r-s)^k for integer k in [1, 64], r in [0, 1], s in [0, 2r].
// Returns the largest observed violation (positive means the inequality failed).
double verify_polynomial_inequality(std::size_t samples, Rng &rng);

// Hybrid argument: sum over the n single-marked tables x of
// ||psi_t - psi_t^x||^2 after t queries, against the cap 4 t^2.
struct HybridPoint {
    int t = 0;
    double lhs = 0, rhs = 0;
};
std::vector<HybridPoint> verify_hybrid_bound(std::uint64_t n, int t_max);

// Lifting a scheme to parallel position tuples I = (i_1 .. i_k), where the
// lifted position weight at I is wp at the first i_j whose entries differ:
// checks scheme validity on the lifted pairs and the load inequality
//   WT(x) / V(x, I) >= (1/k) * min_j wt(x) / v(x, i_j)
// over sampled (x, I) when tuples > 0, or over every (x, I) with I in [n]^k
// when tuples <= 0. worst_margin is the smallest slack seen (nonnegative
// means every check passed); requires an exhaustive relation.
struct LiftedReport {
    int k = 0;
    int checks = 0;
    double worst_margin = 0;
    bool valid = false;
};
LiftedReport verify_lifted_weights(const RelationInstance &rel, const WeightScheme &scheme, int k,
                                   int tuples, Rng &rng);

} // namespace pdqp
