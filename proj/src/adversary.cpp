// adversary.cpp -- boundary relations, weight-scheme machinery, lower bounds,
// and the dense-walk verifiers for the progress and hybrid arguments.
#include "pdqp/adversary.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <map>
#include <numeric>
#include <unordered_map>

#include "pdqp/errors.hpp"

namespace pdqp {

namespace {

double binomial(std::uint64_t n, std::uint64_t k) {
    if (k > n) return 0.0;
    double r = 1.0;
    for (std::uint64_t j = 1; j <= k; ++j) r = r * double(n - k + j) / double(j);
    return r;
}

std::vector<std::uint32_t> singleton_table(std::uint64_t n, std::uint64_t i) {
    std::vector<std::uint32_t> t(n, 0u);
    t[i] = 1u;
    return t;
}

std::vector<std::uint32_t> mask_table(std::uint64_t n, std::uint64_t mask) {
    std::vector<std::uint32_t> t(n, 0u);
    for (std::uint64_t i = 0; i < n; ++i) t[i] = (mask >> i) & 1ull;
    return t;
}

std::vector<std::uint32_t> random_weight_table(std::uint64_t n, std::uint64_t weight, Rng &rng) {
    std::vector<std::uint32_t> t(n, 0u);
    std::fill(t.begin(), t.begin() + static_cast<std::ptrdiff_t>(weight), 1u);
    rng.shuffle(t);
    return t;
}

std::vector<std::uint32_t> random_perm_table(std::uint64_t n, Rng &rng) {
    std::vector<std::uint32_t> t(n);
    std::iota(t.begin(), t.end(), 0u);
    rng.shuffle(t);
    return t;
}

using TableIndex = std::map<std::vector<std::uint32_t>, std::size_t>;

std::size_t intern(std::vector<std::vector<std::uint32_t>> &store, TableIndex &index,
                   std::vector<std::uint32_t> table) {
    auto it = index.find(table);
    if (it != index.end()) return it->second;
    store.push_back(table);
    index.emplace(std::move(table), store.size() - 1);
    return store.size() - 1;
}

} // namespace

RelationInstance build_relation(ProblemKind kind, std::uint64_t n, BuildPolicy policy,
                                std::size_t budget, std::size_t sample_pairs,
                                std::uint64_t seed) {
    if (n < 2) throw InvalidParameters("relations need n >= 2");
    RelationInstance rel;
    rel.kind = kind;
    rel.n = n;

    // Structural degrees (m, m', l, l') per relation.
    switch (kind) {
    case ProblemKind::Search:
        rel.degree_x = double(n);
        rel.degree_y = 1;
        rel.overlap_x = 1;
        rel.overlap_y = 1;
        break;
    case ProblemKind::Majority:
        if (n % 2 != 0) throw InvalidParameters("the majority boundary relation needs even n");
        rel.degree_x = double(n) / 2;
        rel.degree_y = double(n) / 2 + 1;
        rel.overlap_x = 1;
        rel.overlap_y = 1;
        break;
    case ProblemKind::Parity:
        rel.degree_x = double(n);
        rel.degree_y = double(n);
        rel.overlap_x = 1;
        rel.overlap_y = 1;
        break;
    case ProblemKind::ElementDistinctness:
        rel.degree_x = double(n);
        rel.degree_y = 2;
        rel.overlap_x = 1;
        rel.overlap_y = 1;
        break;
    case ProblemKind::Collision:
        throw InvalidParameters("no boundary relation is defined for collision");
    }

    // Estimated exhaustive size, to pick a policy and honor the budget.
    double est = 0;
    switch (kind) {
    case ProblemKind::Search: est = 2.0 * double(n) + 1.0; break;
    case ProblemKind::Majority:
        est = binomial(n, n / 2) + binomial(n, n / 2 + 1) + binomial(n, n / 2) * double(n) / 2;
        break;
    case ProblemKind::Parity: est = std::ldexp(1.0, int(n)) * (1.0 + double(n) / 2); break;
    case ProblemKind::ElementDistinctness: {
        double fact = 1;
        for (std::uint64_t j = 2; j <= n; ++j) fact *= double(j);
        est = fact * (1.5 + double(n)); // n <= 6 stays comfortably enumerable
        if (n > 6) est = 2.0 * double(budget); // force sampling beyond the frozen threshold
        break;
    }
    default: break;
    }
    bool exhaustive = est <= double(budget);
    if (policy == BuildPolicy::Exhaustive && !exhaustive)
        throw EnumerationBudgetExceeded("exhaustive relation would exceed the budget");
    if (policy == BuildPolicy::Sampled) exhaustive = false;
    rel.exhaustive = exhaustive;

    TableIndex xi, yi;
    if (exhaustive) {
        switch (kind) {
        case ProblemKind::Search: {
            std::size_t x0 = intern(rel.xs, xi, std::vector<std::uint32_t>(n, 0u));
            for (std::uint64_t i = 0; i < n; ++i) {
                std::size_t y = intern(rel.ys, yi, singleton_table(n, i));
                rel.pairs.push_back({x0, y, {i}});
            }
            break;
        }
        case ProblemKind::Majority:
        case ProblemKind::Parity: {
            if (n > 24) throw EnumerationBudgetExceeded("mask enumeration is capped at n = 24");
            const std::uint64_t lim = 1ull << n;
            for (std::uint64_t mask = 0; mask < lim; ++mask) {
                int w = std::popcount(mask);
                if (kind == ProblemKind::Majority) {
                    if (std::uint64_t(w) == n / 2) intern(rel.xs, xi, mask_table(n, mask));
                    else if (std::uint64_t(w) == n / 2 + 1) intern(rel.ys, yi, mask_table(n, mask));
                } else {
                    if (w % 2 == 0) intern(rel.xs, xi, mask_table(n, mask));
                    else intern(rel.ys, yi, mask_table(n, mask));
                }
            }
            for (std::size_t x = 0; x < rel.xs.size(); ++x) {
                for (std::uint64_t p = 0; p < n; ++p) {
                    std::vector<std::uint32_t> y = rel.xs[x];
                    if (kind == ProblemKind::Majority) {
                        if (y[p]) continue; // only raise a zero
                        y[p] = 1u;
                    } else {
                        y[p] ^= 1u;
                    }
                    auto it = yi.find(y);
                    rel.pairs.push_back({x, it->second, {p}});
                }
            }
            break;
        }
        case ProblemKind::ElementDistinctness: {
            std::vector<std::uint32_t> perm(n);
            std::iota(perm.begin(), perm.end(), 0u);
            do {
                intern(rel.xs, xi, perm);
            } while (std::next_permutation(perm.begin(), perm.end()));
            for (std::size_t x = 0; x < rel.xs.size(); ++x) {
                for (std::uint64_t p = 0; p < n; ++p) {
                    std::vector<std::uint32_t> y = rel.xs[x];
                    y[p] = static_cast<std::uint32_t>((y[p] + 1) % n);
                    std::size_t yidx = intern(rel.ys, yi, std::move(y));
                    rel.pairs.push_back({x, yidx, {p}});
                }
            }
            break;
        }
        default: break;
        }
        if (rel.xs.size() + rel.ys.size() + rel.pairs.size() > budget)
            throw EnumerationBudgetExceeded("relation exceeded the enumeration budget");
    } else {
        Rng rng(seed);
        for (std::size_t k = 0; k < sample_pairs; ++k) {
            std::uint64_t p = rng.uniform_int(n);
            std::vector<std::uint32_t> x, y;
            switch (kind) {
            case ProblemKind::Search:
                x.assign(n, 0u);
                y = singleton_table(n, p);
                break;
            case ProblemKind::Majority: {
                x = random_weight_table(n, n / 2, rng);
                std::uint64_t zeros = n / 2, pick = rng.uniform_int(zeros);
                std::uint64_t seen = 0;
                for (std::uint64_t i = 0; i < n; ++i)
                    if (!x[i] && seen++ == pick) { p = i; break; }
                y = x;
                y[p] = 1u;
                break;
            }
            case ProblemKind::Parity:
                x.resize(n);
                for (auto &b : x) b = rng.bernoulli(0.5) ? 1u : 0u;
                if (std::accumulate(x.begin(), x.end(), 0u) % 2 == 1) x[rng.uniform_int(n)] ^= 1u;
                y = x;
                y[p] ^= 1u;
                break;
            case ProblemKind::ElementDistinctness:
                x = random_perm_table(n, rng);
                y = x;
                y[p] = static_cast<std::uint32_t>((y[p] + 1) % n);
                break;
            default: break;
            }
            rel.xs.push_back(std::move(x));
            rel.ys.push_back(std::move(y));
            rel.pairs.push_back({k, k, {p}});
        }
    }
    return rel;
}

WeightScheme uniform_scheme() {
    WeightScheme s;
    s.name = "uniform";
    s.w = [](const RelationInstance &, const RelatedPair &) { return 1.0; };
    s.wp = [](const RelationInstance &, const RelatedPair &, std::uint64_t, bool) { return 1.0; };
    return s;
}

void validate_weight_scheme(const RelationInstance &rel, const WeightScheme &scheme) {
    if (!scheme.w || !scheme.wp) throw InvalidScheme("scheme is missing w or wp");
    for (const RelatedPair &p : rel.pairs) {
        double w = scheme.w(rel, p);
        if (w < 0) throw InvalidScheme("pair weight is negative");
        for (std::uint64_t i : p.diff) {
            double ax = scheme.wp(rel, p, i, true);
            double ay = scheme.wp(rel, p, i, false);
            if (ax < 0 || ay < 0) throw InvalidScheme("position weight is negative");
            if (ax * ay + 1e-12 < w * w)
                throw InvalidScheme("wp(x) * wp(y) < w^2 at a differing position");
        }
    }
}

LoadProfile load_profile(const RelationInstance &rel, const WeightScheme &scheme) {
    if (!rel.exhaustive) {
        if (scheme.name != "uniform")
            throw InvalidScheme("custom schemes need an exhaustively enumerated relation");
        LoadProfile lp;
        lp.v_x = rel.overlap_x / rel.degree_x;
        lp.v_y = rel.overlap_y / rel.degree_y;
        lp.v_max = std::sqrt(lp.v_x * lp.v_y);
        return lp;
    }
    std::vector<double> wt_x(rel.xs.size(), 0.0), wt_y(rel.ys.size(), 0.0);
    std::vector<std::unordered_map<std::uint64_t, double>> v_x(rel.xs.size()), v_y(rel.ys.size());
    for (const RelatedPair &p : rel.pairs) {
        double w = scheme.w(rel, p);
        wt_x[p.x] += w;
        wt_y[p.y] += w;
        for (std::uint64_t i : p.diff) {
            v_x[p.x][i] += scheme.wp(rel, p, i, true);
            v_y[p.y][i] += scheme.wp(rel, p, i, false);
        }
    }
    LoadProfile lp;
    for (std::size_t x = 0; x < rel.xs.size(); ++x) {
        if (wt_x[x] <= 0) continue;
        for (const auto &[i, v] : v_x[x]) lp.v_x = std::max(lp.v_x, v / wt_x[x]);
    }
    for (std::size_t y = 0; y < rel.ys.size(); ++y) {
        if (wt_y[y] <= 0) continue;
        for (const auto &[i, v] : v_y[y]) lp.v_y = std::max(lp.v_y, v / wt_y[y]);
    }
    lp.v_max = std::sqrt(lp.v_x * lp.v_y);
    return lp;
}

double adversary_constant(double eps) {
    if (!(eps > 0.0) || !(eps < 0.5))
        throw InvalidParameters("error rate must lie strictly between 0 and 1/2");
    return std::sqrt((1.0 - 2.0 * std::sqrt(eps * (1.0 - eps))) / 2.0);
}

BoundReport compute_bounds(const RelationInstance &rel, const WeightScheme &scheme, double eps) {
    BoundReport r;
    r.profile = load_profile(rel, scheme);
    r.epsilon = eps;
    const double c = adversary_constant(eps);
    if (r.profile.v_max <= 0) throw InvalidScheme("load profile has no positive load");
    r.product_lower = c / r.profile.v_max;
    r.nonadaptive_lower = c * c * std::max(1.0 / r.profile.v_x, 1.0 / r.profile.v_y);
    r.additive_lower = 2.0 * std::sqrt(c / r.profile.v_max);
    r.copies_at_one_query = std::log2(c / r.profile.v_max);
    return r;
}

// ---- dense amplitude walk for the search relation -----------------------------

namespace {

// States tracked just before each query: chi_0 is uniform over [n], and
// chi_{t+1} = Diffusion(Oracle_x(chi_t)). Phases commute with the diffusion
// for overlap purposes, so phi(t) read from chi_t equals the post-query value.
struct SearchWalk {
    std::uint64_t n;
    // index 0: the all-zero table; index 1 + i: the table marked at i.
    std::vector<std::vector<double>> chi;

    explicit SearchWalk(std::uint64_t n_) : n(n_) {
        chi.assign(n + 1, std::vector<double>(n, 1.0 / std::sqrt(double(n))));
    }

    void step() {
        for (std::uint64_t z = 0; z <= n; ++z) {
            std::vector<double> &v = chi[z];
            if (z > 0) v[z - 1] = -v[z - 1]; // phase oracle on the marked entry
            double s = std::accumulate(v.begin(), v.end(), 0.0) / std::sqrt(double(n));
            for (double &a : v) a = 2.0 * s / std::sqrt(double(n)) - a;
        }
    }

    double phi() const {
        double total = 0.0;
        for (std::uint64_t i = 0; i < n; ++i) {
            double ip = 0.0;
            for (std::uint64_t j = 0; j < n; ++j) ip += chi[0][j] * chi[1 + i][j];
            total += std::abs(ip);
        }
        return total;
    }

    // 2 * sum over pairs (zero table, marked-at-i) of |chi^0(i) * chi^i(i)|:
    // the differing position of each pair is its marked index.
    double overlap2() const {
        double total = 0.0;
        for (std::uint64_t i = 0; i < n; ++i)
            total += std::abs(chi[0][i] * chi[1 + i][i]);
        return 2.0 * total;
    }
};

} // namespace

std::vector<double> progress_trace(std::uint64_t n, int t_max) {
    if (n < 2) throw InvalidParameters("the search relation needs n >= 2");
    if (t_max < 0) throw InvalidParameters("t_max must be nonnegative");
    SearchWalk walk(n);
    std::vector<double> phis;
    phis.push_back(walk.phi());
    for (int t = 0; t < t_max; ++t) {
        walk.step();
        phis.push_back(walk.phi());
    }
    return phis;
}

std::vector<WeightIdentityCheck> verify_weight_identity(std::uint64_t n, int t_max) {
    if (n < 2) throw InvalidParameters("the search relation needs n >= 2");
    SearchWalk walk(n);
    const double v_max = 1.0 / std::sqrt(double(n));
    const double phi0 = walk.phi();
    std::vector<WeightIdentityCheck> checks;
    for (int t = 0; t < t_max; ++t) {
        WeightIdentityCheck c;
        c.t = t;
        c.phi = walk.phi();
        c.overlap2 = walk.overlap2();
        c.cap = 2.0 * v_max * phi0;
        walk.step();
        c.phi_next = walk.phi();
        c.drop = c.phi - c.phi_next;
        checks.push_back(c);
    }
    return checks;
}

std::vector<HybridPoint> verify_hybrid_bound(std::uint64_t n, int t_max) {
    if (n < 2) throw InvalidParameters("the hybrid walk needs n >= 2");
    SearchWalk walk(n);
    std::vector<HybridPoint> points;
    for (int t = 0; t <= t_max; ++t) {
        HybridPoint hp;
        hp.t = t;
        for (std::uint64_t i = 0; i < n; ++i) {
            double d2 = 0.0;
            for (std::uint64_t j = 0; j < n; ++j) {
                double d = walk.chi[0][j] - walk.chi[1 + i][j];
                d2 += d * d;
            }
            hp.lhs += d2;
        }
        hp.rhs = 4.0 * double(t) * double(t);
        points.push_back(hp);
        if (t < t_max) walk.step();
    }
    return points;
}

double verify_polynomial_inequality(std::size_t samples, Rng &rng) {
    auto ipow = [](double b, int e) {
        double r = 1.0;
        for (int j = 0; j < e; ++j) r *= b;
        return r;
    };
    double worst = -1.0;
    for (std::size_t s = 0; s < samples; ++s) {
        int k = 1 + static_cast<int>(rng.uniform_int(64));
        double r = rng.uniform01();
        double step = rng.uniform01() * 2.0 * r;
        double violation = ipow(r, k) - ipow(r - step, k) - double(k) * step;
        worst = std::max(worst, violation);
    }
    return worst;
}

LiftedReport verify_lifted_weights(const RelationInstance &rel, const WeightScheme &scheme, int k,
                                   int tuples, Rng &rng) {
    if (!rel.exhaustive)
        throw InvalidScheme("lifted-weight checks need an exhaustively enumerated relation");
    if (k < 1) throw InvalidParameters("tuple length must be positive");

    // Per-x totals of the base scheme.
    std::vector<double> wt(rel.xs.size(), 0.0);
    std::vector<std::unordered_map<std::uint64_t, double>> v(rel.xs.size());
    std::vector<std::vector<std::size_t>> by_x(rel.xs.size());
    for (std::size_t pi = 0; pi < rel.pairs.size(); ++pi) {
        const RelatedPair &p = rel.pairs[pi];
        wt[p.x] += scheme.w(rel, p);
        for (std::uint64_t i : p.diff) v[p.x][i] += scheme.wp(rel, p, i, true);
        by_x[p.x].push_back(pi);
    }

    LiftedReport report;
    report.k = k;
    report.valid = true;
    report.worst_margin = std::numeric_limits<double>::infinity();

    // One tuple check. V(x, I): each related y contributes wp at the first
    // position of the tuple where the tables differ; the aggregate ratio
    // wt(x)/V must dominate the best single-position ratio divided by the
    // tuple length.
    auto check_tuple = [&](std::size_t x, const std::vector<std::uint64_t> &positions) {
        if (wt[x] <= 0) return;
        double V = 0.0;
        for (std::size_t pi : by_x[x]) {
            const RelatedPair &p = rel.pairs[pi];
            const auto &xt = rel.xs[p.x];
            const auto &yt = rel.ys[p.y];
            for (std::uint64_t i : positions) {
                if (xt[i] != yt[i]) {
                    V += scheme.wp(rel, p, i, true);
                    double w = scheme.w(rel, p);
                    if (scheme.wp(rel, p, i, true) * scheme.wp(rel, p, i, false) + 1e-12 < w * w)
                        report.valid = false;
                    break;
                }
            }
        }
        if (V <= 0) return;
        double best = std::numeric_limits<double>::infinity();
        for (std::uint64_t i : positions) {
            auto it = v[x].find(i);
            if (it != v[x].end() && it->second > 0)
                best = std::min(best, wt[x] / it->second);
        }
        if (!std::isfinite(best)) return;
        double margin = wt[x] / V - best / double(k);
        report.worst_margin = std::min(report.worst_margin, margin);
        ++report.checks;
    };

    if (tuples <= 0) {
        // Exhaustive mode: every input against every ordered position tuple.
        std::vector<std::uint64_t> positions(std::size_t(k), 0);
        for (std::size_t x = 0; x < rel.xs.size(); ++x) {
            std::fill(positions.begin(), positions.end(), 0);
            while (true) {
                check_tuple(x, positions);
                int d = k - 1;
                while (d >= 0 && ++positions[std::size_t(d)] == rel.n)
                    positions[std::size_t(d--)] = 0;
                if (d < 0) break;
            }
        }
    } else {
        std::vector<std::uint64_t> positions(std::size_t(k), 0);
        for (int trial = 0; trial < tuples; ++trial) {
            std::size_t x = rng.uniform_int(rel.xs.size());
            for (auto &i : positions) i = rng.uniform_int(rel.n);
            check_tuple(x, positions);
        }
    }
    if (report.checks == 0) report.worst_margin = 0.0;
    return report;
}

} // namespace pdqp
