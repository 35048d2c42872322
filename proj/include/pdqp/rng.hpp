// rng.hpp -- seedable random stream with deterministic substream derivation.
//
// All randomness in the library flows through an injected Rng handle; there is
// no global generator. Substreams derived from (seed, path) are stable across
// platforms and worker counts, so Monte Carlo results depend only on the seed.
#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <vector>

#include "pdqp/errors.hpp"

namespace pdqp {

namespace detail {
// splitmix64: fast, well-mixed 64-bit permutation used for seed derivation.
inline std::uint64_t splitmix64(std::uint64_t &s) {
    std::uint64_t z = (s += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}
} // namespace detail

class Rng {
  public:
    explicit Rng(std::uint64_t seed) : seed_(seed) {
        std::uint64_t s = seed;
        engine_.seed(detail::splitmix64(s));
    }

    std::uint64_t seed() const { return seed_; }

    // Child stream addressed by up to three path components. Deriving does not
    // advance this stream, so layouts of derived streams are reproducible.
    Rng derive(std::uint64_t a, std::uint64_t b = 0, std::uint64_t c = 0) const {
        std::uint64_t s = seed_;
        std::uint64_t m = detail::splitmix64(s);
        s = m ^ (a * 0x9e3779b97f4a7c15ULL + 0x7f4a7c15ULL);
        m = detail::splitmix64(s);
        s = m ^ (b * 0xbf58476d1ce4e5b9ULL + 0x1ce4e5b9ULL);
        m = detail::splitmix64(s);
        s = m ^ (c * 0x94d049bb133111ebULL + 0x133111ebULL);
        return Rng(detail::splitmix64(s));
    }

    // Uniform double in [0, 1) with 53 random bits (portable across stdlibs).
    double uniform01() { return double(engine_() >> 11) * 0x1.0p-53; }

    // Uniform integer in [0, n) by rejection, bias-free.
    std::uint64_t uniform_int(std::uint64_t n) {
        if (n == 0) throw InvalidParameters("uniform_int: n must be positive");
        std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
        std::uint64_t x;
        do { x = engine_(); } while (x >= limit);
        return x % n;
    }

    bool bernoulli(double p) { return uniform01() < p; }

    // Standard normal via Box-Muller (deterministic, unlike std::normal_distribution).
    double normal() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        double u, v, s;
        do {
            u = 2.0 * uniform01() - 1.0;
            v = 2.0 * uniform01() - 1.0;
            s = u * u + v * v;
        } while (s >= 1.0 || s == 0.0);
        double f = std::sqrt(-2.0 * std::log(s) / s);
        spare_ = v * f;
        have_spare_ = true;
        return u * f;
    }

    // Index sampled with probability weights[i] / total. Zero-weight entries are
    // never chosen; an effectively empty distribution is rejected.
    std::size_t sample_discrete(std::span<const double> weights, double total) {
        if (!(total > 1e-300))
            throw ZeroProbabilityBranch("sample_discrete: total weight vanishes");
        double r = uniform01() * total;
        double acc = 0.0;
        std::size_t last_positive = weights.size();
        for (std::size_t i = 0; i < weights.size(); ++i) {
            if (weights[i] <= 0.0) continue;
            acc += weights[i];
            last_positive = i;
            if (r < acc) return i;
        }
        if (last_positive == weights.size())
            throw ZeroProbabilityBranch("sample_discrete: no positive weight");
        return last_positive; // r landed in the rounding tail
    }

    std::size_t sample_discrete(const std::vector<double> &weights, double total) {
        return sample_discrete(std::span<const double>(weights), total);
    }

    // Fisher-Yates shuffle.
    template <typename T> void shuffle(std::vector<T> &v) {
        for (std::size_t i = v.size(); i > 1; --i)
            std::swap(v[i - 1], v[uniform_int(i)]);
    }

  private:
    std::uint64_t seed_;
    std::mt19937_64 engine_;
    bool have_spare_ = false;
    double spare_ = 0.0;
};

} // namespace pdqp
