#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

namespace cdgafs {

/// Deterministic random source. The engine is std::mt19937_64, whose state
/// transition and seeding are fully specified by the standard; all variate
/// shaping (integers, reals, normals, shuffles) is implemented here instead
/// of through std::*_distribution, which is implementation-defined. Same
/// seed therefore means the same stream on every platform and compiler.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : eng_(seed) {}

    std::uint64_t u64() { return eng_(); }

    /// Unbiased integer in [0, n). n must be > 0.
    std::uint64_t below(std::uint64_t n) {
        const std::uint64_t threshold = (-n) % n;
        std::uint64_t r;
        do {
            r = u64();
        } while (r < threshold);
        return r % n;
    }

    std::size_t index(std::size_t n) { return static_cast<std::size_t>(below(n)); }

    /// Uniform double in [0, 1) with 53 random bits.
    double real() { return static_cast<double>(u64() >> 11) * 0x1.0p-53; }

    bool bernoulli(double p) { return real() < p; }

    /// Standard normal via Box-Muller (one variate per call).
    double normal() {
        const double u1 = 1.0 - real(); // (0, 1]
        const double u2 = real();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586476925 * u2);
    }

    template <typename T>
    void shuffle(std::vector<T>& v) {
        for (std::size_t i = v.size(); i > 1; --i) {
            std::swap(v[i - 1], v[static_cast<std::size_t>(below(i))]);
        }
    }

    /// Moves `count` uniformly chosen elements to the front of `pool`
    /// (partial Fisher-Yates). The caller reads pool[0..count).
    template <typename T>
    void choose_front(std::vector<T>& pool, std::size_t count) {
        for (std::size_t i = 0; i < count && i + 1 < pool.size(); ++i) {
            const std::size_t j = i + static_cast<std::size_t>(below(pool.size() - i));
            std::swap(pool[i], pool[j]);
        }
    }

private:
    std::mt19937_64 eng_;
};

/// Named sub-streams of a master seed. Every stochastic stage draws from its
/// own stream so stages stay independent and runs stay reproducible.
enum class RngStream : std::uint64_t {
    split = 1,
    community = 2,
    ga_init = 3,
    ga_evolve = 4,
    synth = 5,
};

inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

inline std::uint64_t derive_seed(std::uint64_t master, RngStream stream) {
    return splitmix64(master ^ splitmix64(static_cast<std::uint64_t>(stream)));
}

inline Rng derive_rng(std::uint64_t master, RngStream stream) {
    return Rng(derive_seed(master, stream));
}

} // namespace cdgafs
