#pragma once

#include <cstdint>

namespace filtercast {

/// splitmix64 mixing step. Used both as the PRNG core and to derive
/// statistically independent substreams from a master seed.
constexpr std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ull;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
    return x ^ (x >> 31);
}

/// Derives a stream key from a master seed and up to three counters
/// (trial index, day index, purpose tag). Every (master, a, b, c) tuple
/// maps to its own substream, so trials and days can be generated in any
/// order, or in parallel, and still reproduce bit-identical output.
constexpr std::uint64_t derive_stream(std::uint64_t master, std::uint64_t a,
                                      std::uint64_t b = 0, std::uint64_t c = 0) {
    std::uint64_t s = splitmix64(master ^ 0xA24BAED4963EE407ull);
    s = splitmix64(s ^ (a * 0x9E3779B97F4A7C15ull + 0x7F4A7C15ull));
    s = splitmix64(s ^ (b * 0xC2B2AE3D27D4EB4Full + 0x27D4EB4Full));
    s = splitmix64(s ^ (c * 0x165667B19E3779F9ull + 0x9E3779F9ull));
    return s;
}

/// Counter-based deterministic generator. Distribution code is written out
/// here rather than taken from <random> so that results do not depend on the
/// standard library implementation.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next_u64() {
        state_ += 0x9E3779B97F4A7C15ull;
        std::uint64_t x = state_;
        x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
        x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
        return x ^ (x >> 31);
    }

    /// Uniform double in [0, 1).
    double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    /// Uniform double in [lo, hi).
    double uniform(double lo, double hi) { return lo + uniform() * (hi - lo); }

    bool bernoulli(double p) { return uniform() < p; }

    /// Binomial(n, p) by n independent Bernoulli draws. Exact at p = 0 and
    /// p = 1 (no event / every event survives).
    std::int64_t binomial(std::int64_t n, double p) {
        if (p <= 0.0) return 0;
        if (p >= 1.0) return n;
        std::int64_t k = 0;
        for (std::int64_t i = 0; i < n; ++i) {
            if (uniform() < p) ++k;
        }
        return k;
    }

    /// Poisson(lambda) via Knuth's product method, chunked so the
    /// exp(-lambda) factor never underflows for large rates.
    std::int64_t poisson(double lambda) {
        std::int64_t total = 0;
        while (lambda > 0.0) {
            const double chunk = lambda > 30.0 ? 30.0 : lambda;
            total += poisson_small(chunk);
            lambda -= chunk;
        }
        return total;
    }

    /// Standard normal via Box-Muller (two uniforms per draw).
    double normal(double mean = 0.0, double stddev = 1.0);

private:
    std::int64_t poisson_small(double lambda);

    std::uint64_t state_;
};

}  // namespace filtercast
