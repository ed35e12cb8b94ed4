#pragma once

#include <cstdint>
#include <random>

namespace rankfit {

inline std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

/// Deterministic sub-seed keyed by (seed, a, b).
inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t a,
                                 std::uint64_t b = 0) {
    std::uint64_t s = seed;
    std::uint64_t h = splitmix64(s);
    s ^= a * 0x9e3779b97f4a7c15ULL;
    h ^= splitmix64(s);
    s ^= b * 0xc2b2ae3d27d4eb4fULL;
    h ^= splitmix64(s);
    return h;
}

/// Deterministic random stream. Streams derived from the same master seed
/// plus distinct keys are independent, so per-item or per-ranking work can be
/// partitioned across workers while staying bit-identical to a serial run.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : eng_(mix(seed)) {}

    /// Substream keyed by (seed, a, b, c). Same inputs, same stream.
    static Rng stream(std::uint64_t seed, std::uint64_t a, std::uint64_t b = 0,
                      std::uint64_t c = 0) {
        std::uint64_t s = seed;
        std::uint64_t h = splitmix64(s);
        s ^= a * 0x9e3779b97f4a7c15ULL;
        h ^= splitmix64(s);
        s ^= b * 0xc2b2ae3d27d4eb4fULL;
        h ^= splitmix64(s);
        s ^= c * 0x165667b19e3779f9ULL;
        h ^= splitmix64(s);
        return Rng(h);
    }

    std::uint64_t next_u64() { return eng_(); }

    /// Uniform draw in [0, 1) with 53-bit resolution.
    double uniform() { return static_cast<double>(eng_() >> 11) * 0x1.0p-53; }

    /// Uniform draw in the open interval (0, 1).
    double uniform_open() {
        double u;
        do {
            u = uniform();
        } while (u == 0.0);
        return u;
    }

    /// Uniform integer in [0, n).
    std::uint64_t below(std::uint64_t n) {
        // rejection to avoid modulo bias
        std::uint64_t limit = ~std::uint64_t{0} - ~std::uint64_t{0} % n;
        std::uint64_t v;
        do {
            v = eng_();
        } while (v >= limit);
        return v % n;
    }

    /// Standard normal draw (inverse-CDF, deterministic across platforms).
    double normal();

private:
    static std::uint64_t mix(std::uint64_t seed) {
        std::uint64_t s = seed;
        splitmix64(s);
        return splitmix64(s);
    }

    std::mt19937_64 eng_;
};

}  // namespace rankfit
