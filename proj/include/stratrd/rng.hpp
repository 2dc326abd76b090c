#pragma once

#include <cmath>
#include <cstdint>
#include <vector>

#include "stratrd/errors.hpp"

namespace stratrd {

// splitmix64 step; also the key-derivation mixer for stream splitting.
inline std::uint64_t splitmix64(std::uint64_t& state) {
    state += 0x9E3779B97F4A7C15ULL;
    std::uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

// Deterministic sub-stream key from (seed, index). Streams derived for
// distinct indices are statistically independent, so replicate results do
// not depend on evaluation order or thread schedule.
inline std::uint64_t derive_stream_seed(std::uint64_t seed, std::uint64_t index) {
    std::uint64_t s = seed ^ (0xD1B54A32D192ED03ULL * (index + 1));
    std::uint64_t a = splitmix64(s);
    std::uint64_t b = splitmix64(s);
    return a ^ (b << 1);
}

// xoshiro256++ with fixed integer-only arithmetic; uniform doubles use the
// 53-bit conversion so sequences are identical across platforms.
class RngStream {
public:
    explicit RngStream(std::uint64_t seed) {
        std::uint64_t s = seed;
        for (auto& word : state_) word = splitmix64(s);
    }

    RngStream(std::uint64_t seed, std::uint64_t stream_index)
        : RngStream(derive_stream_seed(seed, stream_index)) {}

    std::uint64_t next_u64() {
        const std::uint64_t result = rotl(state_[0] + state_[3], 23) + state_[0];
        const std::uint64_t t = state_[1] << 17;
        state_[2] ^= state_[0];
        state_[3] ^= state_[1];
        state_[1] ^= state_[2];
        state_[0] ^= state_[3];
        state_[2] ^= t;
        state_[3] = rotl(state_[3], 45);
        return result;
    }

    // Uniform on [0, 1) with 53 random bits.
    double uniform01() {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    double uniform(double lo, double hi) {
        return lo + (hi - lo) * uniform01();
    }

    bool bernoulli(double p) { return uniform01() < p; }

    // Index into [0, n).
    std::size_t uniform_index(std::size_t n) {
        return static_cast<std::size_t>(uniform01() * static_cast<double>(n));
    }

    // Inverse-CDF draw against a cumulative probability table.
    std::size_t categorical(const std::vector<double>& cumulative) {
        const double u = uniform01();
        for (std::size_t i = 0; i + 1 < cumulative.size(); ++i) {
            if (u < cumulative[i]) return i;
        }
        return cumulative.size() - 1;
    }

    // Marsaglia polar method; spare value cached.
    double normal(double mu, double sigma) {
        if (has_spare_) {
            has_spare_ = false;
            return mu + sigma * spare_;
        }
        double u, v, s;
        do {
            u = 2.0 * uniform01() - 1.0;
            v = 2.0 * uniform01() - 1.0;
            s = u * u + v * v;
        } while (s >= 1.0 || s == 0.0);
        const double factor = std::sqrt(-2.0 * std::log(s) / s);
        spare_ = v * factor;
        has_spare_ = true;
        return mu + sigma * (u * factor);
    }

private:
    static std::uint64_t rotl(std::uint64_t x, int k) {
        return (x << k) | (x >> (64 - k));
    }

    std::uint64_t state_[4];
    double spare_ = 0.0;
    bool has_spare_ = false;
};

// Truncated-normal draw on [a, b] by rejection from Normal(mu, sigma^2).
// The iteration cap guards against vanishing acceptance regions.
inline double sample_truncnorm(double a, double b, double mu, double sigma,
                               RngStream& rng, long max_iterations = 1000000) {
    if (!(a < b)) throw Error(ErrorCode::InvalidArgument, "truncnorm requires a < b");
    if (!(sigma > 0.0)) throw Error(ErrorCode::InvalidArgument, "truncnorm requires sigma > 0");
    for (long i = 0; i < max_iterations; ++i) {
        const double x = rng.normal(mu, sigma);
        if (x >= a && x <= b) return x;
    }
    throw Error(ErrorCode::RejectionCap, "truncated normal rejection cap reached");
}

} // namespace stratrd
