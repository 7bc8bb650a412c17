#pragma once

#include <cstdint>
#include <span>
#include <stdexcept>

namespace qftca {

// Deterministic xorshift64* generator (shift constants 12/25/27, multiplier
// 0x2545F4914F6CDD1D).  Identical seed + identical call sequence gives an
// identical draw sequence on every platform.
class Generator {
public:
    explicit Generator(std::uint64_t seed) : state_(mix(seed)) {}

    std::uint64_t next_u64() {
        std::uint64_t x = state_;
        x ^= x >> 12;
        x ^= x << 25;
        x ^= x >> 27;
        state_ = x;
        return x * 0x2545F4914F6CDD1DULL;
    }

    // Uniform in [0, 1), 53 mantissa bits.
    double next_double() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    std::uint64_t state() const { return state_; }

    // Samples index i with probability w[i]/sum(w) using the cumulative sum
    // and a single draw.  A draw landing exactly on a cumulative boundary
    // resolves toward the lower index.
    std::size_t pick_weighted(std::span<const double> weights) {
        double total = 0.0;
        for (double w : weights) {
            if (w < 0.0) throw std::invalid_argument("negative weight");
            total += w;
        }
        if (total <= 0.0) throw std::invalid_argument("all weights are zero");
        const double u = next_double() * total;
        double cum = 0.0;
        std::size_t last_positive = 0;
        for (std::size_t i = 0; i < weights.size(); ++i) {
            if (weights[i] == 0.0) continue;
            cum += weights[i];
            last_positive = i;
            if (cum >= u) return i;
        }
        return last_positive;  // u == total up to rounding
    }

private:
    // splitmix64 of the seed; keeps state nonzero for any seed including 0.
    static std::uint64_t mix(std::uint64_t z) {
        z += 0x9E3779B97F4A7C15ULL;
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        z ^= z >> 31;
        return z ? z : 0x9E3779B97F4A7C15ULL;
    }

    std::uint64_t state_;
};

}  // namespace qftca
