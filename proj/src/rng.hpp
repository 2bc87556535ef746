#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace barker {

/// Deterministic random stream owned by a single chain or simulation.
/// All draws are produced from explicit formulas over the raw mt19937_64
/// output so that a given seed yields the same stream on every platform.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : gen_(seed) {}

    /// Uniform draw strictly inside (0, 1).
    double uniform() {
        return (static_cast<double>(gen_() >> 11) + 0.5) * 0x1.0p-53;
    }

    /// Standard normal via the polar method (second value cached).
    double normal() {
        if (has_spare_) {
            has_spare_ = false;
            return spare_;
        }
        double v1 = 0.0, v2 = 0.0, s = 0.0;
        do {
            v1 = 2.0 * uniform() - 1.0;
            v2 = 2.0 * uniform() - 1.0;
            s = v1 * v1 + v2 * v2;
        } while (s >= 1.0 || s == 0.0);
        const double f = std::sqrt(-2.0 * std::log(s) / s);
        spare_ = v2 * f;
        has_spare_ = true;
        return v1 * f;
    }

    double exponential(double rate) { return -std::log(uniform()) / rate; }

    bool bernoulli(double p) { return uniform() < p; }

private:
    std::mt19937_64 gen_;
    bool has_spare_ = false;
    double spare_ = 0.0;
};

/// Stable sub-stream derivation (SplitMix64 over base ^ stream index).
/// Used to give parallel chains, and the two independent streams inside the
/// jump-process simulator, non-overlapping generators from one base seed.
inline std::uint64_t derive_seed(std::uint64_t base, std::uint64_t stream) {
    std::uint64_t z = base + 0x9e3779b97f4a7c15ULL * (stream + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

}  // namespace barker
