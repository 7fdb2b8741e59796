#pragma once

#include <cstdint>
#include <random>
#include <vector>

namespace sep {

/// splitmix64 step; derives independent, reproducible seed streams.
uint64_t mix_seed(uint64_t seed, uint64_t stream);

/// Seeded draws on top of std::mt19937_64. The engine's output sequence is
/// pinned by the standard; the mappings below avoid std::*_distribution,
/// whose results are implementation-defined.
class Rng {
public:
    explicit Rng(uint64_t seed) : engine_(seed) {}

    uint64_t raw() { return engine_(); }

    /// uniform double in [0, 1), 53-bit resolution
    double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    /// uniform double in [lo, hi)
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    /// uniform integer in [0, n), unbiased; n must be positive
    uint64_t below(uint64_t n);

    template <typename T>
    void shuffle(std::vector<T>& values) {
        for (size_t i = values.size(); i > 1; --i) {
            size_t j = static_cast<size_t>(below(i));
            std::swap(values[i - 1], values[j]);
        }
    }

private:
    std::mt19937_64 engine_;
};

}  // namespace sep
