#include "sepredict/rng.hpp"

#include "sepredict/error.hpp"

namespace sep {

uint64_t mix_seed(uint64_t seed, uint64_t stream) {
    // splitmix64 finalizer over seed advanced by the stream index
    uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (stream + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

uint64_t Rng::below(uint64_t n) {
    if (n == 0) {
        throw Error(Errc::invalid_argument, "below(0)");
    }
    // rejection sampling keeps the draw unbiased
    const uint64_t limit = UINT64_MAX - UINT64_MAX % n;
    uint64_t x = engine_();
    while (x >= limit) {
        x = engine_();
    }
    return x % n;
}

}  // namespace sep
