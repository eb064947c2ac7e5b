#pragma once

#include <cstdint>

namespace pindist {

// splitmix64; also the per-case seed derivation for sweeps:
// case_seed = splitmix64(master_seed + case_index).
inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

// Self-contained generator so random sets are byte-identical across
// platforms and standard libraries (std distributions are not portable).
class SplitMix64 {
public:
    explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next() {
        state_ += 0x9e3779b97f4a7c15ULL;
        std::uint64_t x = state_;
        x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
        x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
        return x ^ (x >> 31);
    }

    // Uniform value in [0, n) by rejection.
    std::uint64_t bounded(std::uint64_t n) {
        std::uint64_t limit = ~std::uint64_t{0} - (~std::uint64_t{0} % n + 1) % n;
        std::uint64_t r;
        do {
            r = next();
        } while (r > limit);
        return r % n;
    }

private:
    std::uint64_t state_;
};

}  // namespace pindist
