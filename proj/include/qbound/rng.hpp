#pragma once

// Deterministic draws for property tests and seeded verification runs.
// std::mt19937_64 output is pinned by the standard; the mapping to doubles
// is done by hand because the <random> distributions are not.

#include <cstdint>
#include <random>

namespace qbound {

struct Rng {
    std::mt19937_64 eng;

    explicit Rng(std::uint64_t seed) : eng(seed) {}

    double uniform() { return static_cast<double>(eng() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    int uniform_int(int lo, int hi_incl) {
        return lo + static_cast<int>(eng() % static_cast<std::uint64_t>(hi_incl - lo + 1));
    }
};

}  // namespace qbound
