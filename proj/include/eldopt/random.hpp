#pragma once

#include <cstddef>
#include <cstdint>
#include <random>

namespace eldopt {

/// Seeded random stream, one per optimizer run. A fixed seed reproduces the
/// exact draw sequence. Built on std::mt19937_64 with explicit output mapping
/// so each call site's interval is pinned down by this class, not a
/// library-dependent distribution.
class RngStream {
public:
    explicit RngStream(std::uint64_t seed) : seed_(seed), engine_(seed) {}

    std::uint64_t seed() const { return seed_; }

    /// Uniform in the half-open interval [0, 1).
    double uniform01() {
        return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
    }

    /// Uniform in the half-open interval [lo, hi).
    double uniform(double lo, double hi) {
        return lo + (hi - lo) * uniform01();
    }

    /// Uniform integer in [0, n). n must be positive.
    std::size_t uniform_index(std::size_t n) {
        return static_cast<std::size_t>(engine_() % n);
    }

private:
    std::uint64_t seed_;
    std::mt19937_64 engine_;
};

}  // namespace eldopt
