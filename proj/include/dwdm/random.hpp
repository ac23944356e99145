#pragma once

#include <cmath>
#include <cstdint>
#include <limits>

namespace dwdm {

// Small counter-free PRNG (splitmix64).  Every consumer derives an
// independent substream from (seed, index), so results never depend on how
// work is split across threads.
class SplitMix64 {
public:
    using result_type = std::uint64_t;

    explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

    static constexpr result_type min() { return 0; }
    static constexpr result_type max() { return std::numeric_limits<std::uint64_t>::max(); }

    result_type operator()() {
        std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    double uniform() {
        return static_cast<double>((*this)() >> 11) * 0x1.0p-53;
    }

private:
    std::uint64_t state_;
};

// Substream for item `index` of a stream rooted at `seed`.  The mixing keeps
// neighbouring indices statistically uncorrelated.
inline SplitMix64 substream(std::uint64_t seed, std::uint64_t index) {
    std::uint64_t z = seed ^ (0x9e3779b97f4a7c15ULL * (index + 1));
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return SplitMix64(z ^ (z >> 31));
}

// Box-Muller, implemented locally so that draws are bit-reproducible across
// standard libraries.  Draws two uniforms per normal.
inline double draw_normal(SplitMix64& rng, double mean = 0.0, double stddev = 1.0) {
    double u1 = rng.uniform();
    while (u1 <= 0.0) u1 = rng.uniform();
    const double u2 = rng.uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    return mean + stddev * r * std::cos(2.0 * 3.14159265358979323846 * u2);
}

} // namespace dwdm
