#ifndef DVFSIM_RNG_HPP
#define DVFSIM_RNG_HPP

#include <cstdint>
#include <random>

namespace dvfsim {

/// Seedable random source with portable output: the raw stream is the
/// standard-specified mt19937_64, and every derived draw (unit doubles,
/// bounded integers via multiply-shift, Poisson counts via Knuth's product
/// method) is defined here rather than delegated to implementation-defined
/// library distributions. Identical seeds reproduce identical task sets on
/// any platform.
class Rng {
  public:
    explicit Rng(std::uint64_t seed) : gen_(seed) {}

    /// Uniform double in [0, 1) with 53 random bits.
    double uniform() {
        return static_cast<double>(gen_() >> 11) * 0x1.0p-53;
    }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    /// Uniform integer in [lo, hi], inclusive.
    std::int64_t uniform_int(std::int64_t lo, std::int64_t hi) {
        const std::uint64_t span = static_cast<std::uint64_t>(hi - lo) + 1;
        const auto wide = static_cast<unsigned __int128>(gen_()) * span;
        return lo + static_cast<std::int64_t>(wide >> 64);
    }

    /// Poisson count with the given mean. Large means are split so the
    /// product in Knuth's method stays away from underflow.
    int poisson(double mean) {
        int count = 0;
        while (mean > 30.0) {
            count += poisson_small(30.0);
            mean -= 30.0;
        }
        return count + poisson_small(mean);
    }

  private:
    int poisson_small(double mean) {
        if (mean <= 0.0) return 0;
        const double floor = std::exp(-mean);
        int k = 0;
        double product = uniform();
        while (product > floor) {
            ++k;
            product *= uniform();
        }
        return k;
    }

    std::mt19937_64 gen_;
};

} // namespace dvfsim

#endif
