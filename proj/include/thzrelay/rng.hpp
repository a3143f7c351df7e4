// SPDX-License-Identifier: Apache-2.0
//
// thzrelay: counter-based reproducible random streams.
//
// Every (seed, sample index, stream tag) triple owns an independent
// SplitMix64 substream, so shard boundaries and thread counts never change
// the draws.  Rejection samplers may consume any number of values from their
// substream without affecting neighbours.

#ifndef THZRELAY_RNG_HPP
#define THZRELAY_RNG_HPP

#include <cmath>
#include <cstdint>

namespace thzrelay::rng {

inline std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

class Substream {
  public:
    Substream(std::uint64_t seed, std::uint64_t index, std::uint64_t tag,
              bool antithetic = false)
        : antithetic_(antithetic) {
        // Mix the triple into the initial state.
        std::uint64_t s = seed ^ 0xD1B54A32D192ED03ULL;
        s = splitmix64(s) ^ (index * 0x2545F4914F6CDD1DULL);
        s = splitmix64(s) ^ (tag * 0x9E6C63D0876A9ULL + 0xABCC5167CCAD925FULL);
        state_ = splitmix64(s);
    }

    std::uint64_t next_u64() { return splitmix64(state_); }

    // Uniform on (0, 1), never exactly 0 or 1.
    double uniform() {
        const double u =
            (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
        return antithetic_ ? 1.0 - u : u;
    }

    double normal() {
        // Box-Muller; one value per call keeps the stream stateless enough.
        const double u1 = uniform();
        const double u2 = uniform();
        return std::sqrt(-2.0 * std::log(u1)) *
               std::cos(6.28318530717958647692 * u2);
    }

    // Marsaglia-Tsang for shape >= 1, power boost for shape < 1; scale 1.
    double gamma_variate(double shape) {
        if (shape < 1.0) {
            const double g = gamma_variate(shape + 1.0);
            return g * std::pow(uniform(), 1.0 / shape);
        }
        const double d = shape - 1.0 / 3.0;
        const double c = 1.0 / std::sqrt(9.0 * d);
        for (;;) {
            double x, v;
            do {
                x = normal();
                v = 1.0 + c * x;
            } while (v <= 0.0);
            v = v * v * v;
            const double u = uniform();
            if (u < 1.0 - 0.0331 * x * x * x * x) return d * v;
            if (std::log(u) < 0.5 * x * x + d * (1.0 - v + std::log(v)))
                return d * v;
        }
    }

  private:
    std::uint64_t state_;
    bool antithetic_;
};

}  // namespace thzrelay::rng

#endif
