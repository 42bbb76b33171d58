#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace elas {

// Seeded random source. Gaussian draws use an explicit Box-Muller transform so
// the byte stream does not depend on the standard library's distribution
// implementation.
class Rng {
public:
    explicit Rng(uint64_t seed = 0) : engine_(seed) {}

    void reseed(uint64_t seed) { engine_.seed(seed); }

    // Uniform in [0, 1).
    double uniform() {
        return double(engine_() >> 11) * (1.0 / 9007199254740992.0);  // 53-bit mantissa
    }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    uint64_t next_u64() { return engine_(); }

    // Integer in [0, n).
    uint64_t below(uint64_t n) { return n ? engine_() % n : 0; }

    double gaussian(double mean = 0.0, double sigma = 1.0) {
        double u1 = uniform();
        double u2 = uniform();
        while (u1 <= 1e-300) u1 = uniform();
        double z = std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
        return mean + sigma * z;
    }

private:
    std::mt19937_64 engine_;
};

}  // namespace elas
