#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace mrpi {

/// Seeded random stream with hand-mapped uniform/gaussian draws.
///
/// The standard distributions are implementation-defined, so mapping the raw
/// mt19937_64 output ourselves keeps every seeded run bit-reproducible across
/// standard libraries. All randomized outputs in the library (direction sets,
/// test systems, disturbance rollouts) draw from this stream.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    /// Uniform draw in [0, 1).
    double uniform01() {
        return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
    }

    /// Uniform draw in [lo, hi).
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

    /// Standard normal draw (Box-Muller, cached spare).
    double gaussian() {
        if (has_spare_) {
            has_spare_ = false;
            return spare_;
        }
        double u1 = uniform01();
        double u2 = uniform01();
        while (u1 <= 0.0) u1 = uniform01();
        const double mag = std::sqrt(-2.0 * std::log(u1));
        const double ang = 2.0 * 3.14159265358979323846 * u2;
        spare_ = mag * std::sin(ang);
        has_spare_ = true;
        return mag * std::cos(ang);
    }

    /// Uniform integer in [0, n).
    std::uint64_t index(std::uint64_t n) { return engine_() % n; }

private:
    std::mt19937_64 engine_;
    bool has_spare_ = false;
    double spare_ = 0.0;
};

}  // namespace mrpi
