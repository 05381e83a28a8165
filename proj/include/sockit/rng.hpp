#pragma once
#include <cmath>
#include <cstdint>
#include <random>

namespace sockit {

// Deterministic RNG wrapper: mt19937_64 with explicit value transforms so
// streams are reproducible across standard libraries (std distributions are
// implementation-defined).
class Rng {
public:
    explicit Rng(std::uint64_t seed) : eng_(seed) {}

    // uniform in [0, 1)
    double uniform() {
        return static_cast<double>(eng_() >> 11) * 0x1.0p-53;
    }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    // integer in [0, n)
    std::uint64_t integer(std::uint64_t n) {
        return static_cast<std::uint64_t>(uniform() * static_cast<double>(n));
    }

    // standard normal via Box-Muller (pairs cached)
    double normal() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        double u1 = uniform();
        while (u1 <= 0.0) u1 = uniform();
        const double u2 = uniform();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double a = 6.283185307179586476925286766559 * u2;
        spare_ = r * std::sin(a);
        have_spare_ = true;
        return r * std::cos(a);
    }

private:
    std::mt19937_64 eng_;
    bool have_spare_ = false;
    double spare_ = 0.0;
};

} // namespace sockit
