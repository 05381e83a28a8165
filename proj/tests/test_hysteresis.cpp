#include <stdexcept>
#include <doctest.h>

#include "sockit/hysteresis.hpp"

#include <cmath>
#include <random>

using namespace sockit;

TEST_SUITE("hysteresis") {

TEST_CASE("constant current matches the closed form") {
    // under constant current I: h(k) = s + (h0 - s) * r^k with
    // r = exp(-|I| dt / c), s = sign(-I)
    std::mt19937 rng(7);
    std::uniform_real_distribution<double> uh(-1.0, 1.0), ui(-3.0, 3.0), uc(0.5, 5.0);
    std::uniform_int_distribution<int> uk(1, 400);
    for (int trial = 0; trial < 100; ++trial) {
        const double h0 = uh(rng);
        double i = ui(rng);
        if (std::abs(i) < 1e-3) i = 1e-3;
        const double c = uc(rng);
        const int k = uk(rng);
        HysteresisTracker trk(c, h0);
        double h = h0;
        for (int s = 0; s < k; ++s) h = trk.advance(i);
        const double r = std::exp(-std::abs(i) / c);
        const double sgn = i > 0 ? -1.0 : 1.0;
        const double closed = sgn + (h0 - sgn) * std::pow(r, k);
        CHECK(h == doctest::Approx(closed).epsilon(1e-12));
    }
}

TEST_CASE("state never leaves [-1, 1] under random fuzz") {
    std::mt19937 rng(991);
    std::uniform_real_distribution<double> ui(-50.0, 50.0);
    HysteresisTracker trk(1.2, 0.0);
    for (int k = 0; k < 1000000; ++k) {
        const double h = trk.advance(ui(rng));
        REQUIRE(h >= -1.0);
        REQUIRE(h <= 1.0);
    }
}

TEST_CASE("zero current leaves the state unchanged") {
    HysteresisTracker trk(1.2, 0.37);
    for (int k = 0; k < 100; ++k) CHECK(trk.advance(0.0) == 0.37);
}

TEST_CASE("discharge drives toward -1, charge toward +1") {
    HysteresisTracker d(1.2, 0.0), c(1.2, 0.0);
    for (int k = 0; k < 2000; ++k) {
        d.advance(2.0);  // positive current = discharge
        c.advance(-2.0);
    }
    CHECK(d.h() == doctest::Approx(-1.0).epsilon(1e-9));
    CHECK(c.h() == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("series helper is one-step delayed in the driving current") {
    const std::vector<double> i{1.0, -2.0, 0.5, 0.0, 3.0};
    const auto h = hysteresis_series(i, 1.2, 0.25);
    REQUIRE(h.size() == i.size());
    CHECK(h[0] == 0.25);
    HysteresisTracker trk(1.2, 0.25);
    for (std::size_t k = 1; k < i.size(); ++k) CHECK(h[k] == trk.advance(i[k - 1]));
}

TEST_CASE("parameter validation") {
    CHECK_THROWS_AS(HysteresisTracker(0.0, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(HysteresisTracker(-1.0, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(HysteresisTracker(1.2, 1.5), std::invalid_argument);
    CHECK_THROWS_AS(HysteresisTracker(1.2, -1.5), std::invalid_argument);
    CHECK_THROWS_AS(HysteresisTracker(1.2, 0.0, 0.0), std::invalid_argument);
    HysteresisTracker trk(1.2, 0.0);
    CHECK_THROWS_AS(trk.advance(std::nan("")), std::invalid_argument);
}

} // TEST_SUITE
