#include <stdexcept>
#include <doctest.h>

#include "sockit/filter.hpp"

#include <cmath>
#include <random>
#include <vector>

using namespace sockit;

TEST_SUITE("filter") {

TEST_CASE("bank coefficients at the default design") {
    // lambda0=0.25, lambda1=1, ts=1: alpha = 0.25 + 1 + 1 = 2.25
    const BankCoefficients c = design_bank(FilterDesign{0.25, 1.0, 1.0});
    CHECK(c.a[0] == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(c.a[1] == doctest::Approx(-4.0 / 3.0).epsilon(1e-15));
    CHECK(c.a[2] == doctest::Approx(4.0 / 9.0).epsilon(1e-15));
    CHECK(c.b0[0] == doctest::Approx(1.0 / 9.0).epsilon(1e-15));
    CHECK(c.b0[1] == 0.0);
    CHECK(c.b0[2] == 0.0);
    CHECK(c.b1[0] == doctest::Approx(1.0 / 9.0).epsilon(1e-15));
    CHECK(c.b1[1] == doctest::Approx(-1.0 / 9.0).epsilon(1e-15));
    CHECK(c.b1[2] == 0.0);
    CHECK(c.b2[0] == doctest::Approx(1.0 / 9.0).epsilon(1e-15));
    CHECK(c.b2[1] == doctest::Approx(-2.0 / 9.0).epsilon(1e-15));
    CHECK(c.b2[2] == doctest::Approx(1.0 / 9.0).epsilon(1e-15));
}

TEST_CASE("default design has a double real pole at 2/3") {
    const BankCoefficients c = design_bank(FilterDesign{0.25, 1.0, 1.0});
    // z^2 + a1 z + a2 = (z - p)^2 requires a1^2 = 4 a2
    CHECK(c.a[1] * c.a[1] == doctest::Approx(4.0 * c.a[2]).epsilon(1e-14));
    CHECK(-c.a[1] / 2.0 == doctest::Approx(2.0 / 3.0).epsilon(1e-14));
}

TEST_CASE("poles are inside the unit circle for a range of designs") {
    for (double l0 : {0.01, 0.25, 1.0, 10.0})
        for (double l1 : {0.1, 1.0, 5.0})
            for (double ts : {0.1, 1.0, 2.0}) {
                const BankCoefficients c = design_bank(FilterDesign{l0, l1, ts});
                // |roots| via the companion characteristic: for z^2+a1 z+a2,
                // stability iff |a2| < 1 and |a1| < 1 + a2
                CHECK(std::abs(c.a[2]) < 1.0);
                CHECK(std::abs(c.a[1]) < 1.0 + c.a[2]);
            }
}

TEST_CASE("dc gains: unit for the smoother, zero for both differentiators") {
    const DerivativeBank bank(FilterDesign{0.25, 1.0, 1.0});
    CHECK(bank.g0().dc_gain() == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(bank.g1().dc_gain() == doctest::Approx(0.0).epsilon(1e-14));
    CHECK(bank.g2().dc_gain() == doctest::Approx(0.0).epsilon(1e-14));
}

TEST_CASE("warm start yields steady state from the first sample") {
    DerivativeBank bank(FilterDesign{0.25, 1.0, 1.0});
    bank.warm_start(2.5);
    for (int k = 0; k < 50; ++k) {
        const auto y = bank.step(2.5);
        CHECK(y[0] == doctest::Approx(2.5).epsilon(1e-13));
        CHECK(y[1] == doctest::Approx(0.0).epsilon(1e-13));
        CHECK(y[2] == doctest::Approx(0.0).epsilon(1e-13));
    }
}

TEST_CASE("outputs are exact backward differences of the smoothed signal") {
    // G1 = G0 * (1 - z^-1)/ts and G2 = G1 * (1 - z^-1)/ts hold as exact
    // z-domain identities, so the sampled outputs must satisfy them too.
    const double ts = 0.5;
    DerivativeBank bank(FilterDesign{0.25, 1.0, ts});
    std::mt19937 rng(42);
    std::uniform_real_distribution<double> u(-2.0, 2.0);
    bank.warm_start(0.0);
    double y0_prev = 0.0, y1_prev = 0.0;
    for (int k = 0; k < 2000; ++k) {
        const auto y = bank.step(u(rng));
        if (k > 0) {
            CHECK(y[1] == doctest::Approx((y[0] - y0_prev) / ts).epsilon(1e-10));
            CHECK(y[2] == doctest::Approx((y[1] - y1_prev) / ts).epsilon(1e-10));
        }
        y0_prev = y[0];
        y1_prev = y[1];
    }
}

TEST_CASE("ramp input: derivative output settles to the slope") {
    DerivativeBank bank(FilterDesign{0.25, 1.0, 1.0});
    const double slope = 0.01;
    bank.warm_start(1.0);
    std::array<double, 3> y{};
    for (int k = 0; k < 3000; ++k) y = bank.step(1.0 + slope * k);
    CHECK(y[1] == doctest::Approx(slope).epsilon(1e-9));
    CHECK(y[2] == doctest::Approx(0.0).epsilon(1e-9));
}

TEST_CASE("impulse response of the smoother sums to one") {
    DerivativeBank bank(FilterDesign{0.25, 1.0, 1.0});
    double acc = bank.step(1.0)[0];
    for (int k = 0; k < 400; ++k) acc += bank.step(0.0)[0];
    CHECK(acc == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("non-finite input throws and leaves state untouched") {
    DerivativeBank a(FilterDesign{0.25, 1.0, 1.0}), b(FilterDesign{0.25, 1.0, 1.0});
    a.warm_start(1.0);
    b.warm_start(1.0);
    a.step(0.3);
    b.step(0.3);
    CHECK_THROWS_AS(a.step(std::nan("")), std::invalid_argument);
    CHECK_THROWS_AS(a.step(std::numeric_limits<double>::infinity()), std::invalid_argument);
    // identical continuation proves the failed call did not mutate state
    for (int k = 0; k < 5; ++k) {
        const auto ya = a.step(0.7), yb = b.step(0.7);
        CHECK(ya[0] == yb[0]);
        CHECK(ya[1] == yb[1]);
        CHECK(ya[2] == yb[2]);
    }
}

TEST_CASE("invalid designs are rejected") {
    CHECK_THROWS_AS(design_bank(FilterDesign{0.0, 1.0, 1.0}), std::invalid_argument);
    CHECK_THROWS_AS(design_bank(FilterDesign{-0.25, 1.0, 1.0}), std::invalid_argument);
    CHECK_THROWS_AS(design_bank(FilterDesign{0.25, 0.0, 1.0}), std::invalid_argument);
    CHECK_THROWS_AS(design_bank(FilterDesign{0.25, 1.0, 0.0}), std::invalid_argument);
    CHECK_THROWS_AS(design_bank(FilterDesign{0.25, 1.0, -1.0}), std::invalid_argument);
}

TEST_CASE("sample period scales the response consistently") {
    // halving ts and doubling the step count tracks the same continuous ramp
    DerivativeBank coarse(FilterDesign{0.25, 1.0, 1.0});
    DerivativeBank fine(FilterDesign{0.25, 1.0, 0.5});
    coarse.warm_start(0.0);
    fine.warm_start(0.0);
    std::array<double, 3> yc{}, yf{};
    for (int k = 1; k <= 2000; ++k) yc = coarse.step(0.02 * k);
    for (int k = 1; k <= 4000; ++k) yf = fine.step(0.01 * k);
    CHECK(yc[1] == doctest::Approx(0.02).epsilon(1e-6));
    CHECK(yf[1] == doctest::Approx(0.02).epsilon(1e-6)); // same slope per second
}

} // TEST_SUITE
