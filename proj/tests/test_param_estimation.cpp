#include <stdexcept>
#include <doctest.h>

#include "sockit/filter.hpp"
#include "sockit/param_estimation.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

using namespace sockit;

namespace {

// Second-order RC cell with constant open-circuit voltage: the regression
// model holds exactly, so least squares must recover the analytic
// coefficients. Derived independently from the branch time constants:
//   gamma_i = a_i*T/(1-a_i), a_i = exp(-T/tau_i)
struct TruthCoefficients {
    double ocv, a, b, c, d, e;
};

TruthCoefficients analytic_theta(double r0, double r1, double c1, double r2, double c2,
                                 double ts, double ocv) {
    const double a1 = std::exp(-ts / (r1 * c1));
    const double a2 = std::exp(-ts / (r2 * c2));
    const double g1 = a1 * ts / (1.0 - a1);
    const double g2 = a2 * ts / (1.0 - a2);
    TruthCoefficients t;
    t.ocv = ocv;
    t.d = g1 * g2;
    t.e = g1 + g2;
    t.c = r0 + r1 + r2;
    t.b = r0 * (g1 + g2) + r1 * (g2 - ts) + r2 * (g1 - ts);
    t.a = r0 * g1 * g2 - ts * (r1 * g2 + r2 * g1);
    return t;
}

// currents: quiet start (so warm-started filters see a consistent
// pre-history), then band-limited excitation
std::vector<double> excitation(std::size_t n, unsigned seed) {
    std::mt19937 rng(seed);
    std::normal_distribution<double> g(0.0, 1.0);
    std::vector<double> i(n, 0.0);
    double x = 0.0;
    const double rho = std::exp(-1.0 / 10.0);
    for (std::size_t k = 10; k < n; ++k) {
        x = rho * x + std::sqrt(1 - rho * rho) * g(rng);
        i[k] = std::clamp(x, -3.0, 3.0);
    }
    return i;
}

std::vector<double> terminal_voltage(const std::vector<double>& i, double r0, double r1,
                                     double c1, double r2, double c2, double ocv, double ts) {
    const double a1 = std::exp(-ts / (r1 * c1));
    const double a2 = std::exp(-ts / (r2 * c2));
    std::vector<double> v(i.size());
    double v1 = 0.0, v2 = 0.0;
    for (std::size_t k = 0; k < i.size(); ++k) {
        if (k > 0) {
            v1 = a1 * v1 + r1 * (1.0 - a1) * i[k - 1];
            v2 = a2 * v2 + r2 * (1.0 - a2) * i[k - 1];
        }
        v[k] = ocv - r0 * i[k] - v1 - v2;
    }
    return v;
}

RegressorWindow fill_window(const std::vector<double>& i, const std::vector<double>& v,
                            std::size_t n_window) {
    DerivativeBank bi(FilterDesign{0.25, 1.0, 1.0}), bv(FilterDesign{0.25, 1.0, 1.0});
    bi.warm_start(i[0]);
    bv.warm_start(v[0]);
    RegressorWindow w(n_window);
    for (std::size_t k = 0; k < i.size(); ++k) {
        const auto yi = bi.step(i[k]);
        const auto yv = bv.step(v[k]);
        w.push_row({{1.0, -yi[2], -yi[1], -yi[0], -yv[2], -yv[1]}, yv[0]});
    }
    return w;
}

double residual_rms(const RegressorWindow& w, const ParameterVector& th) {
    const double t[6] = {th.ocv, th.a, th.b, th.c, th.d, th.e};
    double acc = 0.0;
    for (std::size_t k = 0; k < w.size(); ++k) {
        double pred = 0.0;
        for (int j = 0; j < 6; ++j) pred += w.at(k).phi[j] * t[j];
        const double r = pred - w.at(k).target;
        acc += r * r;
    }
    return std::sqrt(acc / static_cast<double>(w.size()));
}

} // namespace

TEST_SUITE("param_estimation") {

TEST_CASE("the analytic coefficients zero the regression residual") {
    // The six-parameter relation is exact on a matched plant with constant
    // open-circuit voltage: plugging the analytic coefficients into settled
    // regressor rows leaves only accumulated roundoff.
    const double r0 = 0.05, r1 = 0.03, c1 = 1000.0, r2 = 0.02, c2 = 5000.0, ocv = 3.3;
    const auto i = excitation(400, 17);
    const auto v = terminal_voltage(i, r0, r1, c1, r2, c2, ocv, 1.0);
    const RegressorWindow w = fill_window(i, v, 100);
    const TruthCoefficients t = analytic_theta(r0, r1, c1, r2, c2, 1.0, ocv);
    const ParameterVector th{t.ocv, t.a, t.b, t.c, t.d, t.e};
    double worst = 0.0;
    const double tt[6] = {t.ocv, t.a, t.b, t.c, t.d, t.e};
    for (std::size_t k = 0; k < w.size(); ++k) {
        double pred = 0.0;
        for (int j = 0; j < 6; ++j) pred += w.at(k).phi[j] * tt[j];
        worst = std::max(worst, std::abs(pred - w.at(k).target));
    }
    CHECK(worst < 1e-9); // measured ~4e-12
    CHECK(th.plausible());
}

TEST_CASE("least squares recovers the coefficients on a matched plant") {
    // The second-derivative directions carry little energy, so recovering the
    // full vector needs a long window and a ridge small enough not to bias
    // the large coefficients (d ~ 2936 at these time constants).
    const double r0 = 0.05, r1 = 0.03, c1 = 1000.0, r2 = 0.02, c2 = 5000.0, ocv = 3.3;
    const auto i = excitation(1300, 17);
    const auto v = terminal_voltage(i, r0, r1, c1, r2, c2, ocv, 1.0);
    const RegressorWindow w = fill_window(i, v, 1000);
    const EstimateResult res = estimate_parameters(w, 1e-14);
    const TruthCoefficients t = analytic_theta(r0, r1, c1, r2, c2, 1.0, ocv);
    // measured worst component deviation ~4.8e-5 relative; ocv ~1.9e-8 abs
    CHECK(res.theta.ocv == doctest::Approx(t.ocv).epsilon(1e-7));
    CHECK(res.theta.a == doctest::Approx(t.a).epsilon(1e-3));
    CHECK(res.theta.b == doctest::Approx(t.b).epsilon(1e-3));
    CHECK(res.theta.c == doctest::Approx(t.c).epsilon(1e-4));
    CHECK(res.theta.d == doctest::Approx(t.d).epsilon(1e-3));
    CHECK(res.theta.e == doctest::Approx(t.e).epsilon(1e-3));
    CHECK(residual_rms(w, res.theta) < 1e-6); // measured ~6.4e-8
    CHECK(res.theta.plausible());
    CHECK(res.condition > 1.0);
    CHECK(std::isfinite(res.condition));
}

TEST_CASE("analytic coefficients against frozen reference values") {
    const TruthCoefficients t = analytic_theta(0.05, 0.03, 1000.0, 0.02, 5000.0, 1.0, 3.3);
    CHECK(t.a == doctest::Approx(143.202467914).epsilon(1e-9));
    CHECK(t.b == doctest::Approx(9.975261107).epsilon(1e-9));
    CHECK(t.c == doctest::Approx(0.1).epsilon(1e-12));
    CHECK(t.d == doctest::Approx(2935.550969378).epsilon(1e-9));
    CHECK(t.e == doctest::Approx(129.003611058).epsilon(1e-9));
    CHECK(t.e * t.e > 4.0 * t.d); // real, distinct time constants
}

TEST_CASE("constant current bias shifts the fitted ocv by c*beta") {
    const double r0 = 0.05, r1 = 0.03, c1 = 1000.0, r2 = 0.02, c2 = 5000.0, ocv = 3.3;
    const double beta = -0.05;
    const auto i = excitation(1300, 29);
    const auto v = terminal_voltage(i, r0, r1, c1, r2, c2, ocv, 1.0);
    std::vector<double> i_biased(i);
    for (double& x : i_biased) x += beta;
    const EstimateResult clean = estimate_parameters(fill_window(i, v, 1000), 1e-14);
    const EstimateResult biased = estimate_parameters(fill_window(i_biased, v, 1000), 1e-14);
    const double expected_shift = biased.theta.c * beta; // -5 mV at c=0.1
    CHECK(biased.theta.ocv - clean.theta.ocv ==
          doctest::Approx(expected_shift).epsilon(1e-6));
    CHECK(biased.theta.c == doctest::Approx(0.1).epsilon(1e-3));
    // the bias must not leak into the dynamic terms
    CHECK(biased.theta.d == doctest::Approx(clean.theta.d).epsilon(1e-4));
    CHECK(biased.theta.e == doctest::Approx(clean.theta.e).epsilon(1e-4));
}

TEST_CASE("voltage offset moves only the ocv term") {
    const auto i = excitation(400, 31);
    const auto v = terminal_voltage(i, 0.05, 0.03, 1000.0, 0.02, 5000.0, 3.3, 1.0);
    std::vector<double> v_shift(v);
    for (double& x : v_shift) x += 0.1;
    const EstimateResult base = estimate_parameters(fill_window(i, v, 100));
    const EstimateResult shifted = estimate_parameters(fill_window(i, v_shift, 100));
    CHECK(shifted.theta.ocv - base.theta.ocv == doctest::Approx(0.1).epsilon(1e-9));
    CHECK(shifted.theta.c == doctest::Approx(base.theta.c).epsilon(1e-9));
    // the ridge couples the constant column weakly into the others
    CHECK(shifted.theta.d == doctest::Approx(base.theta.d).epsilon(1e-4));
}

TEST_CASE("window keeps only the most recent rows") {
    std::mt19937 rng(3);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    RegressorWindow incremental(10);
    std::vector<RegressorRow> all;
    for (int k = 0; k < 25; ++k) {
        RegressorRow row{{1.0, u(rng), u(rng), u(rng), u(rng), u(rng)}, u(rng)};
        all.push_back(row);
        incremental.push_row(row);
    }
    RegressorWindow fresh(10);
    for (int k = 15; k < 25; ++k) fresh.push_row(all[static_cast<std::size_t>(k)]);
    REQUIRE(incremental.full());
    for (std::size_t k = 0; k < 10; ++k)
        for (int j = 0; j < 6; ++j) CHECK(incremental.at(k).phi[j] == fresh.at(k).phi[j]);
    const EstimateResult a = estimate_parameters(incremental);
    const EstimateResult b = estimate_parameters(fresh);
    CHECK(a.theta.ocv == b.theta.ocv);
    CHECK(a.theta.e == b.theta.e);
}

TEST_CASE("degenerate excitation inflates the condition number") {
    RegressorWindow rich(20), flat(20);
    std::mt19937 rng(9);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (int k = 0; k < 20; ++k) {
        rich.push_row({{1.0, u(rng), u(rng), u(rng), u(rng), u(rng)}, u(rng)});
        flat.push_row({{1.0, 0.0, 0.0, -0.3, 0.0, 0.0}, 3.3}); // settled constant current
    }
    const double cond_rich = estimate_parameters(rich).condition;
    const double cond_flat = estimate_parameters(flat).condition;
    CHECK(cond_flat > 1e6 * cond_rich);
}

TEST_CASE("plausibility diagnostics") {
    CHECK(ParameterVector{3.3, 143.2, 9.98, 0.1, 2935.6, 129.0}.plausible());
    CHECK_FALSE(ParameterVector{3.3, 143.2, 9.98, -0.1, 2935.6, 129.0}.plausible());
    CHECK_FALSE(ParameterVector{3.3, 143.2, 9.98, 0.1, -2935.6, 129.0}.plausible());
    CHECK_FALSE(ParameterVector{3.3, 143.2, 9.98, 0.1, 2935.6, -129.0}.plausible());
    // complex pole pair: e^2 < 4d
    CHECK_FALSE(ParameterVector{3.3, 143.2, 9.98, 0.1, 2935.6, 10.0}.plausible());
}

TEST_CASE("input validation") {
    CHECK_THROWS_AS(RegressorWindow(5), std::invalid_argument);
    RegressorWindow w(6);
    CHECK_THROWS_AS(w.push_row({{0.9, 0, 0, 0, 0, 0}, 1.0}), std::invalid_argument);
    CHECK_THROWS_AS(w.push_row({{1.0, std::nan(""), 0, 0, 0, 0}, 1.0}), std::invalid_argument);
    CHECK_THROWS_AS(w.push_row({{1.0, 0, 0, 0, 0, 0}, std::nan("")}), std::invalid_argument);
    CHECK_THROWS_AS(estimate_parameters(w), std::logic_error);
    w.push_row({{1.0, 1, 2, 3, 4, 5}, 1.0});
    CHECK(w.size() == 1);
    CHECK_THROWS_AS(estimate_parameters(w), std::logic_error);
    CHECK_THROWS_AS(w.at(1), std::out_of_range);
}

} // TEST_SUITE
