#pragma once
#include <array>

namespace sockit {

// Continuous prototype G0(s) = lambda0 / (s^2 + lambda1 s + lambda0),
// discretized by the backward-difference substitution s -> (z - 1) / (ts * z).
// The bank exposes the smoothing filter G0 and the smoothed first/second
// derivative filters G1 = s*G0, G2 = s^2*G0 sharing one denominator.
struct FilterDesign {
    double lambda0 = 0.25;
    double lambda1 = 1.0;
    double ts = 1.0;
};

// Second-order transfer function (b0 + b1 z^-1 + b2 z^-2) /
// (1 + a1 z^-1 + a2 z^-2) realized in controllable canonical state space.
class BiquadFilter {
public:
    BiquadFilter(const std::array<double, 3>& b, const std::array<double, 3>& a);

    // Advance one sample. Throws std::invalid_argument on non-finite input
    // without mutating state.
    double step(double u);

    // Reset state so that a subsequent constant input `u0` produces the
    // steady-state output dc_gain()*u0 from the first sample onward.
    void warm_start(double u0);
    void reset();

    double dc_gain() const;
    const std::array<double, 3>& num() const { return b_; }
    const std::array<double, 3>& den() const { return a_; }

private:
    std::array<double, 3> b_; // b0, b1, b2
    std::array<double, 3> a_; // 1, a1, a2
    double x1_ = 0.0, x2_ = 0.0;
};

// Coefficients for branch k (0, 1, or 2) of the derivative bank. Throws on
// non-positive lambda0, lambda1, or ts.
struct BankCoefficients {
    std::array<double, 3> b0, b1, b2; // numerators for G0, G1, G2
    std::array<double, 3> a;          // shared denominator {1, a1, a2}
};
BankCoefficients design_bank(const FilterDesign& d);

// Three-output filter bank: value, first derivative, second derivative.
class DerivativeBank {
public:
    explicit DerivativeBank(const FilterDesign& d);

    std::array<double, 3> step(double u);
    void warm_start(double u0);

    const BiquadFilter& g0() const { return g0_; }
    const BiquadFilter& g1() const { return g1_; }
    const BiquadFilter& g2() const { return g2_; }

private:
    explicit DerivativeBank(const BankCoefficients& c);
    BiquadFilter g0_, g1_, g2_;
};

} // namespace sockit
