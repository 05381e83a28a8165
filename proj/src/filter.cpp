#include "sockit/filter.hpp"

#include <cmath>
#include <stdexcept>

namespace sockit {

BiquadFilter::BiquadFilter(const std::array<double, 3>& b, const std::array<double, 3>& a)
    : b_(b), a_(a) {
    if (a_[0] != 1.0) throw std::invalid_argument("BiquadFilter: denominator must be monic");
}

double BiquadFilter::step(double u) {
    if (!std::isfinite(u)) throw std::invalid_argument("BiquadFilter::step: non-finite input");
    // controllable canonical form:
    //   w[k] = u[k] - a1*x1 - a2*x2,  y[k] = b0*w[k] + b1*x1 + b2*x2
    const double w = u - a_[1] * x1_ - a_[2] * x2_;
    const double y = b_[0] * w + b_[1] * x1_ + b_[2] * x2_;
    x2_ = x1_;
    x1_ = w;
    return y;
}

void BiquadFilter::warm_start(double u0) {
    if (!std::isfinite(u0)) throw std::invalid_argument("BiquadFilter::warm_start: non-finite input");
    // steady state of w: w* = u0 - a1*w* - a2*w*  =>  w* = u0 / (1 + a1 + a2)
    const double den = 1.0 + a_[1] + a_[2];
    const double w = u0 / den;
    x1_ = w;
    x2_ = w;
}

void BiquadFilter::reset() { x1_ = x2_ = 0.0; }

double BiquadFilter::dc_gain() const {
    return (b_[0] + b_[1] + b_[2]) / (1.0 + a_[1] + a_[2]);
}

BankCoefficients design_bank(const FilterDesign& d) {
    if (!(d.lambda0 > 0.0)) throw std::invalid_argument("design_bank: lambda0 must be > 0");
    if (!(d.lambda1 > 0.0)) throw std::invalid_argument("design_bank: lambda1 must be > 0");
    if (!(d.ts > 0.0)) throw std::invalid_argument("design_bank: ts must be > 0");
    const double l0 = d.lambda0, l1 = d.lambda1, T = d.ts;
    // G0(s) = l0 / (s^2 + l1 s + l0); s = (z-1)/(T z). Multiplying the
    // denominator through by (T z)^2:
    //   den(z) = (l0 T^2 + l1 T + 1) z^2 - (l1 T + 2) z + 1
    const double alpha = l0 * T * T + l1 * T + 1.0;
    BankCoefficients c;
    c.a = {1.0, -(l1 * T + 2.0) / alpha, 1.0 / alpha};
    c.b0 = {l0 * T * T / alpha, 0.0, 0.0};
    c.b1 = {l0 * T / alpha, -l0 * T / alpha, 0.0};
    c.b2 = {l0 / alpha, -2.0 * l0 / alpha, l0 / alpha};
    return c;
}

DerivativeBank::DerivativeBank(const FilterDesign& d) : DerivativeBank(design_bank(d)) {}

DerivativeBank::DerivativeBank(const BankCoefficients& c)
    : g0_(c.b0, c.a), g1_(c.b1, c.a), g2_(c.b2, c.a) {}

std::array<double, 3> DerivativeBank::step(double u) {
    return {g0_.step(u), g1_.step(u), g2_.step(u)};
}

void DerivativeBank::warm_start(double u0) {
    g0_.warm_start(u0);
    g1_.warm_start(u0);
    g2_.warm_start(u0);
}

} // namespace sockit
