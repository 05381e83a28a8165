#pragma once
#include <vector>

namespace sockit {

// One-state hysteresis tracker. Positive current discharges; discharge drives
// the state toward -1, charge toward +1. The per-step decay uses the previous
// sample's current:
//   w = exp(-|i_prev| * dt / c),  h <- w*h + (1-w)*sign(-i_prev)
// Zero current leaves h unchanged.
class HysteresisTracker {
public:
    // c is the current scale in ampere-seconds per unit step (throws if <= 0).
    HysteresisTracker(double c, double h0, double dt = 1.0);

    double advance(double i_prev); // returns updated h
    double h() const { return h_; }

private:
    double c_, dt_, h_;
};

// Batch helper: h[0] = h0, h[k] driven by i[k-1].
std::vector<double> hysteresis_series(const std::vector<double>& i, double c,
                                      double h0, double dt = 1.0);

} // namespace sockit
