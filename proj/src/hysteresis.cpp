#include "sockit/hysteresis.hpp"

#include <cmath>
#include <stdexcept>

namespace sockit {

HysteresisTracker::HysteresisTracker(double c, double h0, double dt)
    : c_(c), dt_(dt), h_(h0) {
    if (!(c > 0.0)) throw std::invalid_argument("HysteresisTracker: c must be > 0");
    if (!(dt > 0.0)) throw std::invalid_argument("HysteresisTracker: dt must be > 0");
    if (!(h0 >= -1.0 && h0 <= 1.0))
        throw std::invalid_argument("HysteresisTracker: h0 must be in [-1, 1]");
}

double HysteresisTracker::advance(double i_prev) {
    if (!std::isfinite(i_prev))
        throw std::invalid_argument("HysteresisTracker::advance: non-finite current");
    const double w = std::exp(-std::abs(i_prev) * dt_ / c_);
    const double s = i_prev > 0.0 ? -1.0 : (i_prev < 0.0 ? 1.0 : 0.0);
    h_ = w * h_ + (1.0 - w) * s;
    return h_;
}

std::vector<double> hysteresis_series(const std::vector<double>& i, double c,
                                      double h0, double dt) {
    HysteresisTracker trk(c, h0, dt);
    std::vector<double> h(i.size());
    if (i.empty()) return h;
    h[0] = h0;
    for (std::size_t k = 1; k < i.size(); ++k) h[k] = trk.advance(i[k - 1]);
    return h;
}

} // namespace sockit
