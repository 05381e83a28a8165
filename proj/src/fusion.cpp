#include "sockit/fusion.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace sockit {

FusionState init_fusion(const FusionConfig& cfg) {
    if (!(cfg.soc0 >= 0.0 && cfg.soc0 <= 1.0))
        throw std::invalid_argument("fusion: soc0 must be in [0, 1]");
    if (!(cfg.p0 > 0.0)) throw std::invalid_argument("fusion: p0 must be > 0");
    if (!(cfg.c_p > 0.0)) throw std::invalid_argument("fusion: c_p must be > 0");
    if (!(cfg.dt > 0.0)) throw std::invalid_argument("fusion: dt must be > 0");
    if (!(cfg.sigma_i > 0.0)) throw std::invalid_argument("fusion: sigma_i must be > 0");
    const double vi = cfg.sigma_i * cfg.dt / cfg.c_p;
    return {cfg.soc0, cfg.p0, vi * vi, cfg.c_p, cfg.dt};
}

FusionPrediction fusion_predict(const FusionState& st, double i_prev) {
    if (!std::isfinite(i_prev))
        throw std::invalid_argument("fusion_predict: non-finite current");
    const double soc_cc = std::clamp(st.soc_est - i_prev * st.dt / st.c_p, 0.0, 1.0);
    return {soc_cc, st.p_m + st.v_i};
}

FusionUpdate fusion_update(const FusionPrediction& pred, double soc_meas, double cov_meas) {
    if (!std::isfinite(soc_meas))
        throw std::invalid_argument("fusion_update: non-finite measurement");
    if (!(cov_meas > 0.0) || !std::isfinite(cov_meas))
        throw std::invalid_argument("fusion_update: cov_meas must be finite and > 0");
    const double k = pred.p_p / (pred.p_p + cov_meas);
    const double soc = std::clamp(pred.soc_cc + k * (soc_meas - pred.soc_cc), 0.0, 1.0);
    return {soc, (1.0 - k) * pred.p_p, k};
}

} // namespace sockit
