#pragma once
#include <cstddef>
#include <optional>

#include "sockit/condition_eval.hpp"
#include "sockit/filter.hpp"
#include "sockit/fusion.hpp"
#include "sockit/hysteresis.hpp"
#include "sockit/ocv_map.hpp"
#include "sockit/param_estimation.hpp"

namespace sockit {

struct TelemetrySample {
    double t;   // seconds, strictly increasing on the configured grid
    double i;   // measured current (A), positive = discharge
    double v_t; // measured terminal voltage (V)
};

struct EstimateRecord {
    double t;
    double soc_est;    // fused estimate
    double soc_ocv_h;  // SOC from inverting the estimated OCV (diagnostic)
    double cov_soc;    // measurement variance fed to the fusion
    double ocv_est;    // estimated OCV (filtered terminal voltage in warm-up)
    double h;          // hysteresis state used for the inversion
    double gain;       // fusion gain (0 while warm-up gates the update)
    bool warmup;       // regression window not yet full
    bool saturated;    // OCV inversion hit the end of the map slice
    bool plausible;    // parameter plausibility diagnostic (true in warm-up)
};

struct PipelineConfig {
    FilterDesign filter{};      // shared by the current and voltage banks
    std::size_t window_n = 100; // regression window length
    std::size_t stride = 1;     // solve every `stride` samples once full
    double epsilon = 1e-8;      // ridge used by the estimator
    double hyst_c = 1.2;
    double h0 = 0.0;
    ConditionConfig condition{};
    double soc0 = 0.5;          // initial SOC guess
    double p0 = 0.25;
    double c_p = 4320.0;
    double sigma_i = 0.01;
};

// End-to-end per-sample SOC estimator. Per step, in order: advance the
// filter banks, push the regressor row, solve the window (or gate during
// warm-up), update hysteresis from the previous current, invert the map,
// evaluate the measurement variance, then fuse with Coulomb counting.
// Exactly one record per accepted sample.
class Pipeline {
public:
    explicit Pipeline(const PipelineConfig& cfg, const OcvMap& map);

    // Throws std::invalid_argument on a non-finite sample or a timestamp that
    // is not one configured period after the previous one (state unchanged).
    EstimateRecord step(const TelemetrySample& s);

    std::size_t steps() const { return count_; }
    const ParameterVector& theta() const { return theta_; } // last solved

private:
    PipelineConfig cfg_;
    const OcvMap& map_;
    DerivativeBank bank_i_;
    DerivativeBank bank_v_;
    RegressorWindow window_;
    HysteresisTracker hyst_;
    FusionState fusion_;
    ParameterVector theta_{};
    double cached_cov_ocv_ = 0.0;
    bool have_theta_ = false;
    std::size_t sample_in_stride_ = 0;
    double i_prev_ = 0.0;
    double t_prev_ = 0.0;
    std::size_t count_ = 0;
};

} // namespace sockit
