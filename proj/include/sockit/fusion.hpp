#pragma once

namespace sockit {

// Scalar Kalman-style fusion of Coulomb-counting prediction with the
// OCV-derived SOC measurement, weighted by the measurement variance reported
// by the condition evaluation.
struct FusionConfig {
    double soc0 = 0.5;      // initial SOC estimate
    double p0 = 0.25;       // initial estimate variance
    double c_p = 4320.0;    // cell capacity (A*s)
    double dt = 1.0;        // sample period (s)
    double sigma_i = 0.01;  // current-sensor noise std (A)
};

struct FusionState {
    double soc_est;
    double p_m;   // posterior variance
    double v_i;   // per-step process noise (sigma_i * dt / c_p)^2
    double c_p;
    double dt;
};

FusionState init_fusion(const FusionConfig& cfg); // validates, throws on bad fields

struct FusionPrediction {
    double soc_cc; // Coulomb-counted prior, clamped to [0, 1]
    double p_p;    // prior variance
};

// Propagate one step using the previous sample's current (positive =
// discharge).
FusionPrediction fusion_predict(const FusionState& st, double i_prev);

struct FusionUpdate {
    double soc_est; // posterior estimate, clamped to [0, 1]
    double p_m;     // posterior variance
    double gain;    // Kalman gain in [0, 1)
};

// Blend the prior with a SOC measurement of variance cov_meas. Pure function;
// callers commit the result into the state explicitly.
FusionUpdate fusion_update(const FusionPrediction& pred, double soc_meas, double cov_meas);

} // namespace sockit
