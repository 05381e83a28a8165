#pragma once
#include <Eigen/Dense>

#include <array>
#include <string>
#include <vector>

#include "sockit/ocv_map.hpp"

namespace sockit {

// RC parameter table indexed by SOC, linearly interpolated (clamped at the
// ends). CSV layout: header "soc,r0,r1,c1,r2,c2".
class RcTable {
public:
    struct Entry {
        double r0, r1, c1, r2, c2;
    };

    RcTable(std::vector<double> soc_knots, std::vector<Entry> entries);

    // Constant table sampled every 5% SOC from the nominal plant values.
    static RcTable fixture();
    static RcTable load(const std::string& path);
    void save(const std::string& path) const;

    Entry at(double soc) const;
    const std::vector<double>& soc_knots() const { return soc_; }

private:
    std::vector<double> soc_;
    std::vector<Entry> entries_;
};

struct UkfConfig {
    double soc0 = 0.5;
    double alpha = 1e-3, beta = 2.0, kappa = 0.0;
    Eigen::Vector3d q{1e-10, 1e-8, 1e-8}; // process noise diagonal
    double r = 2.5e-5;                    // measurement noise variance (5 mV)^2
    Eigen::Vector3d p0{0.25, 1e-6, 1e-6}; // initial covariance diagonal
    double c_p = 4320.0;
    double dt = 1.0;
};

// Unscented Kalman filter over state [soc, v_rc1, v_rc2] with the h = 0 OCV
// slice as measurement model (linearly extrapolated beyond the grid so sigma
// points never collapse onto a clamp).
class UkfEstimator {
public:
    UkfEstimator(const UkfConfig& cfg, const OcvMap& map, const RcTable& rc);

    // One sample: propagate with the previous current, then update with the
    // measured voltage (i is this sample's current, used in the measurement).
    double step(double i, double v_t);

    double soc() const { return x_[0]; }
    const Eigen::Vector3d& state() const { return x_; }
    const Eigen::Matrix3d& cov() const { return p_; }
    int repairs() const { return repairs_; } // covariance eigenvalue repairs

private:
    double measure(double soc, double v1, double v2, double i, double r0) const;

    UkfConfig cfg_;
    const OcvMap& map_;
    RcTable rc_;
    std::vector<double> slice0_; // h = 0 OCV slice cached over the SOC knots
    double edge_lo_slope_, edge_hi_slope_;
    double lambda_;
    std::array<double, 7> wm_{}, wc_{};
    Eigen::Vector3d x_;
    Eigen::Matrix3d p_;
    double i_prev_ = 0.0;
    bool first_ = true;
    int repairs_ = 0;
};

} // namespace sockit
