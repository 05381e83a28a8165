#pragma once
#include <Eigen/Dense>

#include "sockit/ocv_map.hpp"
#include "sockit/param_estimation.hpp"

namespace sockit {

struct ConditionConfig {
    double sigma_vt = 0.002;        // filtered-voltage noise std (V)
    double epsilon = 1e-8;          // diagonal loading, matches the estimator ridge
    double cov_ceiling = 1e4;       // cap on cov_soc
    double inv_slope_ceiling = 2e4; // cap on |d soc / d ocv| (1/V)
};

// Stacked regressor rows of a full window as an N x 6 design matrix, row k =
// phi of the k-th oldest sample. Throws std::logic_error if not full.
Eigen::MatrixXd sensitivity_matrix(const RegressorWindow& w);

// Regularized information matrix F = S^T S / sigma_vt^2 + epsilon*I.
Eigen::Matrix<double, 6, 6> information_matrix(const Eigen::MatrixXd& s,
                                               const ConditionConfig& cfg);
// Same from a precomputed Gram matrix G = S^T S (shared with the estimator).
Eigen::Matrix<double, 6, 6> information_from_gram(const Eigen::Matrix<double, 6, 6>& g,
                                                  const ConditionConfig& cfg);

// Lower bound on the OCV-estimate variance: [F^-1]_00, computed by solving
// F x = e0 with a symmetric factorization (no explicit inverse).
double ocv_variance(const Eigen::Matrix<double, 6, 6>& f);

struct ConditionReport {
    double cov_ocv;  // [F^-1]_00
    double slope;    // |d soc / d ocv| at the linearization point
    double cov_soc;  // min(slope^2 * cov_ocv, cov_ceiling)
    bool capped;
};

// Map the OCV variance through the inverse-map slope at (h, soc_prev), where
// soc_prev is the previous fused estimate (the linearization point).
ConditionReport soc_variance(double cov_ocv, const OcvMap& map, double h, double soc_prev,
                             const ConditionConfig& cfg);

} // namespace sockit
