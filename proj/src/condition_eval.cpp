#include "sockit/condition_eval.hpp"

#include <cmath>
#include <stdexcept>

namespace sockit {

Eigen::MatrixXd sensitivity_matrix(const RegressorWindow& w) {
    if (!w.full())
        throw std::logic_error("sensitivity_matrix: window not full (" +
                               std::to_string(w.size()) + "/" + std::to_string(w.capacity()) +
                               " rows)");
    Eigen::MatrixXd s(static_cast<Eigen::Index>(w.size()), 6);
    for (std::size_t k = 0; k < w.size(); ++k)
        for (int j = 0; j < 6; ++j) s(static_cast<Eigen::Index>(k), j) = w.at(k).phi[j];
    return s;
}

static void check_cfg(const ConditionConfig& cfg) {
    if (!(cfg.sigma_vt > 0.0))
        throw std::invalid_argument("condition: sigma_vt must be > 0");
    if (!(cfg.epsilon > 0.0))
        throw std::invalid_argument("condition: epsilon must be > 0");
    if (!(cfg.cov_ceiling > 0.0))
        throw std::invalid_argument("condition: cov_ceiling must be > 0");
}

Eigen::Matrix<double, 6, 6> information_matrix(const Eigen::MatrixXd& s,
                                               const ConditionConfig& cfg) {
    check_cfg(cfg);
    if (s.cols() != 6)
        throw std::invalid_argument("information_matrix: design matrix must have 6 columns");
    Eigen::Matrix<double, 6, 6> f = (s.transpose() * s) / (cfg.sigma_vt * cfg.sigma_vt);
    f.diagonal().array() += cfg.epsilon;
    return f;
}

Eigen::Matrix<double, 6, 6> information_from_gram(const Eigen::Matrix<double, 6, 6>& g,
                                                  const ConditionConfig& cfg) {
    check_cfg(cfg);
    Eigen::Matrix<double, 6, 6> f = g / (cfg.sigma_vt * cfg.sigma_vt);
    f.diagonal().array() += cfg.epsilon;
    return f;
}

double ocv_variance(const Eigen::Matrix<double, 6, 6>& f) {
    Eigen::Matrix<double, 6, 1> e0 = Eigen::Matrix<double, 6, 1>::Zero();
    e0[0] = 1.0;
    const Eigen::LDLT<Eigen::Matrix<double, 6, 6>> ldlt(f);
    if (ldlt.info() != Eigen::Success)
        throw std::runtime_error("ocv_variance: information matrix factorization failed");
    const double v = ldlt.solve(e0)[0];
    if (!std::isfinite(v) || v < 0.0)
        throw std::runtime_error("ocv_variance: information matrix not positive definite");
    return v;
}

ConditionReport soc_variance(double cov_ocv, const OcvMap& map, double h, double soc_prev,
                             const ConditionConfig& cfg) {
    check_cfg(cfg);
    if (!(cov_ocv >= 0.0) || !std::isfinite(cov_ocv))
        throw std::invalid_argument("soc_variance: cov_ocv must be finite and >= 0");
    const double slope = map.inv_slope(h, soc_prev, cfg.inv_slope_ceiling);
    const double raw = slope * slope * cov_ocv;
    const bool capped = raw > cfg.cov_ceiling;
    return {cov_ocv, slope, capped ? cfg.cov_ceiling : raw, capped};
}

} // namespace sockit
