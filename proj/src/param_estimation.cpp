#include "sockit/param_estimation.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace sockit {

RegressorWindow::RegressorWindow(std::size_t capacity) : buf_(capacity) {
    if (capacity < 6)
        throw std::invalid_argument("RegressorWindow: capacity must be >= 6 for 6 parameters");
}

void RegressorWindow::push_row(const RegressorRow& row) {
    if (row.phi[0] != 1.0)
        throw std::invalid_argument("RegressorWindow: phi[0] must be 1");
    for (double v : row.phi)
        if (!std::isfinite(v))
            throw std::invalid_argument("RegressorWindow: non-finite regressor entry");
    if (!std::isfinite(row.target))
        throw std::invalid_argument("RegressorWindow: non-finite target");
    buf_[head_] = row;
    head_ = (head_ + 1) % buf_.size();
    if (count_ < buf_.size()) ++count_;
}

void RegressorWindow::clear() {
    head_ = 0;
    count_ = 0;
}

const RegressorRow& RegressorWindow::at(std::size_t k) const {
    if (k >= count_) throw std::out_of_range("RegressorWindow: row index out of range");
    const std::size_t oldest = (head_ + buf_.size() - count_) % buf_.size();
    return buf_[(oldest + k) % buf_.size()];
}

void RegressorWindow::accumulate(Eigen::Matrix<double, 6, 6>& g,
                                 Eigen::Matrix<double, 6, 1>& r) const {
    g.setZero();
    r.setZero();
    const std::size_t oldest = (head_ + buf_.size() - count_) % buf_.size();
    for (std::size_t k = 0; k < count_; ++k) {
        const RegressorRow& row = buf_[(oldest + k) % buf_.size()];
        Eigen::Map<const Eigen::Matrix<double, 6, 1>> phi(row.phi.data());
        g.selfadjointView<Eigen::Lower>().rankUpdate(phi);
        r.noalias() += phi * row.target;
    }
    g = g.selfadjointView<Eigen::Lower>();
}

bool ParameterVector::plausible() const {
    return c > 0.0 && d > 0.0 && e > 0.0 && e * e >= 4.0 * d;
}

EstimateResult estimate_from_gram(Eigen::Matrix<double, 6, 6> g,
                                  const Eigen::Matrix<double, 6, 1>& r, double epsilon) {
    if (!(epsilon >= 0.0))
        throw std::invalid_argument("estimate_from_gram: epsilon must be >= 0");
    g.diagonal().array() += epsilon;
    const Eigen::Matrix<double, 6, 1> th = g.ldlt().solve(r);
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix<double, 6, 6>> es(g, Eigen::EigenvaluesOnly);
    const double lmin = es.eigenvalues().minCoeff();
    const double lmax = es.eigenvalues().maxCoeff();
    const double cond = lmin > 0.0 ? lmax / lmin : std::numeric_limits<double>::infinity();
    return {{th[0], th[1], th[2], th[3], th[4], th[5]}, cond};
}

EstimateResult estimate_parameters(const RegressorWindow& w, double epsilon) {
    if (!w.full())
        throw std::logic_error("estimate_parameters: window not full (" +
                               std::to_string(w.size()) + "/" + std::to_string(w.capacity()) +
                               " rows)");
    Eigen::Matrix<double, 6, 6> g;
    Eigen::Matrix<double, 6, 1> r;
    w.accumulate(g, r);
    return estimate_from_gram(g, r, epsilon);
}

} // namespace sockit
