#pragma once
#include <Eigen/Dense>

#include <array>
#include <cstddef>
#include <vector>

namespace sockit {

// One regression row. The model is linear in six parameters:
//   v_f = ocv - a*i_dd - b*i_d - c*i - d*v_dd - e*v_d
// so phi = [1, -i_dd, -i_d, -i, -v_dd, -v_d] and the target is the filtered
// terminal voltage v_f. All entries must be finite and phi[0] must equal 1.
struct RegressorRow {
    std::array<double, 6> phi;
    double target;
};

// Fixed-capacity sliding window of the most recent N rows (ring buffer).
class RegressorWindow {
public:
    explicit RegressorWindow(std::size_t capacity); // throws if capacity < 6

    void push_row(const RegressorRow& row); // validates, evicts oldest when full
    bool full() const { return count_ == buf_.size(); }
    std::size_t size() const { return count_; }
    std::size_t capacity() const { return buf_.size(); }
    void clear();

    // rows oldest-first
    const RegressorRow& at(std::size_t k) const;

    // Accumulate Gram matrix G = sum(phi*phi^T) and moment r = sum(phi*target).
    void accumulate(Eigen::Matrix<double, 6, 6>& g, Eigen::Matrix<double, 6, 1>& r) const;

private:
    std::vector<RegressorRow> buf_;
    std::size_t head_ = 0; // next write slot
    std::size_t count_ = 0;
};

// Estimated model parameters, in regressor order.
struct ParameterVector {
    double ocv, a, b, c, d, e;

    // Physical-plausibility diagnostic: positive resistive terms and real,
    // stable denominator dynamics (e^2 >= 4d). Advisory only.
    bool plausible() const;
};

struct EstimateResult {
    ParameterVector theta;
    double condition; // condition number of the regularized normal matrix
};

// Ridge-regularized least squares over a full window:
//   (G + epsilon*I) theta = r
// Throws std::logic_error if the window is not yet full.
EstimateResult estimate_parameters(const RegressorWindow& w, double epsilon = 1e-8);

// Same solve from precomputed normal-equation terms (shared with the
// condition evaluation, which reuses the Gram matrix).
EstimateResult estimate_from_gram(Eigen::Matrix<double, 6, 6> g,
                                  const Eigen::Matrix<double, 6, 1>& r, double epsilon);

} // namespace sockit
