#include "sockit/ukf.hpp"

#include "sockit/csv.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace sockit {

RcTable::RcTable(std::vector<double> soc_knots, std::vector<Entry> entries)
    : soc_(std::move(soc_knots)), entries_(std::move(entries)) {
    if (soc_.size() < 2) throw std::invalid_argument("rc table: need at least 2 knots");
    if (soc_.size() != entries_.size())
        throw std::invalid_argument("rc table: knot/entry count mismatch");
    for (std::size_t k = 1; k < soc_.size(); ++k)
        if (!(soc_[k] > soc_[k - 1]))
            throw std::invalid_argument("rc table: soc knots not strictly ascending at index " +
                                        std::to_string(k));
    for (std::size_t k = 0; k < entries_.size(); ++k) {
        const Entry& e = entries_[k];
        if (!(e.r0 > 0.0 && e.r1 > 0.0 && e.c1 > 0.0 && e.r2 > 0.0 && e.c2 > 0.0))
            throw std::invalid_argument("rc table: non-positive parameter at soc=" +
                                        std::to_string(soc_[k]));
    }
}

RcTable RcTable::fixture() {
    std::vector<double> soc;
    std::vector<Entry> ent;
    for (int k = 0; k <= 20; ++k) {
        soc.push_back(static_cast<double>(k) * 0.05);
        ent.push_back({0.05, 0.03, 1000.0, 0.02, 5000.0});
    }
    return RcTable(std::move(soc), std::move(ent));
}

RcTable RcTable::load(const std::string& path) {
    const CsvTable t = read_csv(path);
    const std::size_t cs = t.col("soc"), c0 = t.col("r0"), c1 = t.col("r1"),
                      cc1 = t.col("c1"), c2 = t.col("r2"), cc2 = t.col("c2");
    std::vector<double> soc;
    std::vector<Entry> ent;
    for (const auto& row : t.rows) {
        soc.push_back(row[cs]);
        ent.push_back({row[c0], row[c1], row[cc1], row[c2], row[cc2]});
    }
    try {
        return RcTable(std::move(soc), std::move(ent));
    } catch (const std::invalid_argument& e) {
        throw std::runtime_error("rc table: '" + path + "': " + e.what());
    }
}

void RcTable::save(const std::string& path) const {
    std::vector<std::vector<double>> rows;
    rows.reserve(soc_.size());
    for (std::size_t k = 0; k < soc_.size(); ++k)
        rows.push_back({soc_[k], entries_[k].r0, entries_[k].r1, entries_[k].c1, entries_[k].r2,
                        entries_[k].c2});
    write_csv(path, {"soc", "r0", "r1", "c1", "r2", "c2"}, rows);
}

RcTable::Entry RcTable::at(double soc) const {
    const double s = std::clamp(soc, soc_.front(), soc_.back());
    const auto it = std::upper_bound(soc_.begin(), soc_.end(), s);
    const std::size_t j = static_cast<std::size_t>(
        std::clamp<std::ptrdiff_t>((it - soc_.begin()) - 1, 0,
                                   static_cast<std::ptrdiff_t>(soc_.size()) - 2));
    const double t = (s - soc_[j]) / (soc_[j + 1] - soc_[j]);
    const Entry &a = entries_[j], &b = entries_[j + 1];
    return {(1 - t) * a.r0 + t * b.r0, (1 - t) * a.r1 + t * b.r1, (1 - t) * a.c1 + t * b.c1,
            (1 - t) * a.r2 + t * b.r2, (1 - t) * a.c2 + t * b.c2};
}

UkfEstimator::UkfEstimator(const UkfConfig& cfg, const OcvMap& map, const RcTable& rc)
    : cfg_(cfg), map_(map), rc_(rc) {
    if (!(cfg.soc0 >= 0.0 && cfg.soc0 <= 1.0))
        throw std::invalid_argument("ukf: soc0 must be in [0, 1]");
    if (!(cfg.alpha > 0.0)) throw std::invalid_argument("ukf: alpha must be > 0");
    if (!(cfg.r > 0.0)) throw std::invalid_argument("ukf: r must be > 0");
    if (!(cfg.dt > 0.0 && cfg.c_p > 0.0))
        throw std::invalid_argument("ukf: dt and c_p must be > 0");

    const double n = 3.0;
    lambda_ = cfg.alpha * cfg.alpha * (n + cfg.kappa) - n;
    const double wi = 1.0 / (2.0 * (n + lambda_));
    wm_.fill(wi);
    wc_.fill(wi);
    wm_[0] = lambda_ / (n + lambda_);
    wc_[0] = wm_[0] + (1.0 - cfg.alpha * cfg.alpha + cfg.beta);

    const auto& knots = map_.soc_knots();
    slice0_.resize(knots.size());
    for (std::size_t i = 0; i < knots.size(); ++i) {
        // interpolate the h = 0 slice from the map grid
        slice0_[i] = map_.ocv(knots[i], 0.0);
    }
    edge_lo_slope_ = (slice0_[1] - slice0_[0]) / (knots[1] - knots[0]);
    const std::size_t m = knots.size();
    edge_hi_slope_ = (slice0_[m - 1] - slice0_[m - 2]) / (knots[m - 1] - knots[m - 2]);

    x_ = {cfg.soc0, 0.0, 0.0};
    p_ = cfg.p0.asDiagonal();
}

double UkfEstimator::measure(double soc, double v1, double v2, double i, double r0) const {
    const auto& knots = map_.soc_knots();
    double ocv;
    if (soc < knots.front()) {
        ocv = slice0_.front() + (soc - knots.front()) * edge_lo_slope_;
    } else if (soc > knots.back()) {
        ocv = slice0_.back() + (soc - knots.back()) * edge_hi_slope_;
    } else {
        const auto it = std::upper_bound(knots.begin(), knots.end(), soc);
        const std::size_t j = static_cast<std::size_t>(
            std::clamp<std::ptrdiff_t>((it - knots.begin()) - 1, 0,
                                       static_cast<std::ptrdiff_t>(knots.size()) - 2));
        const double t = (soc - knots[j]) / (knots[j + 1] - knots[j]);
        ocv = (1 - t) * slice0_[j] + t * slice0_[j + 1];
    }
    return ocv - i * r0 - v1 - v2;
}

double UkfEstimator::step(double i, double v_t) {
    if (!std::isfinite(i) || !std::isfinite(v_t))
        throw std::invalid_argument("ukf: non-finite sample");
    const RcTable::Entry rc = rc_.at(x_[0]);
    const double n = 3.0;

    if (!first_) {
        const double a1 = std::exp(-cfg_.dt / (rc.r1 * rc.c1));
        const double a2 = std::exp(-cfg_.dt / (rc.r2 * rc.c2));
        const double ip = i_prev_;
        x_ = {std::clamp(x_[0] - ip * cfg_.dt / cfg_.c_p, 0.0, 1.0),
              a1 * x_[1] + rc.r1 * (1.0 - a1) * ip, a2 * x_[2] + rc.r2 * (1.0 - a2) * ip};
        const Eigen::Vector3d a{1.0, a1, a2};
        const Eigen::Matrix3d propagated = a.asDiagonal() * p_ * a.asDiagonal();
        p_ = propagated + Eigen::Matrix3d(cfg_.q.asDiagonal());
    }
    first_ = false;

    p_ = 0.5 * (p_ + p_.transpose()).eval();
    Eigen::Matrix3d scaled = (n + lambda_) * p_;
    Eigen::LLT<Eigen::Matrix3d> llt(scaled);
    if (llt.info() != Eigen::Success) {
        // repair: floor the eigenvalues and retry
        Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> es(p_);
        Eigen::Vector3d ev = es.eigenvalues().cwiseMax(1e-12);
        p_ = es.eigenvectors() * ev.asDiagonal() * es.eigenvectors().transpose();
        ++repairs_;
        scaled = (n + lambda_) * p_;
        llt.compute(scaled);
        if (llt.info() != Eigen::Success)
            throw std::runtime_error("ukf: covariance repair failed");
    }
    const Eigen::Matrix3d l = llt.matrixL();

    Eigen::Matrix<double, 7, 3> sig;
    sig.row(0) = x_.transpose();
    for (int c = 0; c < 3; ++c) {
        sig.row(1 + c) = (x_ + l.col(c)).transpose();
        sig.row(4 + c) = (x_ - l.col(c)).transpose();
    }

    Eigen::Matrix<double, 7, 1> zs;
    for (int k = 0; k < 7; ++k)
        zs[k] = measure(sig(k, 0), sig(k, 1), sig(k, 2), i, rc.r0);

    double zbar = 0.0;
    for (int k = 0; k < 7; ++k) zbar += wm_[static_cast<std::size_t>(k)] * zs[k];
    Eigen::Vector3d xbar = Eigen::Vector3d::Zero();
    for (int k = 0; k < 7; ++k)
        xbar += wm_[static_cast<std::size_t>(k)] * sig.row(k).transpose();

    double pzz = cfg_.r;
    Eigen::Vector3d pxz = Eigen::Vector3d::Zero();
    for (int k = 0; k < 7; ++k) {
        const double dz = zs[k] - zbar;
        const Eigen::Vector3d dx = sig.row(k).transpose() - xbar;
        pzz += wc_[static_cast<std::size_t>(k)] * dz * dz;
        pxz += wc_[static_cast<std::size_t>(k)] * dx * dz;
    }

    const Eigen::Vector3d kgain = pxz / pzz;
    x_ += kgain * (v_t - zbar);
    x_[0] = std::clamp(x_[0], 0.0, 1.0);
    p_ -= (kgain * kgain.transpose()) * pzz;

    i_prev_ = i;
    return x_[0];
}

} // namespace sockit
