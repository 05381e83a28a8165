#include "sockit/pipeline.hpp"

#include <cmath>
#include <stdexcept>

namespace sockit {

Pipeline::Pipeline(const PipelineConfig& cfg, const OcvMap& map)
    : cfg_(cfg),
      map_(map),
      bank_i_(cfg.filter),
      bank_v_(cfg.filter),
      window_(cfg.window_n),
      hyst_(cfg.hyst_c, cfg.h0, cfg.filter.ts),
      fusion_(init_fusion({cfg.soc0, cfg.p0, cfg.c_p, cfg.filter.ts, cfg.sigma_i})) {
    if (cfg.stride == 0) throw std::invalid_argument("pipeline: stride must be >= 1");
    if (!(cfg.epsilon > 0.0)) throw std::invalid_argument("pipeline: epsilon must be > 0");
    if (!(cfg.condition.sigma_vt > 0.0))
        throw std::invalid_argument("pipeline: condition.sigma_vt must be > 0");
    if (!(cfg.condition.epsilon > 0.0))
        throw std::invalid_argument("pipeline: condition.epsilon must be > 0");
    if (!(cfg.condition.cov_ceiling > 0.0))
        throw std::invalid_argument("pipeline: condition.cov_ceiling must be > 0");
    if (!(cfg.condition.inv_slope_ceiling > 0.0))
        throw std::invalid_argument("pipeline: condition.inv_slope_ceiling must be > 0");
    theta_ = {};
}

EstimateRecord Pipeline::step(const TelemetrySample& s) {
    if (!std::isfinite(s.t) || !std::isfinite(s.i) || !std::isfinite(s.v_t))
        throw std::invalid_argument("pipeline: non-finite sample");
    if (count_ > 0) {
        const double expected = t_prev_ + cfg_.filter.ts;
        if (std::abs(s.t - expected) > 1e-6)
            throw std::invalid_argument("pipeline: timestamp " + std::to_string(s.t) +
                                        " is not one period after " + std::to_string(t_prev_));
    }

    // 1. filter banks (warm-started on the first sample)
    if (count_ == 0) {
        bank_i_.warm_start(s.i);
        bank_v_.warm_start(s.v_t);
    }
    const auto iv = bank_i_.step(s.i);
    const auto vv = bank_v_.step(s.v_t);

    // 2. regressor row
    window_.push_row({{1.0, -iv[2], -iv[1], -iv[0], -vv[2], -vv[1]}, vv[0]});

    // 3. parameter estimate (gated while the window fills)
    const bool warmup = !window_.full();
    double ocv_est = vv[0]; // warm-up diagnostic: the filtered terminal voltage
    double cov_ocv = 0.0;
    if (!warmup) {
        if (sample_in_stride_ % cfg_.stride == 0) {
            Eigen::Matrix<double, 6, 6> g;
            Eigen::Matrix<double, 6, 1> r;
            window_.accumulate(g, r);
            theta_ = estimate_from_gram(g, r, cfg_.epsilon).theta;
            cached_cov_ocv_ = ocv_variance(information_from_gram(g, cfg_.condition));
            have_theta_ = true;
        }
        ++sample_in_stride_;
        ocv_est = theta_.ocv;
        cov_ocv = cached_cov_ocv_;
    }

    // 4. hysteresis from the previous sample's current
    const double h = count_ > 0 ? hyst_.advance(i_prev_) : hyst_.h();

    // 5. map inversion
    const OcvMap::Inversion inv = map_.invert_soc(ocv_est, h);

    // 6. measurement variance at the previous fused estimate
    double cov_soc = cfg_.condition.cov_ceiling;
    double slope = 0.0;
    if (!warmup) {
        const ConditionReport rep = soc_variance(cov_ocv, map_, h, fusion_.soc_est, cfg_.condition);
        cov_soc = rep.cov_soc;
        slope = rep.slope;
    }
    (void)slope;

    // 7. fusion: Coulomb-count prediction, then the gated measurement update
    const FusionPrediction pred = fusion_predict(fusion_, i_prev_);
    double gain = 0.0;
    if (warmup) {
        fusion_.soc_est = pred.soc_cc;
        fusion_.p_m = pred.p_p;
    } else {
        const FusionUpdate upd = fusion_update(pred, inv.soc, cov_soc);
        fusion_.soc_est = upd.soc_est;
        fusion_.p_m = upd.p_m;
        gain = upd.gain;
    }

    i_prev_ = s.i;
    t_prev_ = s.t;
    ++count_;
    return {s.t,  fusion_.soc_est, inv.soc, cov_soc,       ocv_est,
            h,    gain,            warmup,  inv.saturated, have_theta_ ? theta_.plausible() : true};
}

} // namespace sockit
