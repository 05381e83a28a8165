#include "sockit/scenario.hpp"

#include "sockit/csv.hpp"

#include <json.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <numeric>
#include <stdexcept>

namespace sockit {

namespace fs = std::filesystem;
using ordered_json = nlohmann::ordered_json;

std::vector<double> coulomb_series(const std::vector<double>& i, double guess, double c_p,
                                   double dt) {
    if (!(c_p > 0.0) || !(dt > 0.0))
        throw std::invalid_argument("coulomb_series: c_p and dt must be > 0");
    std::vector<double> est(i.size());
    double q = 0.0;
    for (std::size_t k = 0; k < i.size(); ++k) {
        est[k] = std::clamp(guess - q / c_p, 0.0, 1.0);
        q += i[k] * dt;
    }
    return est;
}

EstimatorMetrics compute_metrics(const std::vector<double>& est,
                                 const std::vector<double>& truth, double dt, double tol,
                                 int hold) {
    if (est.size() != truth.size() || est.empty())
        throw std::invalid_argument("compute_metrics: series must be equal-length, non-empty");
    EstimatorMetrics m;
    double acc = 0.0;
    int run = 0;
    std::ptrdiff_t conv = -1;
    for (std::size_t k = 0; k < est.size(); ++k) {
        const double e = est[k] - truth[k];
        acc += e * e;
        if (conv < 0) {
            run = std::abs(e) < tol ? run + 1 : 0;
            if (run >= hold) conv = static_cast<std::ptrdiff_t>(k) - hold + 1;
        }
    }
    m.rmse_overall = std::sqrt(acc / static_cast<double>(est.size()));
    if (conv >= 0) {
        m.converged = true;
        m.convergence_time = static_cast<double>(conv) * dt;
        double pacc = 0.0, pmax = 0.0;
        for (std::size_t k = static_cast<std::size_t>(conv); k < est.size(); ++k) {
            const double e = est[k] - truth[k];
            pacc += e * e;
            pmax = std::max(pmax, std::abs(e));
        }
        m.rmse_post_convergence =
            std::sqrt(pacc / static_cast<double>(est.size() - static_cast<std::size_t>(conv)));
        m.max_abs_error_post = pmax;
    } else {
        m.converged = false;
        m.convergence_time = 0.0;
        m.rmse_post_convergence = m.rmse_overall;
        double pmax = 0.0;
        for (std::size_t k = 0; k < est.size(); ++k)
            pmax = std::max(pmax, std::abs(est[k] - truth[k]));
        m.max_abs_error_post = pmax;
    }
    return m;
}

std::vector<std::string> scenario_names() {
    return {"ideal",        "flat_zone",    "current_bias",
            "quantization", "map_mismatch", "constant_segment"};
}

Scenario make_scenario(const std::string& name) {
    Scenario sc;
    sc.name = name;
    sc.n = 100000;
    sc.dt = 1.0;
    sc.profile.kind = ProfileSpec::Kind::bounded;
    if (name == "ideal") {
        sc.profile.band_lo = 0.02;
        sc.profile.band_hi = 0.98;
        sc.profile.base_lo = 0.15;
        sc.profile.base_hi = 0.25;
        sc.profile.midrest_every = 1500;
        sc.profile.start_rest = 400;
        sc.soc0 = 0.20;
        sc.guess = 1.00;
        sc.seed = 11;
    } else if (name == "flat_zone") {
        sc.profile.band_lo = 0.20;
        sc.profile.band_hi = 0.80;
        sc.profile.midrest_every = 1500;
        sc.soc0 = 0.20;
        sc.guess = 1.00;
        sc.errors.v_noise = 0.002;
        sc.seed = 11;
    } else if (name == "current_bias") {
        sc.profile.band_lo = 0.20;
        sc.profile.band_hi = 0.80;
        sc.profile.midrest_every = 1500;
        sc.soc0 = 0.20;
        sc.guess = 1.00;
        sc.errors.v_noise = 0.002;
        sc.errors.current_bias = -0.05;
        sc.seed = 11;
    } else if (name == "quantization") {
        sc.profile.band_lo = 0.02;
        sc.profile.band_hi = 0.98;
        sc.profile.base_lo = 0.15;
        sc.profile.base_hi = 0.25;
        sc.profile.midrest_every = 1500;
        sc.profile.start_rest = 400;
        sc.soc0 = 0.20;
        sc.guess = 1.00;
        sc.errors.adc_bits = 10;
        sc.errors.adc_vmax = 5.0;
        sc.seed = 11;
    } else if (name == "map_mismatch") {
        sc.profile.band_lo = 0.08;
        sc.profile.band_hi = 0.92;
        sc.profile.base_lo = 0.12;
        sc.profile.base_hi = 0.18;
        sc.profile.rich_edges_only = true;
        sc.profile.rich_zone = 0.06;
        sc.soc0 = 0.90;
        sc.guess = 1.00;
        sc.errors.v_noise = 0.002;
        sc.perturbed_plant = true;
        sc.seed = 11;
    } else if (name == "constant_segment") {
        sc.profile.band_lo = 0.20;
        sc.profile.band_hi = 0.80;
        sc.profile.midrest_every = 1500;
        sc.profile.start_rest = 400;
        sc.profile.seg_start = 400;
        sc.profile.seg_duration = 900;
        sc.profile.seg_amp = -1.0;
        sc.soc0 = 0.50;
        sc.guess = 0.50;
        sc.errors.v_noise = 0.002;
        sc.seed = 11;
    } else {
        throw std::invalid_argument("unknown scenario '" + name + "' (expected one of: ideal, "
                                    "flat_zone, current_bias, quantization, map_mismatch, "
                                    "constant_segment)");
    }
    sc.profile.soc0 = sc.soc0;
    sc.profile.c_p = sc.plant.c_p;
    sc.pipeline_cfg.soc0 = sc.guess;
    sc.pipeline_cfg.filter.ts = sc.dt;
    sc.ukf_cfg.soc0 = sc.guess;
    sc.ukf_cfg.dt = sc.dt;
    return sc;
}

namespace {

template <typename T>
void take(ordered_json& j, const char* key, T& dst, const std::string& group) {
    if (!j.contains(key)) return;
    try {
        dst = j.at(key).get<T>();
    } catch (const nlohmann::json::exception&) {
        throw std::runtime_error("config: field '" + group + key + "' has the wrong type");
    }
    j.erase(key);
}

void reject_unknown(const ordered_json& j, const std::string& group) {
    for (const auto& item : j.items())
        throw std::runtime_error("config: unknown field '" + group + item.key() + "'");
}

} // namespace

Scenario apply_config(Scenario sc, const std::string& json_path) {
    std::ifstream in(json_path);
    if (!in) throw std::runtime_error("config: cannot open '" + json_path + "'");
    ordered_json j;
    try {
        j = ordered_json::parse(in);
    } catch (const nlohmann::json::exception& e) {
        throw std::runtime_error("config: '" + json_path + "' is not valid JSON: " + e.what());
    }

    take(j, "n", sc.n, "");
    take(j, "dt", sc.dt, "");
    take(j, "guess", sc.guess, "");
    take(j, "soc0", sc.soc0, "");
    take(j, "h0", sc.h0, "");
    take(j, "seed", sc.seed, "");
    take(j, "perturbed_plant", sc.perturbed_plant, "");

    if (j.contains("profile")) {
        ordered_json p = j.at("profile");
        j.erase("profile");
        std::string kind;
        take(p, "kind", kind, "profile.");
        if (!kind.empty()) {
            if (kind == "drive")
                sc.profile.kind = ProfileSpec::Kind::drive;
            else if (kind == "bounded")
                sc.profile.kind = ProfileSpec::Kind::bounded;
            else if (kind == "csv")
                sc.profile.kind = ProfileSpec::Kind::csv;
            else
                throw std::runtime_error("config: field 'profile.kind' must be one of "
                                         "drive/bounded/csv, got '" + kind + "'");
        }
        take(p, "drive_sd", sc.profile.drive_sd, "profile.");
        take(p, "drive_mean", sc.profile.drive_mean, "profile.");
        take(p, "drive_tau", sc.profile.drive_tau, "profile.");
        take(p, "band_lo", sc.profile.band_lo, "profile.");
        take(p, "band_hi", sc.profile.band_hi, "profile.");
        take(p, "base_lo", sc.profile.base_lo, "profile.");
        take(p, "base_hi", sc.profile.base_hi, "profile.");
        take(p, "dither", sc.profile.dither, "profile.");
        take(p, "rich_edges_only", sc.profile.rich_edges_only, "profile.");
        take(p, "rich_zone", sc.profile.rich_zone, "profile.");
        take(p, "dither_tau", sc.profile.dither_tau, "profile.");
        take(p, "edge_rest", sc.profile.edge_rest, "profile.");
        take(p, "midrest_every", sc.profile.midrest_every, "profile.");
        take(p, "midrest_len", sc.profile.midrest_len, "profile.");
        take(p, "taper_width", sc.profile.taper_width, "profile.");
        take(p, "taper_floor", sc.profile.taper_floor, "profile.");
        take(p, "ramp_len", sc.profile.ramp_len, "profile.");
        take(p, "start_rest", sc.profile.start_rest, "profile.");
        take(p, "amp", sc.profile.amp, "profile.");
        take(p, "seg_start", sc.profile.seg_start, "profile.");
        take(p, "seg_duration", sc.profile.seg_duration, "profile.");
        take(p, "seg_amp", sc.profile.seg_amp, "profile.");
        take(p, "csv_path", sc.profile.csv_path, "profile.");
        reject_unknown(p, "profile.");
    }
    if (j.contains("errors")) {
        ordered_json e = j.at("errors");
        j.erase("errors");
        take(e, "current_bias", sc.errors.current_bias, "errors.");
        take(e, "v_noise", sc.errors.v_noise, "errors.");
        take(e, "adc_bits", sc.errors.adc_bits, "errors.");
        take(e, "adc_vmax", sc.errors.adc_vmax, "errors.");
        reject_unknown(e, "errors.");
    }
    if (j.contains("pipeline")) {
        ordered_json p = j.at("pipeline");
        j.erase("pipeline");
        take(p, "lambda0", sc.pipeline_cfg.filter.lambda0, "pipeline.");
        take(p, "lambda1", sc.pipeline_cfg.filter.lambda1, "pipeline.");
        take(p, "window_n", sc.pipeline_cfg.window_n, "pipeline.");
        take(p, "stride", sc.pipeline_cfg.stride, "pipeline.");
        take(p, "epsilon", sc.pipeline_cfg.epsilon, "pipeline.");
        take(p, "hyst_c", sc.pipeline_cfg.hyst_c, "pipeline.");
        take(p, "h0", sc.pipeline_cfg.h0, "pipeline.");
        take(p, "sigma_vt", sc.pipeline_cfg.condition.sigma_vt, "pipeline.");
        take(p, "cov_ceiling", sc.pipeline_cfg.condition.cov_ceiling, "pipeline.");
        take(p, "inv_slope_ceiling", sc.pipeline_cfg.condition.inv_slope_ceiling, "pipeline.");
        take(p, "condition_epsilon", sc.pipeline_cfg.condition.epsilon, "pipeline.");
        take(p, "p0", sc.pipeline_cfg.p0, "pipeline.");
        take(p, "c_p", sc.pipeline_cfg.c_p, "pipeline.");
        take(p, "sigma_i", sc.pipeline_cfg.sigma_i, "pipeline.");
        reject_unknown(p, "pipeline.");
    }
    if (j.contains("ukf")) {
        ordered_json u = j.at("ukf");
        j.erase("ukf");
        take(u, "alpha", sc.ukf_cfg.alpha, "ukf.");
        take(u, "beta", sc.ukf_cfg.beta, "ukf.");
        take(u, "kappa", sc.ukf_cfg.kappa, "ukf.");
        take(u, "r", sc.ukf_cfg.r, "ukf.");
        take(u, "c_p", sc.ukf_cfg.c_p, "ukf.");
        std::vector<double> vec;
        take(u, "q", vec, "ukf.");
        if (!vec.empty()) {
            if (vec.size() != 3) throw std::runtime_error("config: field 'ukf.q' needs 3 entries");
            sc.ukf_cfg.q = {vec[0], vec[1], vec[2]};
        }
        vec.clear();
        take(u, "p0", vec, "ukf.");
        if (!vec.empty()) {
            if (vec.size() != 3)
                throw std::runtime_error("config: field 'ukf.p0' needs 3 entries");
            sc.ukf_cfg.p0 = {vec[0], vec[1], vec[2]};
        }
        reject_unknown(u, "ukf.");
    }
    if (j.contains("plant")) {
        ordered_json p = j.at("plant");
        j.erase("plant");
        take(p, "r0", sc.plant.r0, "plant.");
        take(p, "r1", sc.plant.r1, "plant.");
        take(p, "c1", sc.plant.c1, "plant.");
        take(p, "r2", sc.plant.r2, "plant.");
        take(p, "c2", sc.plant.c2, "plant.");
        take(p, "c_p", sc.plant.c_p, "plant.");
        take(p, "hyst_c", sc.plant.hyst_c, "plant.");
        reject_unknown(p, "plant.");
    }
    reject_unknown(j, "");

    // keep derived fields in sync with the overrides; the sample period is
    // the scenario dt everywhere
    sc.profile.soc0 = sc.soc0;
    sc.profile.c_p = sc.plant.c_p;
    sc.pipeline_cfg.soc0 = sc.guess;
    sc.pipeline_cfg.filter.ts = sc.dt;
    sc.ukf_cfg.soc0 = sc.guess;
    sc.ukf_cfg.dt = sc.dt;
    return sc;
}

namespace {

double median_abs(const std::vector<double>& v, std::size_t a, std::size_t b) {
    std::vector<double> w;
    w.reserve(b - a);
    for (std::size_t k = a; k < b; ++k) w.push_back(std::abs(v[k]));
    const std::size_t mid = w.size() / 2;
    std::nth_element(w.begin(), w.begin() + static_cast<std::ptrdiff_t>(mid), w.end());
    double m = w[mid];
    if (w.size() % 2 == 0) {
        std::nth_element(w.begin(), w.begin() + static_cast<std::ptrdiff_t>(mid) - 1,
                         w.begin() + static_cast<std::ptrdiff_t>(mid));
        m = 0.5 * (m + w[mid - 1]);
    }
    return m;
}

// Scenario pass thresholds. The relative comparisons restate the design
// targets; the absolute RMSE caps are frozen from the reference runs of the
// built-in fixtures (seed 11) with ~2x headroom.
// Per-scenario pass thresholds. Comparative limits (x vs UKF, x vs Coulomb
// counting, the 3x convergence ratio, the 1% ideal RMSE, and the segment gain
// and Coulomb-identity caps) are the design targets. Absolute RMSE and
// convergence-time caps are frozen from the reference runs at seeds 11-13
// with roughly 2x headroom over the worst observed value.
void evaluate_checks(ScenarioResult& r) {
    const std::string& name = r.scenario.name;
    auto lt = [&](const std::string& cname, double value, double limit) {
        r.checks.push_back({cname, value, limit, value < limit});
    };
    const double big = 1e9;
    if (name == "ideal") {
        lt("proposed_rmse_post_convergence", r.proposed.rmse_post_convergence, 0.01);
        // reference runs converge at 99 s, right when the window first fills
        lt("proposed_convergence_time", r.proposed.converged ? r.proposed.convergence_time : big,
           200.0);
        lt("proposed_rmse_overall", r.proposed.rmse_overall, 0.05); // observed 0.026
    } else if (name == "flat_zone") {
        lt("proposed_convergence_time", r.proposed.converged ? r.proposed.convergence_time : big,
           200.0); // observed 99
        // UKF must take at least 3x the proposed convergence time
        const double ratio = r.proposed.converged
                                 ? (r.ukf.converged ? r.ukf.convergence_time /
                                                          std::max(r.proposed.convergence_time, 1.0)
                                                    : big)
                                 : 0.0;
        lt("ukf_to_proposed_convergence_ratio_min", 3.0 / std::max(ratio, 1e-9), 1.0);
        lt("proposed_rmse_overall", r.proposed.rmse_overall, 0.07); // observed 0.033
    } else if (name == "current_bias") {
        lt("proposed_to_ukf_rmse_ratio", r.proposed.rmse_overall / r.ukf.rmse_overall, 0.5);
        lt("proposed_to_coulomb_rmse_ratio", r.proposed.rmse_overall / r.coulomb.rmse_overall,
           0.2);
        lt("proposed_rmse_overall", r.proposed.rmse_overall, 0.09); // observed 0.045
    } else if (name == "quantization") {
        // the 10-bit step on the flat plateau costs ~3% post-convergence
        lt("proposed_rmse_post_convergence", r.proposed.rmse_post_convergence, 0.05);
        lt("proposed_rmse_overall", r.proposed.rmse_overall, 0.08); // observed 0.040
    } else if (name == "map_mismatch") {
        lt("proposed_to_ukf_rmse_ratio", r.proposed.rmse_overall / r.ukf.rmse_overall, 0.5);
        lt("proposed_rmse_overall", r.proposed.rmse_overall, 0.045); // observed 0.021
    } else if (name == "constant_segment") {
        lt("segment_gain_median", r.segment.gain_median, 1e-3);
        lt("segment_coulomb_identity_max", r.segment.cc_identity_max, 1e-6);
        lt("proposed_rmse_overall", r.proposed.rmse_overall, 0.04); // observed 0.020
    }
    r.pass = std::all_of(r.checks.begin(), r.checks.end(),
                         [](const CheckResult& c) { return c.pass; });
}

ordered_json metrics_json(const EstimatorMetrics& m) {
    ordered_json j;
    j["rmse_overall"] = m.rmse_overall;
    j["converged"] = m.converged;
    if (m.converged)
        j["convergence_time"] = m.convergence_time;
    else
        j["convergence_time"] = nullptr;
    j["rmse_post_convergence"] = m.rmse_post_convergence;
    j["max_abs_error_post_convergence"] = m.max_abs_error_post;
    j["runtime_per_step"] = m.runtime_per_step;
    return j;
}

EstimatorMetrics metrics_from_json(const ordered_json& j) {
    EstimatorMetrics m;
    m.rmse_overall = j.at("rmse_overall").get<double>();
    m.converged = j.at("converged").get<bool>();
    m.convergence_time = j.at("convergence_time").is_null()
                             ? 0.0
                             : j.at("convergence_time").get<double>();
    m.rmse_post_convergence = j.at("rmse_post_convergence").get<double>();
    m.max_abs_error_post = j.at("max_abs_error_post_convergence").get<double>();
    m.runtime_per_step = j.at("runtime_per_step").get<double>();
    return m;
}

} // namespace

ScenarioResult run_scenario(const Scenario& sc, const std::string& out_dir) {
    const std::vector<double> profile = gen_profile(sc.profile, sc.n, sc.seed, sc.dt);
    const OcvMap truth_map = sc.perturbed_plant ? OcvMap::perturbed() : OcvMap::synthetic();
    const SimTrace trace = simulate_cell(profile, sc.plant, truth_map, sc.soc0, sc.h0, sc.dt);
    if (trace.truncated)
        throw std::runtime_error("scenario '" + sc.name +
                                 "': simulated SOC left [0, 1]; adjust the profile band");
    const Telemetry tm = apply_errors(trace, sc.errors, sc.seed + 700);

    const OcvMap nominal = OcvMap::synthetic(); // estimators always use the nominal map
    const std::size_t n = trace.t.size();

    ScenarioResult res;
    res.scenario = sc;

    // proposed pipeline
    std::vector<EstimateRecord> recs;
    recs.reserve(n);
    std::vector<double> prop_est(n);
    {
        Pipeline pipe(sc.pipeline_cfg, nominal);
        const auto t0 = std::chrono::steady_clock::now();
        for (std::size_t k = 0; k < n; ++k) {
            recs.push_back(pipe.step({tm.t[k], tm.i[k], tm.v[k]}));
            prop_est[k] = recs.back().soc_est;
        }
        const auto t1 = std::chrono::steady_clock::now();
        res.proposed = compute_metrics(prop_est, trace.soc_true, sc.dt);
        res.proposed.runtime_per_step =
            std::chrono::duration<double>(t1 - t0).count() / static_cast<double>(n);
    }

    // UKF benchmark
    std::vector<double> ukf_est(n);
    {
        UkfEstimator ukf(sc.ukf_cfg, nominal, RcTable::fixture());
        const auto t0 = std::chrono::steady_clock::now();
        for (std::size_t k = 0; k < n; ++k) ukf_est[k] = ukf.step(tm.i[k], tm.v[k]);
        const auto t1 = std::chrono::steady_clock::now();
        res.ukf = compute_metrics(ukf_est, trace.soc_true, sc.dt);
        res.ukf.runtime_per_step =
            std::chrono::duration<double>(t1 - t0).count() / static_cast<double>(n);
    }

    // Coulomb-counting baseline
    std::vector<double> cc_est;
    {
        const auto t0 = std::chrono::steady_clock::now();
        cc_est = coulomb_series(tm.i, sc.guess, sc.plant.c_p, sc.dt);
        const auto t1 = std::chrono::steady_clock::now();
        res.coulomb = compute_metrics(cc_est, trace.soc_true, sc.dt);
        res.coulomb.runtime_per_step =
            std::chrono::duration<double>(t1 - t0).count() / static_cast<double>(n);
    }

    // in-segment behavior (first 150 s after segment start are excluded so
    // the regression window and filter tails have flushed the step change)
    if (sc.profile.seg_duration > 0) {
        const std::size_t a = static_cast<std::size_t>(sc.profile.seg_start) + 150;
        const std::size_t b = static_cast<std::size_t>(sc.profile.seg_start) +
                              static_cast<std::size_t>(sc.profile.seg_duration);
        if (b <= n && a < b) {
            res.segment.present = true;
            std::vector<double> gains(n);
            for (std::size_t k = 0; k < n; ++k) gains[k] = recs[k].gain;
            res.segment.gain_median = median_abs(gains, a, b);
            double dev = 0.0;
            for (std::size_t k = a; k + 1 < b; ++k) {
                const double d_est = prop_est[k + 1] - prop_est[k];
                const double d_cc = -tm.i[k] * sc.dt / sc.plant.c_p;
                dev = std::max(dev, std::abs(d_est - d_cc));
            }
            res.segment.cc_identity_max = dev;
        }
    }

    evaluate_checks(res);

    if (!out_dir.empty()) {
        fs::create_directories(out_dir);
        const fs::path dir(out_dir);
        {
            std::vector<std::vector<double>> rows(n);
            for (std::size_t k = 0; k < n; ++k)
                rows[k] = {trace.t[k], trace.i_true[k], trace.v_true[k], trace.soc_true[k],
                           trace.h_true[k]};
            write_csv((dir / "truth.csv").string(), {"t", "i_true", "v_true", "soc_true", "h_true"},
                      rows);
        }
        {
            std::vector<std::vector<double>> rows(n);
            for (std::size_t k = 0; k < n; ++k) {
                const EstimateRecord& r = recs[k];
                rows[k] = {r.t,       r.soc_est, r.soc_ocv_h,
                           r.cov_soc, r.ocv_est, r.h,
                           r.gain,    r.warmup ? 1.0 : 0.0};
            }
            write_csv((dir / "proposed.csv").string(),
                      {"t", "soc_est", "soc_ocv_h", "cov_soc", "ocv_est", "h", "gain", "warmup"},
                      rows);
        }
        {
            std::vector<std::vector<double>> rows(n);
            for (std::size_t k = 0; k < n; ++k) rows[k] = {tm.t[k], ukf_est[k]};
            write_csv((dir / "ukf.csv").string(), {"t", "soc_est"}, rows);
        }
        {
            std::vector<std::vector<double>> rows(n);
            for (std::size_t k = 0; k < n; ++k) rows[k] = {tm.t[k], cc_est[k]};
            write_csv((dir / "coulomb.csv").string(), {"t", "soc_est"}, rows);
        }
        ordered_json j;
        j["scenario"] = sc.name;
        j["seed"] = sc.seed;
        j["n"] = n;
        j["dt"] = sc.dt;
        j["estimators"]["proposed"] = metrics_json(res.proposed);
        j["estimators"]["ukf"] = metrics_json(res.ukf);
        j["estimators"]["coulomb"] = metrics_json(res.coulomb);
        if (res.segment.present) {
            j["segment"]["gain_median"] = res.segment.gain_median;
            j["segment"]["cc_identity_max"] = res.segment.cc_identity_max;
        }
        for (const CheckResult& c : res.checks)
            j["checks"].push_back(
                {{"name", c.name}, {"value", c.value}, {"limit", c.limit}, {"pass", c.pass}});
        j["pass"] = res.pass;
        j["files"] = {"truth.csv", "proposed.csv", "ukf.csv", "coulomb.csv"};
        std::ofstream out(dir / "summary.json");
        if (!out) throw std::runtime_error("cannot write " + (dir / "summary.json").string());
        out << j.dump(2) << '\n';
    }
    return res;
}

namespace {

struct ReportRow {
    std::string scenario, estimator;
    EstimatorMetrics m;
    bool pass;
};

std::vector<ReportRow> load_report_rows(const std::string& dir) {
    if (!fs::is_directory(dir))
        throw std::runtime_error("report: '" + dir + "' is not a directory");
    std::vector<fs::path> summaries;
    if (fs::exists(fs::path(dir) / "summary.json")) summaries.push_back(fs::path(dir));
    std::vector<fs::path> children;
    for (const auto& e : fs::directory_iterator(dir))
        if (e.is_directory()) children.push_back(e.path());
    std::sort(children.begin(), children.end());
    for (const auto& c : children)
        if (fs::exists(c / "summary.json")) summaries.push_back(c);
    if (summaries.empty())
        throw std::runtime_error("report: no summary.json found under '" + dir + "'");

    std::vector<ReportRow> rows;
    std::vector<std::string> missing;
    for (const auto& sdir : summaries) {
        std::ifstream in(sdir / "summary.json");
        ordered_json j;
        try {
            in >> j;
        } catch (const nlohmann::json::exception& e) {
            throw std::runtime_error("report: " + (sdir / "summary.json").string() +
                                     " is not valid JSON: " + e.what());
        }
        for (const auto& f : j.at("files"))
            if (!fs::exists(sdir / f.get<std::string>()))
                missing.push_back((sdir / f.get<std::string>()).string());
        const bool pass = j.at("pass").get<bool>();
        const std::string name = j.at("scenario").get<std::string>();
        for (const char* est : {"proposed", "ukf", "coulomb"})
            rows.push_back({name, est, metrics_from_json(j.at("estimators").at(est)), pass});
    }
    if (!missing.empty()) {
        std::string msg = "report: missing files:";
        for (const auto& m : missing) msg += "\n  " + m;
        throw std::runtime_error(msg);
    }
    std::sort(rows.begin(), rows.end(), [](const ReportRow& a, const ReportRow& b) {
        if (a.scenario != b.scenario) return a.scenario < b.scenario;
        return a.estimator < b.estimator;
    });
    return rows;
}

} // namespace

std::string render_report(const std::string& dir) {
    const std::vector<ReportRow> rows = load_report_rows(dir);
    std::string out;
    char buf[256];
    std::snprintf(buf, sizeof buf, "%-18s %-9s %9s %9s %10s %10s %9s %5s\n", "scenario",
                  "estimator", "rmse%", "conv_s", "post_rmse%", "post_max%", "us/step", "pass");
    out += buf;
    out += std::string(84, '-') + "\n";
    for (const ReportRow& r : rows) {
        char conv[32];
        if (r.m.converged)
            std::snprintf(conv, sizeof conv, "%9.0f", r.m.convergence_time);
        else
            std::snprintf(conv, sizeof conv, "%9s", "-");
        std::snprintf(buf, sizeof buf, "%-18s %-9s %9.3f %s %10.3f %10.3f %9.2f %5s\n",
                      r.scenario.c_str(), r.estimator.c_str(), 100.0 * r.m.rmse_overall, conv,
                      100.0 * r.m.rmse_post_convergence, 100.0 * r.m.max_abs_error_post,
                      1e6 * r.m.runtime_per_step, r.pass ? "ok" : "FAIL");
        out += buf;
    }
    return out;
}

std::string render_report_csv(const std::string& dir) {
    const std::vector<ReportRow> rows = load_report_rows(dir);
    std::string out =
        "scenario,estimator,rmse_overall,converged,convergence_time,"
        "rmse_post_convergence,max_abs_error_post,runtime_per_step,pass\n";
    char buf[320];
    for (const ReportRow& r : rows) {
        std::snprintf(buf, sizeof buf, "%s,%s,%.12g,%d,%.12g,%.12g,%.12g,%.12g,%d\n",
                      r.scenario.c_str(), r.estimator.c_str(), r.m.rmse_overall,
                      r.m.converged ? 1 : 0,
                      r.m.converged ? r.m.convergence_time : std::nan(""),
                      r.m.rmse_post_convergence, r.m.max_abs_error_post, r.m.runtime_per_step,
                      r.pass ? 1 : 0);
        out += buf;
    }
    return out;
}

} // namespace sockit
