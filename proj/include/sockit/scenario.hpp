#pragma once
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "sockit/cell_sim.hpp"
#include "sockit/pipeline.hpp"
#include "sockit/ukf.hpp"

namespace sockit {

// Coulomb-counting baseline: est[k] = clamp(guess - sum_{j<k} i[j]*dt/c_p).
std::vector<double> coulomb_series(const std::vector<double>& i, double guess, double c_p,
                                   double dt = 1.0);

struct EstimatorMetrics {
    double rmse_overall = 0.0;
    bool converged = false;
    double convergence_time = 0.0;      // s; first sample of a 60 s run with
                                        // |error| < 10%, valid when converged
    double rmse_post_convergence = 0.0; // full-run RMSE when never converged
    double max_abs_error_post = 0.0;
    double runtime_per_step = 0.0;      // s
};

EstimatorMetrics compute_metrics(const std::vector<double>& est,
                                 const std::vector<double>& truth, double dt = 1.0,
                                 double tol = 0.10, int hold = 60);

// Named end-to-end test scenario: truth profile + plant + measurement errors
// + estimator initial guess + frozen pass/fail thresholds.
struct Scenario {
    std::string name;
    std::size_t n = 100000;
    double dt = 1.0;
    ProfileSpec profile;
    ErrorSpec errors;
    bool perturbed_plant = false;
    PlantParams plant{};
    double soc0 = 0.5;  // truth
    double h0 = 0.0;
    double guess = 0.5; // estimator initialization
    std::uint64_t seed = 0;
    PipelineConfig pipeline_cfg{};
    UkfConfig ukf_cfg{};
};

// The six built-in scenario fixtures. Throws on an unknown name.
Scenario make_scenario(const std::string& name);
std::vector<std::string> scenario_names();

// Overlay a JSON config file onto a scenario. Strict: an unknown or
// ill-typed field throws naming the offending key. Recognized groups:
// top-level n/guess/soc0/h0/seed/perturbed_plant, and nested profile{},
// errors{}, pipeline{}, ukf{}, plant{}.
Scenario apply_config(Scenario base, const std::string& json_path);

struct CheckResult {
    std::string name;
    double value;
    double limit;
    bool pass; // value < limit
};

struct SegmentMetrics {
    bool present = false;
    double gain_median = 0.0;
    double cc_identity_max = 0.0; // max |d est - Coulomb increment| in-segment
};

struct ScenarioResult {
    Scenario scenario;
    EstimatorMetrics proposed, ukf, coulomb;
    SegmentMetrics segment;
    std::vector<CheckResult> checks;
    bool pass = false;
};

// Simulate, estimate with all three estimators, evaluate the scenario's
// frozen thresholds, and (when out_dir is non-empty) write truth.csv, one
// estimate CSV per estimator, and summary.json into out_dir.
ScenarioResult run_scenario(const Scenario& sc, const std::string& out_dir = "");

// Render the cross-scenario comparison table from run outputs below `dir`
// (each subdirectory holding a summary.json). Deterministic output: same
// inputs produce identical bytes. Throws listing every missing file.
std::string render_report(const std::string& dir);

// Same table as machine-readable CSV (one row per scenario/estimator pair;
// convergence_time is nan when the estimator never converged).
std::string render_report_csv(const std::string& dir);

} // namespace sockit
