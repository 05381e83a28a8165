#include <CLI11.hpp>

#include "sockit/cell_sim.hpp"
#include "sockit/csv.hpp"
#include "sockit/ocv_map.hpp"
#include "sockit/scenario.hpp"
#include "sockit/ukf.hpp"

#include <cinttypes>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

namespace {

int cmd_run(const std::string& name, const std::string& config, const std::string& out,
            bool seed_set, std::uint64_t seed) {
    sockit::Scenario sc = sockit::make_scenario(name);
    if (!config.empty()) sc = sockit::apply_config(sc, config);
    if (seed_set) sc.seed = seed;

    const sockit::ScenarioResult res = sockit::run_scenario(sc, out);
    std::printf("scenario %-18s seed %" PRIu64 "  (%zu samples)\n", sc.name.c_str(), sc.seed,
                sc.n);
    auto show = [](const char* est, const sockit::EstimatorMetrics& m) {
        char conv[32];
        if (m.converged)
            std::snprintf(conv, sizeof conv, "%.0f s", m.convergence_time);
        else
            std::snprintf(conv, sizeof conv, "never");
        std::printf("  %-9s rmse %6.3f%%  conv %-8s post rmse %6.3f%%  max %6.3f%%  %7.2f us/step\n",
                    est, 100.0 * m.rmse_overall, conv, 100.0 * m.rmse_post_convergence,
                    100.0 * m.max_abs_error_post, 1e6 * m.runtime_per_step);
    };
    show("proposed", res.proposed);
    show("ukf", res.ukf);
    show("coulomb", res.coulomb);
    if (res.segment.present)
        std::printf("  segment   gain median %.3e  coulomb identity max %.3e\n",
                    res.segment.gain_median, res.segment.cc_identity_max);
    for (const auto& c : res.checks)
        std::printf("  check %-40s %11.4e < %-10.3g %s\n", c.name.c_str(), c.value, c.limit,
                    c.pass ? "ok" : "FAIL");
    std::printf("result: %s\n", res.pass ? "PASS" : "FAIL");
    return res.pass ? 0 : 1;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"soc-kit: battery state-of-charge estimation toolkit"};
    app.require_subcommand(1);

    auto* run = app.add_subcommand("run", "Simulate a scenario and run all estimators");
    std::string run_scenario_name, run_config, run_out;
    std::uint64_t run_seed = 0;
    run->add_option("--scenario", run_scenario_name, "ideal, flat_zone, current_bias, "
                                                     "quantization, map_mismatch, or "
                                                     "constant_segment")
        ->required();
    run->add_option("--config", run_config, "JSON overrides for the scenario");
    run->add_option("--out", run_out, "output directory")->required();
    auto* seed_opt = run->add_option("--seed", run_seed, "RNG seed (default: fixture seed)");

    auto* report = app.add_subcommand("report", "Summarize one or more run outputs");
    std::string report_in;
    report->add_option("--in", report_in, "directory of run outputs")->required();

    auto* gen_map = app.add_subcommand("gen-map", "Write the synthetic OCV map as CSV");
    std::string map_out;
    bool map_perturbed = false;
    gen_map->add_option("--out", map_out, "output CSV path")->required();
    gen_map->add_flag("--perturbed", map_perturbed, "write the warped/offset variant");

    auto* gen_prof = app.add_subcommand("gen-profile", "Write a synthetic current profile as CSV");
    std::string prof_kind = "bounded", prof_out, prof_config;
    double prof_duration = 0.0;
    std::uint64_t prof_seed = 1;
    gen_prof->add_option("--kind", prof_kind, "drive, bounded, or csv")->required();
    gen_prof->add_option("--duration", prof_duration, "profile length in seconds")->required();
    gen_prof->add_option("--seed", prof_seed, "RNG seed");
    gen_prof->add_option("--out", prof_out, "output CSV path")->required();
    gen_prof->add_option("--config", prof_config, "JSON overrides (profile{} group)");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*run)
            return cmd_run(run_scenario_name, run_config, run_out, seed_opt->count() > 0,
                           run_seed);
        if (*report) {
            std::fputs(sockit::render_report(report_in).c_str(), stdout);
            const std::string csv = sockit::render_report_csv(report_in);
            const std::string csv_path =
                (std::filesystem::path(report_in) / "report.csv").string();
            std::ofstream out(csv_path);
            if (!out) throw std::runtime_error("report: cannot write '" + csv_path + "'");
            out << csv;
            std::printf("wrote %s\n", csv_path.c_str());
            return 0;
        }
        if (*gen_map) {
            (map_perturbed ? sockit::OcvMap::perturbed() : sockit::OcvMap::synthetic())
                .save(map_out);
            std::printf("wrote %s\n", map_out.c_str());
            return 0;
        }
        if (*gen_prof) {
            sockit::Scenario base = sockit::make_scenario("flat_zone");
            base.dt = 1.0;
            if (!prof_config.empty()) base = sockit::apply_config(base, prof_config);
            sockit::ProfileSpec spec = base.profile;
            if (prof_kind == "drive")
                spec.kind = sockit::ProfileSpec::Kind::drive;
            else if (prof_kind == "bounded")
                spec.kind = sockit::ProfileSpec::Kind::bounded;
            else if (prof_kind == "csv")
                spec.kind = sockit::ProfileSpec::Kind::csv;
            else
                throw std::runtime_error("gen-profile: unknown kind '" + prof_kind + "'");
            const auto n = static_cast<std::size_t>(prof_duration / base.dt);
            const std::vector<double> i = sockit::gen_profile(spec, n, prof_seed, base.dt);
            std::vector<std::vector<double>> rows(n);
            for (std::size_t k = 0; k < n; ++k)
                rows[k] = {static_cast<double>(k) * base.dt, i[k]};
            sockit::write_csv(prof_out, {"t", "i"}, rows);
            std::printf("wrote %s (%zu samples)\n", prof_out.c_str(), n);
            return 0;
        }
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    }
    return 0;
}
