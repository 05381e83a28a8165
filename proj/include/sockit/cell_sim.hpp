#pragma once
#include <cstdint>
#include <string>
#include <vector>

#include "sockit/ocv_map.hpp"

namespace sockit {

// Second-order RC equivalent-circuit plant with hysteresis-aware OCV.
// Positive current = discharge.
struct PlantParams {
    double r0 = 0.05;      // series resistance (ohm)
    double r1 = 0.03;      // first RC branch (ohm, farad)
    double c1 = 1000.0;
    double r2 = 0.02;      // second RC branch
    double c2 = 5000.0;
    double c_p = 4320.0;   // capacity (A*s)
    double hyst_c = 1.2;   // hysteresis current scale (A*s per step unit)
};

struct SimTrace {
    std::vector<double> t, i_true, v_true, soc_true, h_true;
    bool truncated = false; // SOC left [0, 1]; trace stops at the violation
};

// Exact zero-order-hold simulation: RC states and SOC at sample k reflect
// currents up to k-1; terminal voltage at k uses the current at k.
SimTrace simulate_cell(const std::vector<double>& profile, const PlantParams& p,
                       const OcvMap& map, double soc0, double h0, double dt = 1.0);

// Mid-tread uniform quantizer: floor(v/lsb + 0.5)*lsb with lsb =
// v_max/(2^bits - 1). Requires 0 <= v; saturates at v_max (flag optional).
// bits must be in [4, 24].
double quantize_voltage(double v, int bits, double v_max, bool* saturated = nullptr);
double quantizer_lsb(int bits, double v_max);

// Measurement-error model applied to a truth trace, in order: current bias,
// additive Gaussian voltage noise, then optional ADC quantization.
struct ErrorSpec {
    double current_bias = 0.0; // added to true current (A)
    double v_noise = 0.0;      // Gaussian std on voltage (V)
    int adc_bits = 0;          // 0 disables quantization
    double adc_vmax = 5.0;
};

struct Telemetry {
    std::vector<double> t, i, v;
};

Telemetry apply_errors(const SimTrace& trace, const ErrorSpec& e, std::uint64_t seed);

// Synthetic current profiles. All kinds honor an optional constant segment
// override of `seg_duration` samples at `seg_amp` starting at `seg_start`.
struct ProfileSpec {
    enum class Kind { drive, bounded, csv };
    Kind kind = Kind::bounded;

    // drive: band-limited noise i = clamp(ar1 * sd, +-amp) + mean
    double drive_sd = 1.0;
    double drive_mean = 0.0;
    double drive_tau = 10.0; // AR(1) correlation time (s)

    // bounded: one-signed discharge/charge legs bouncing between SOC bounds,
    // with excitation dither, edge tapering, leg ramp-in, and rest insertions.
    double band_lo = 0.20, band_hi = 0.80; // SOC band
    double soc0 = 0.5;                     // starting SOC used for the feedback
    double base_lo = 0.28, base_hi = 0.48; // per-leg base current magnitude (A)
    double dither = 0.15;                  // AR(1) excitation fraction
    bool rich_edges_only = false;          // excitation only near band edges
    double rich_zone = 0.06;               // edge zone width when edges-only
    double dither_tau = 8.0;               // dither correlation time (s)
    int edge_rest = 300;                   // rest length at each turn (s)
    int midrest_every = 0;                 // 0 disables mid-leg rests
    int midrest_len = 180;
    double taper_width = 0.15;             // current taper near band edges
    double taper_floor = 0.10;
    int ramp_len = 240;                    // per-leg ramp-in (s)
    int start_rest = 0;                    // initial rest (s)
    double c_p = 4320.0;

    double amp = 3.0; // hard magnitude limit (A)

    // constant segment insertion (seg_duration = 0 disables)
    int seg_start = 0;
    int seg_duration = 0;
    double seg_amp = 0.0;

    std::string csv_path; // for Kind::csv, header "t,i"
};

// n samples at spacing dt. Throws on invalid spec (e.g. zero-length segment
// request, bad band, missing csv).
std::vector<double> gen_profile(const ProfileSpec& spec, std::size_t n, std::uint64_t seed,
                                double dt = 1.0);

} // namespace sockit
