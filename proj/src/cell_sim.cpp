#include "sockit/cell_sim.hpp"

#include "sockit/csv.hpp"
#include "sockit/hysteresis.hpp"
#include "sockit/rng.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace sockit {

SimTrace simulate_cell(const std::vector<double>& profile, const PlantParams& p,
                       const OcvMap& map, double soc0, double h0, double dt) {
    if (!(p.r0 > 0.0 && p.r1 > 0.0 && p.c1 > 0.0 && p.r2 > 0.0 && p.c2 > 0.0))
        throw std::invalid_argument("simulate_cell: RC parameters must be > 0");
    if (!(p.c_p > 0.0)) throw std::invalid_argument("simulate_cell: c_p must be > 0");
    if (!(dt > 0.0)) throw std::invalid_argument("simulate_cell: dt must be > 0");
    if (!(soc0 >= 0.0 && soc0 <= 1.0))
        throw std::invalid_argument("simulate_cell: soc0 must be in [0, 1]");
    const double a1 = std::exp(-dt / (p.r1 * p.c1));
    const double a2 = std::exp(-dt / (p.r2 * p.c2));
    HysteresisTracker hyst(p.hyst_c, h0, dt);

    SimTrace tr;
    const std::size_t n = profile.size();
    tr.t.reserve(n);
    tr.i_true.reserve(n);
    tr.v_true.reserve(n);
    tr.soc_true.reserve(n);
    tr.h_true.reserve(n);

    double v1 = 0.0, v2 = 0.0, soc = soc0, h = h0;
    for (std::size_t k = 0; k < n; ++k) {
        const double i = profile[k];
        if (!std::isfinite(i))
            throw std::invalid_argument("simulate_cell: non-finite current at sample " +
                                        std::to_string(k));
        if (k > 0) {
            const double ip = profile[k - 1];
            v1 = a1 * v1 + p.r1 * (1.0 - a1) * ip;
            v2 = a2 * v2 + p.r2 * (1.0 - a2) * ip;
            soc -= ip * dt / p.c_p;
            h = hyst.advance(ip);
        }
        if (soc < 0.0 || soc > 1.0) {
            tr.truncated = true;
            break;
        }
        tr.t.push_back(static_cast<double>(k) * dt);
        tr.i_true.push_back(i);
        tr.soc_true.push_back(soc);
        tr.h_true.push_back(h);
        tr.v_true.push_back(map.ocv(soc, h) - p.r0 * i - v1 - v2);
    }
    return tr;
}

double quantizer_lsb(int bits, double v_max) {
    if (bits < 4 || bits > 24)
        throw std::invalid_argument("quantizer: bits must be in [4, 24]");
    if (!(v_max > 0.0)) throw std::invalid_argument("quantizer: v_max must be > 0");
    return v_max / static_cast<double>((1u << bits) - 1u);
}

double quantize_voltage(double v, int bits, double v_max, bool* saturated) {
    const double lsb = quantizer_lsb(bits, v_max);
    if (!(v >= 0.0))
        throw std::invalid_argument("quantizer: voltage must be >= 0");
    bool sat = false;
    double q = std::floor(v / lsb + 0.5) * lsb;
    if (q > v_max) {
        q = v_max;
        sat = true;
    }
    if (saturated) *saturated = sat;
    return q;
}

Telemetry apply_errors(const SimTrace& trace, const ErrorSpec& e, std::uint64_t seed) {
    if (e.v_noise < 0.0) throw std::invalid_argument("apply_errors: v_noise must be >= 0");
    Rng rng(seed);
    Telemetry tm;
    tm.t = trace.t;
    tm.i.reserve(trace.i_true.size());
    tm.v.reserve(trace.v_true.size());
    for (double i : trace.i_true) tm.i.push_back(i + e.current_bias);
    for (double v : trace.v_true) {
        double vm = v + (e.v_noise > 0.0 ? e.v_noise * rng.normal() : 0.0);
        if (e.adc_bits > 0) vm = quantize_voltage(vm, e.adc_bits, e.adc_vmax);
        tm.v.push_back(vm);
    }
    return tm;
}

namespace {

std::vector<double> gen_drive(const ProfileSpec& s, std::size_t n, Rng& rng, double dt) {
    if (!(s.drive_tau > 0.0)) throw std::invalid_argument("gen_profile: drive_tau must be > 0");
    const double rho = std::exp(-dt / s.drive_tau);
    const double g = std::sqrt(1.0 - rho * rho);
    std::vector<double> out(n);
    double x = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
        x = rho * x + g * rng.normal();
        out[k] = std::clamp(x * s.drive_sd, -s.amp, s.amp) + s.drive_mean;
    }
    return out;
}

std::vector<double> gen_bounded(const ProfileSpec& s, std::size_t n, Rng& rng, double dt) {
    if (!(s.band_lo >= 0.0 && s.band_hi <= 1.0 && s.band_lo < s.band_hi))
        throw std::invalid_argument("gen_profile: need 0 <= band_lo < band_hi <= 1");
    if (!(s.soc0 >= s.band_lo && s.soc0 <= s.band_hi))
        throw std::invalid_argument("gen_profile: soc0 must lie inside the band");
    if (!(s.base_lo > 0.0 && s.base_lo <= s.base_hi))
        throw std::invalid_argument("gen_profile: need 0 < base_lo <= base_hi");
    if (!(s.c_p > 0.0)) throw std::invalid_argument("gen_profile: c_p must be > 0");
    if (s.ramp_len < 1) throw std::invalid_argument("gen_profile: ramp_len must be >= 1");
    const double rho = std::exp(-dt / s.dither_tau);
    const double g = std::sqrt(1.0 - rho * rho);
    const bool has_seg = s.seg_duration > 0;

    std::vector<double> out(n);
    double x = 0.0;
    double soc = s.soc0;
    double sgn = (s.band_hi - soc) < (soc - s.band_lo) ? 1.0 : -1.0;
    double leg_base = rng.uniform(s.base_lo, s.base_hi);
    int rest = s.start_rest;
    int since_rest = 0;
    int leg_age = 0;
    for (std::size_t k = 0; k < n; ++k) {
        x = rho * x + g * rng.normal();
        if (has_seg && k >= static_cast<std::size_t>(s.seg_start) &&
            k < static_cast<std::size_t>(s.seg_start) + static_cast<std::size_t>(s.seg_duration)) {
            out[k] = s.seg_amp;
            soc -= s.seg_amp * dt / s.c_p;
            continue;
        }
        if (rest > 0) {
            --rest;
            out[k] = 0.0;
            continue;
        }
        const double target = sgn > 0.0 ? s.band_lo : s.band_hi;
        double dist = std::abs(soc - target);
        if (dist < 0.004) {
            if (s.edge_rest > 0) rest = s.edge_rest + static_cast<int>(rng.integer(120));
            sgn = -sgn;
            leg_base = rng.uniform(s.base_lo, s.base_hi);
            since_rest = 0;
            leg_age = 0;
            if (s.edge_rest > 0) {
                out[k] = 0.0;
                continue;
            }
        }
        ++since_rest;
        ++leg_age;
        if (s.midrest_every > 0 && since_rest > s.midrest_every) {
            rest = s.midrest_len + static_cast<int>(rng.integer(60));
            since_rest = 0;
            out[k] = 0.0;
            continue;
        }
        const double ramp = std::min(1.0, static_cast<double>(leg_age) / s.ramp_len);
        double lively = 1.0;
        if (s.rich_edges_only) {
            const double edge_dist =
                std::min(std::abs(soc - s.band_lo), std::abs(soc - s.band_hi));
            lively = edge_dist < s.rich_zone ? 1.0 : 0.0;
        }
        const double taper = std::clamp(dist / s.taper_width, s.taper_floor, 1.0);
        const double mag =
            std::clamp((leg_base + lively * std::abs(x) * s.dither) * taper * ramp, 0.01, s.amp);
        out[k] = sgn * mag;
        soc -= sgn * mag * dt / s.c_p;
    }
    return out;
}

std::vector<double> gen_csv(const ProfileSpec& s, std::size_t n) {
    if (s.csv_path.empty()) throw std::invalid_argument("gen_profile: csv_path is empty");
    const CsvTable t = read_csv(s.csv_path);
    const std::size_t ci = t.col("i");
    if (t.rows.size() < n)
        throw std::invalid_argument("gen_profile: csv '" + s.csv_path + "' has " +
                                    std::to_string(t.rows.size()) + " rows, need " +
                                    std::to_string(n));
    std::vector<double> out(n);
    for (std::size_t k = 0; k < n; ++k) out[k] = t.rows[k][ci];
    return out;
}

} // namespace

std::vector<double> gen_profile(const ProfileSpec& spec, std::size_t n, std::uint64_t seed,
                                double dt) {
    if (n == 0) throw std::invalid_argument("gen_profile: duration must be > 0 samples");
    if (!(dt > 0.0)) throw std::invalid_argument("gen_profile: dt must be > 0");
    if (!(spec.amp > 0.0)) throw std::invalid_argument("gen_profile: amp must be > 0");
    if (spec.seg_duration < 0)
        throw std::invalid_argument("gen_profile: seg_duration must be >= 0");
    if (spec.seg_duration > 0 && spec.seg_start < 0)
        throw std::invalid_argument("gen_profile: seg_start must be >= 0");
    if (!(spec.dither_tau > 0.0))
        throw std::invalid_argument("gen_profile: dither_tau must be > 0");

    Rng rng(seed);
    switch (spec.kind) {
        case ProfileSpec::Kind::drive: {
            auto out = gen_drive(spec, n, rng, dt);
            if (spec.seg_duration > 0)
                for (std::size_t k = static_cast<std::size_t>(spec.seg_start);
                     k < std::min(n, static_cast<std::size_t>(spec.seg_start) +
                                         static_cast<std::size_t>(spec.seg_duration));
                     ++k)
                    out[k] = spec.seg_amp;
            return out;
        }
        case ProfileSpec::Kind::bounded:
            return gen_bounded(spec, n, rng, dt);
        case ProfileSpec::Kind::csv: {
            auto out = gen_csv(spec, n);
            if (spec.seg_duration > 0)
                for (std::size_t k = static_cast<std::size_t>(spec.seg_start);
                     k < std::min(n, static_cast<std::size_t>(spec.seg_start) +
                                         static_cast<std::size_t>(spec.seg_duration));
                     ++k)
                    out[k] = spec.seg_amp;
            return out;
        }
    }
    throw std::invalid_argument("gen_profile: unknown kind");
}

} // namespace sockit
