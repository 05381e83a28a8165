#pragma once
#include <string>
#include <vector>

namespace sockit {

// Open-circuit-voltage surface OCV(soc, h) sampled on a rectangular grid of
// SOC knots x hysteresis knots, evaluated bilinearly. Each constant-h slice
// must be strictly increasing in SOC so it can be inverted.
class OcvMap {
public:
    OcvMap(std::vector<double> soc_knots, std::vector<double> h_knots,
           std::vector<std::vector<double>> values); // values[h_index][soc_index]

    // Synthetic LFP-like fixture: 201 SOC knots x 21 h knots,
    //   ocv = 3.30 + 0.02*(soc-0.5) + 0.15*(soc^9 - (1-soc)^9) + 0.015*h
    static OcvMap synthetic();
    // Same surface with the SOC axis warped by s + 0.06*s*(1-s) and a uniform
    // +8 mV offset; models a miscalibrated map.
    static OcvMap perturbed();

    // CSV layout: header "soc,h,ocv", one row per grid point, h-major order.
    // Errors name the offending knot or slice.
    static OcvMap load(const std::string& path);
    void save(const std::string& path) const;

    // Bilinear evaluation; soc and h are clamped to the grid span. `clamped`
    // (optional) reports whether clamping occurred.
    double ocv(double soc, double h, bool* clamped = nullptr) const;

    struct Inversion {
        double soc;
        bool saturated; // ocv fell outside the slice's value span
    };
    // Invert the constant-h slice: find soc with slice(soc) == ocv_est.
    Inversion invert_soc(double ocv_est, double h) const;

    // d(soc)/d(ocv) of the constant-h slice at `soc`, from a central
    // difference with half-width 0.0025 SOC, capped at `ceiling` (1/V units).
    // Flat regions return the ceiling.
    double inv_slope(double h, double soc, double ceiling = 20000.0) const;

    const std::vector<double>& soc_knots() const { return soc_; }
    const std::vector<double>& h_knots() const { return h_; }
    double value(std::size_t h_index, std::size_t soc_index) const {
        return values_[h_index][soc_index];
    }

private:
    void validate() const;
    // slice value at soc index i, h interpolated
    double slice_value(double h, std::size_t i) const;
    double slice_interp(double h, double soc) const;

    std::vector<double> soc_, h_;
    std::vector<std::vector<double>> values_;
};

} // namespace sockit
