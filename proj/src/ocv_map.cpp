#include "sockit/ocv_map.hpp"

#include "sockit/csv.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace sockit {

namespace {

double synthetic_ocv(double s, double h) {
    const double s9 = std::pow(s, 9.0);
    const double m9 = std::pow(1.0 - s, 9.0);
    return 3.30 + 0.02 * (s - 0.5) + 0.15 * (s9 - m9) + 0.015 * h;
}

std::vector<double> linspace(double lo, double hi, std::size_t n) {
    std::vector<double> v(n);
    for (std::size_t i = 0; i < n; ++i)
        v[i] = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n - 1);
    return v;
}

// index j with knots[j] <= x < knots[j+1], clamped to [0, n-2]
std::size_t cell_index(const std::vector<double>& knots, double x) {
    const auto it = std::upper_bound(knots.begin(), knots.end(), x);
    const std::ptrdiff_t j = (it - knots.begin()) - 1;
    return static_cast<std::size_t>(
        std::clamp<std::ptrdiff_t>(j, 0, static_cast<std::ptrdiff_t>(knots.size()) - 2));
}

} // namespace

OcvMap::OcvMap(std::vector<double> soc_knots, std::vector<double> h_knots,
               std::vector<std::vector<double>> values)
    : soc_(std::move(soc_knots)), h_(std::move(h_knots)), values_(std::move(values)) {
    validate();
}

OcvMap OcvMap::synthetic() {
    auto soc = linspace(0.0, 1.0, 201);
    auto h = linspace(-1.0, 1.0, 21);
    std::vector<std::vector<double>> v(h.size(), std::vector<double>(soc.size()));
    for (std::size_t j = 0; j < h.size(); ++j)
        for (std::size_t i = 0; i < soc.size(); ++i) v[j][i] = synthetic_ocv(soc[i], h[j]);
    return OcvMap(std::move(soc), std::move(h), std::move(v));
}

OcvMap OcvMap::perturbed() {
    auto soc = linspace(0.0, 1.0, 201);
    auto h = linspace(-1.0, 1.0, 21);
    std::vector<std::vector<double>> v(h.size(), std::vector<double>(soc.size()));
    for (std::size_t j = 0; j < h.size(); ++j)
        for (std::size_t i = 0; i < soc.size(); ++i) {
            const double s = soc[i];
            const double w = s + 0.06 * s * (1.0 - s);
            v[j][i] = synthetic_ocv(w, h[j]) + 0.008;
        }
    return OcvMap(std::move(soc), std::move(h), std::move(v));
}

void OcvMap::validate() const {
    if (soc_.size() < 2) throw std::invalid_argument("ocv map: need at least 2 soc knots");
    if (h_.size() < 2) throw std::invalid_argument("ocv map: need at least 2 h knots");
    for (std::size_t i = 1; i < soc_.size(); ++i)
        if (!(soc_[i] > soc_[i - 1]))
            throw std::invalid_argument("ocv map: soc knots not strictly ascending at index " +
                                        std::to_string(i));
    for (std::size_t j = 1; j < h_.size(); ++j)
        if (!(h_[j] > h_[j - 1]))
            throw std::invalid_argument("ocv map: h knots not strictly ascending at index " +
                                        std::to_string(j));
    if (values_.size() != h_.size())
        throw std::invalid_argument("ocv map: expected " + std::to_string(h_.size()) +
                                    " slices, got " + std::to_string(values_.size()));
    for (std::size_t j = 0; j < values_.size(); ++j) {
        const auto& row = values_[j];
        if (row.size() != soc_.size())
            throw std::invalid_argument("ocv map: slice h=" + std::to_string(h_[j]) +
                                        " has wrong length");
        for (std::size_t i = 0; i < row.size(); ++i) {
            if (!std::isfinite(row[i]) || row[i] < 2.0 || row[i] > 4.0)
                throw std::invalid_argument("ocv map: slice h=" + std::to_string(h_[j]) +
                                            " value out of range [2,4] V at soc=" +
                                            std::to_string(soc_[i]));
            if (i > 0 && !(row[i] > row[i - 1]))
                throw std::invalid_argument("ocv map: slice h=" + std::to_string(h_[j]) +
                                            " not strictly increasing at soc=" +
                                            std::to_string(soc_[i]));
        }
    }
}

double OcvMap::slice_value(double h, std::size_t i) const {
    const double hc = std::clamp(h, h_.front(), h_.back());
    const std::size_t j = cell_index(h_, hc);
    const double t = (hc - h_[j]) / (h_[j + 1] - h_[j]);
    return (1.0 - t) * values_[j][i] + t * values_[j + 1][i];
}

double OcvMap::slice_interp(double h, double soc) const {
    const double sc = std::clamp(soc, soc_.front(), soc_.back());
    const std::size_t i = cell_index(soc_, sc);
    const double u = (sc - soc_[i]) / (soc_[i + 1] - soc_[i]);
    return (1.0 - u) * slice_value(h, i) + u * slice_value(h, i + 1);
}

double OcvMap::ocv(double soc, double h, bool* clamped) const {
    if (!std::isfinite(soc) || !std::isfinite(h))
        throw std::invalid_argument("ocv map: non-finite query");
    if (clamped)
        *clamped = soc < soc_.front() || soc > soc_.back() || h < h_.front() || h > h_.back();
    return slice_interp(h, soc);
}

OcvMap::Inversion OcvMap::invert_soc(double ocv_est, double h) const {
    if (!std::isfinite(ocv_est) || !std::isfinite(h))
        throw std::invalid_argument("ocv map: non-finite query");
    const std::size_t n = soc_.size();
    if (ocv_est <= slice_value(h, 0)) return {soc_.front(), true};
    if (ocv_est >= slice_value(h, n - 1)) return {soc_.back(), true};
    // binary search: largest i with slice[i] < ocv_est
    std::size_t lo = 0, hi = n - 1;
    while (hi - lo > 1) {
        const std::size_t mid = (lo + hi) / 2;
        if (slice_value(h, mid) < ocv_est)
            lo = mid;
        else
            hi = mid;
    }
    const double vlo = slice_value(h, lo), vhi = slice_value(h, lo + 1);
    const double t = (ocv_est - vlo) / (vhi - vlo);
    return {soc_[lo] + t * (soc_[lo + 1] - soc_[lo]), false};
}

double OcvMap::inv_slope(double h, double soc, double ceiling) const {
    if (!(ceiling > 0.0)) throw std::invalid_argument("ocv map: inv_slope ceiling must be > 0");
    const double dx = 0.0025;
    const double lo = std::clamp(soc - dx, soc_.front(), soc_.back());
    const double hi = std::clamp(soc + dx, soc_.front(), soc_.back());
    if (!(hi > lo)) return ceiling;
    const double d = (slice_interp(h, hi) - slice_interp(h, lo)) / (hi - lo);
    if (d <= 1.0 / ceiling) return ceiling;
    return std::min(1.0 / d, ceiling);
}

OcvMap OcvMap::load(const std::string& path) {
    const CsvTable t = read_csv(path);
    const std::size_t cs = t.col("soc"), ch = t.col("h"), cv = t.col("ocv");
    if (t.rows.empty()) throw std::runtime_error("ocv map: '" + path + "' has no data rows");
    // h-major order: soc knots repeat within each slice
    std::vector<double> soc, h;
    for (const auto& row : t.rows) {
        if (soc.empty() || row[cs] > soc.back())
            soc.push_back(row[cs]);
        else
            break;
    }
    if (t.rows.size() % soc.size() != 0)
        throw std::runtime_error("ocv map: '" + path + "' row count " +
                                 std::to_string(t.rows.size()) + " not a multiple of " +
                                 std::to_string(soc.size()) + " soc knots");
    const std::size_t nh = t.rows.size() / soc.size();
    std::vector<std::vector<double>> vals(nh, std::vector<double>(soc.size()));
    for (std::size_t j = 0; j < nh; ++j) {
        const double hj = t.rows[j * soc.size()][ch];
        h.push_back(hj);
        for (std::size_t i = 0; i < soc.size(); ++i) {
            const auto& row = t.rows[j * soc.size() + i];
            if (row[cs] != soc[i])
                throw std::runtime_error("ocv map: '" + path + "' slice h=" + std::to_string(hj) +
                                         ": expected soc knot " + std::to_string(soc[i]) +
                                         ", got " + std::to_string(row[cs]));
            if (row[ch] != hj)
                throw std::runtime_error("ocv map: '" + path + "' slice h=" + std::to_string(hj) +
                                         ": inconsistent h value " + std::to_string(row[ch]));
            vals[j][i] = row[cv];
        }
    }
    try {
        return OcvMap(std::move(soc), std::move(h), std::move(vals));
    } catch (const std::invalid_argument& e) {
        throw std::runtime_error("ocv map: '" + path + "': " + e.what());
    }
}

void OcvMap::save(const std::string& path) const {
    std::vector<std::vector<double>> rows;
    rows.reserve(soc_.size() * h_.size());
    for (std::size_t j = 0; j < h_.size(); ++j)
        for (std::size_t i = 0; i < soc_.size(); ++i)
            rows.push_back({soc_[i], h_[j], values_[j][i]});
    write_csv(path, {"soc", "h", "ocv"}, rows, 17); // calibration data: exact round trip
}

} // namespace sockit
