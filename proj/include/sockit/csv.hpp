#pragma once
#include <string>
#include <vector>

namespace sockit {

// Minimal numeric CSV table: one header row, then rows of doubles.
struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<double>> rows;

    std::size_t col(const std::string& name) const; // throws if absent
};

// Throws std::runtime_error naming the file and offending line on parse
// failure (non-numeric cell, ragged row, missing file).
CsvTable read_csv(const std::string& path);

// `digits` is the significant-digit count passed to %g; 17 round-trips a
// double exactly.
void write_csv(const std::string& path, const std::vector<std::string>& header,
               const std::vector<std::vector<double>>& rows, int digits = 12);

} // namespace sockit
