#include "sockit/csv.hpp"

#include <cerrno>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace sockit {

std::size_t CsvTable::col(const std::string& name) const {
    for (std::size_t i = 0; i < header.size(); ++i)
        if (header[i] == name) return i;
    throw std::runtime_error("csv: missing column '" + name + "'");
}

static std::vector<std::string> split_line(const std::string& line) {
    std::vector<std::string> out;
    std::string cell;
    std::stringstream ss(line);
    while (std::getline(ss, cell, ',')) {
        // trim surrounding whitespace
        const auto b = cell.find_first_not_of(" \t\r");
        const auto e = cell.find_last_not_of(" \t\r");
        out.push_back(b == std::string::npos ? std::string() : cell.substr(b, e - b + 1));
    }
    if (!line.empty() && line.back() == ',') out.emplace_back();
    return out;
}

CsvTable read_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("csv: cannot open '" + path + "'");
    CsvTable t;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        auto cells = split_line(line);
        if (t.header.empty()) {
            t.header = cells;
            continue;
        }
        if (cells.size() != t.header.size())
            throw std::runtime_error("csv: '" + path + "' line " + std::to_string(lineno) +
                                     ": expected " + std::to_string(t.header.size()) +
                                     " cells, got " + std::to_string(cells.size()));
        std::vector<double> row;
        row.reserve(cells.size());
        for (const auto& c : cells) {
            char* end = nullptr;
            errno = 0;
            const double v = std::strtod(c.c_str(), &end);
            if (c.empty() || end != c.c_str() + c.size() || errno == ERANGE)
                throw std::runtime_error("csv: '" + path + "' line " + std::to_string(lineno) +
                                         ": non-numeric cell '" + c + "'");
            row.push_back(v);
        }
        t.rows.push_back(std::move(row));
    }
    if (t.header.empty())
        throw std::runtime_error("csv: '" + path + "' is empty");
    return t;
}

void write_csv(const std::string& path, const std::vector<std::string>& header,
               const std::vector<std::vector<double>>& rows, int digits) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("csv: cannot write '" + path + "'");
    for (std::size_t i = 0; i < header.size(); ++i)
        out << (i ? "," : "") << header[i];
    out << '\n';
    char buf[64];
    for (const auto& row : rows) {
        for (std::size_t i = 0; i < row.size(); ++i) {
            std::snprintf(buf, sizeof buf, "%.*g", digits, row[i]);
            out << (i ? "," : "") << buf;
        }
        out << '\n';
    }
    if (!out) throw std::runtime_error("csv: write failed for '" + path + "'");
}

} // namespace sockit
