#pragma once

// CSV emission and parsing for profiles and scan tables. One header line,
// '.' decimal separator, 17 significant digits so values round-trip exactly.

#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "abtk/analysis.hpp"
#include "abtk/errors.hpp"

namespace abtk {

inline std::string format_g17(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

inline void write_table_csv(const std::string& path, const std::string& header,
                            const std::vector<std::vector<double>>& columns) {
    if (columns.empty()) throw std::invalid_argument("csv table needs columns");
    const std::size_t rows = columns.front().size();
    for (const auto& c : columns) {
        if (c.size() != rows) throw std::invalid_argument("csv columns must have equal length");
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw config_error("cannot open for writing: " + path);
    out << header << "\n";
    for (std::size_t r = 0; r < rows; ++r) {
        for (std::size_t c = 0; c < columns.size(); ++c) {
            if (c) out << ",";
            out << format_g17(columns[c][r]);
        }
        out << "\n";
    }
    if (!out) throw config_error("write failed: " + path);
}

inline void write_profile_csv(const std::string& path, const ScreenProfile& p) {
    write_table_csv(path, "y,intensity", {p.y, p.intensity});
}

inline ScreenProfile read_profile_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw config_error("cannot open for reading: " + path);
    std::string line;
    if (!std::getline(in, line)) throw config_error("empty csv: " + path);
    ScreenProfile p;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::istringstream row(line);
        std::string field;
        if (!std::getline(row, field, ',')) throw config_error("bad csv row in " + path);
        p.y.push_back(std::stod(field));
        if (!std::getline(row, field, ',')) throw config_error("bad csv row in " + path);
        p.intensity.push_back(std::stod(field));
    }
    return p;
}

}  // namespace abtk
