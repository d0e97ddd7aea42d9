// Copyright (c) 2026 The polaris authors.
// SPDX-License-Identifier: Apache-2.0

#include "polaris/csv.hpp"

#include <cstdio>
#include <fstream>
#include <stdexcept>

namespace polaris {

std::string format_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

void write_csv(const std::string& path, const std::vector<std::string>& headers,
               const std::vector<std::vector<std::string>>& rows) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("write_csv: cannot open '" + path + "'");

    auto emit_row = [&out](const std::vector<std::string>& cells) {
        for (size_t i = 0; i < cells.size(); ++i) {
            if (i) out << ',';
            out << cells[i];
        }
        out << '\n';
    };

    emit_row(headers);
    for (const auto& row : rows) {
        if (row.size() != headers.size())
            throw std::runtime_error("write_csv: row width does not match headers");
        emit_row(row);
    }
    if (!out) throw std::runtime_error("write_csv: write failed for '" + path + "'");
}

void write_csv(const std::string& path, const std::vector<std::string>& headers,
               const std::vector<std::vector<double>>& rows) {
    std::vector<std::vector<std::string>> text;
    text.reserve(rows.size());
    for (const auto& row : rows) {
        std::vector<std::string> cells;
        cells.reserve(row.size());
        for (double v : row) cells.push_back(format_double(v));
        text.push_back(std::move(cells));
    }
    write_csv(path, headers, text);
}

}  // namespace polaris
