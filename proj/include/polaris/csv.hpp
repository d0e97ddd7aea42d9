// Copyright (c) 2026 The polaris authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <string>
#include <vector>

namespace polaris {

/// Shortest representation with 17 significant digits, enough for the text
/// to round-trip back to the identical double.
std::string format_double(double v);

/// RFC 4180-style CSV with '.' decimal separators and "\n" line endings.
/// Rows must be rectangular (same length as headers).
void write_csv(const std::string& path, const std::vector<std::string>& headers,
               const std::vector<std::vector<std::string>>& rows);

void write_csv(const std::string& path, const std::vector<std::string>& headers,
               const std::vector<std::vector<double>>& rows);

}  // namespace polaris
