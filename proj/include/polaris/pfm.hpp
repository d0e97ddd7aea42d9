// Copyright (c) 2026 The polaris authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <string>
#include <vector>

namespace polaris {

/// Portable float map. Rows are stored bottom-up as the format requires;
/// the scale's sign encodes endianness (negative = little-endian).
struct PfmImage {
    int channels = 3;  // 1 ("Pf") or 3 ("PF")
    int width = 0;
    int height = 0;
    std::vector<float> data;  // width*height*channels, bottom-up rows
    double scale = -1.0;

    /// Value at top-left-origin coordinates.
    float& at(int x, int y, int c) {
        return data[(static_cast<size_t>(height - 1 - y) * width + x) * channels + c];
    }
    float at(int x, int y, int c) const {
        return data[(static_cast<size_t>(height - 1 - y) * width + x) * channels + c];
    }
};

/// Writes little-endian PFM (scale emitted negative). Bit-exact: the float
/// payload is stored verbatim, NaNs included.
void write_pfm(const std::string& path, const PfmImage& img);

/// Reads PFM, byte-swapping big-endian payloads (positive scale) as needed.
PfmImage read_pfm(const std::string& path);

/// Interleaved top-down doubles (width*height*channels) <-> PfmImage.
PfmImage pfm_from_rows(int width, int height, int channels, const std::vector<double>& topdown);
std::vector<double> pfm_to_rows(const PfmImage& img);

}  // namespace polaris
