// Copyright (c) 2026 The polaris authors.
// SPDX-License-Identifier: Apache-2.0

#include "polaris/pfm.hpp"

#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <stdexcept>

namespace polaris {

namespace {

void swap_floats(std::vector<float>& data) {
    for (float& f : data) {
        std::uint32_t u;
        std::memcpy(&u, &f, 4);
        u = ((u & 0xFF000000u) >> 24) | ((u & 0x00FF0000u) >> 8) | ((u & 0x0000FF00u) << 8) |
            ((u & 0x000000FFu) << 24);
        std::memcpy(&f, &u, 4);
    }
}

std::string read_token(std::istream& in) {
    std::string tok;
    in >> tok;
    return tok;
}

}  // namespace

void write_pfm(const std::string& path, const PfmImage& img) {
    if (img.channels != 1 && img.channels != 3)
        throw std::runtime_error("write_pfm: channels must be 1 or 3");
    if (img.data.size() != static_cast<size_t>(img.width) * img.height * img.channels)
        throw std::runtime_error("write_pfm: data size does not match dimensions");

    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("write_pfm: cannot open '" + path + "'");
    out << (img.channels == 3 ? "PF" : "Pf") << '\n'
        << img.width << ' ' << img.height << '\n'
        << "-1.0" << '\n';

    std::vector<float> payload = img.data;
    if constexpr (std::endian::native == std::endian::big) swap_floats(payload);
    out.write(reinterpret_cast<const char*>(payload.data()),
              static_cast<std::streamsize>(payload.size() * sizeof(float)));
    if (!out) throw std::runtime_error("write_pfm: write failed for '" + path + "'");
}

PfmImage read_pfm(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("read_pfm: cannot open '" + path + "'");

    PfmImage img;
    const std::string magic = read_token(in);
    if (magic == "PF")
        img.channels = 3;
    else if (magic == "Pf")
        img.channels = 1;
    else
        throw std::runtime_error("read_pfm: malformed header in '" + path + "' (bad magic)");

    const std::string w = read_token(in), h = read_token(in), s = read_token(in);
    try {
        img.width = std::stoi(w);
        img.height = std::stoi(h);
        img.scale = std::stod(s);
    } catch (const std::exception&) {
        throw std::runtime_error("read_pfm: malformed header in '" + path + "'");
    }
    if (img.width <= 0 || img.height <= 0 || img.scale == 0.0)
        throw std::runtime_error("read_pfm: malformed header in '" + path + "'");
    in.get();  // single whitespace byte after the scale line

    const size_t count = static_cast<size_t>(img.width) * img.height * img.channels;
    img.data.resize(count);
    in.read(reinterpret_cast<char*>(img.data.data()),
            static_cast<std::streamsize>(count * sizeof(float)));
    if (static_cast<size_t>(in.gcount()) != count * sizeof(float))
        throw std::runtime_error("read_pfm: truncated payload in '" + path + "'");

    const bool file_little = img.scale < 0.0;
    const bool host_little = std::endian::native == std::endian::little;
    if (file_little != host_little) swap_floats(img.data);
    return img;
}

PfmImage pfm_from_rows(int width, int height, int channels, const std::vector<double>& topdown) {
    PfmImage img;
    img.channels = channels;
    img.width = width;
    img.height = height;
    img.data.resize(topdown.size());
    for (int y = 0; y < height; ++y)
        for (int x = 0; x < width; ++x)
            for (int c = 0; c < channels; ++c)
                img.at(x, y, c) =
                    static_cast<float>(topdown[(static_cast<size_t>(y) * width + x) * channels + c]);
    return img;
}

std::vector<double> pfm_to_rows(const PfmImage& img) {
    std::vector<double> out(img.data.size());
    for (int y = 0; y < img.height; ++y)
        for (int x = 0; x < img.width; ++x)
            for (int c = 0; c < img.channels; ++c)
                out[(static_cast<size_t>(y) * img.width + x) * img.channels + c] = img.at(x, y, c);
    return out;
}

}  // namespace polaris
