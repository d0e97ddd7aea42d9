// Copyright (c) 2026 The polaris authors.
// SPDX-License-Identifier: Apache-2.0

#include <cstdint>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include <doctest.h>

#include "polaris/csv.hpp"
#include "polaris/pfm.hpp"

using namespace polaris;
namespace fs = std::filesystem;

namespace {

fs::path temp_file(const std::string& name) {
    const fs::path dir = fs::temp_directory_path() / "polaris_io_tests";
    fs::create_directories(dir);
    return dir / name;
}

std::string slurp(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

bool bits_equal(float a, float b) {
    std::uint32_t ua, ub;
    std::memcpy(&ua, &a, 4);
    std::memcpy(&ub, &b, 4);
    return ua == ub;
}

}  // namespace

TEST_CASE("write_pfm 1x1 layout") {
    PfmImage img;
    img.channels = 3;
    img.width = 1;
    img.height = 1;
    img.data = {1.0f, 2.0f, 3.0f};
    const fs::path path = temp_file("one.pfm");
    write_pfm(path.string(), img);

    const std::string bytes = slurp(path);
    CHECK(bytes.substr(0, 3) == "PF\n");
    CHECK(bytes.substr(3, 4) == "1 1\n");
    // Header (3 lines) then exactly 12 payload bytes.
    const size_t header_end = bytes.find('\n', bytes.find('\n', 3) + 1) + 1;
    CHECK(bytes.size() - header_end == 12);
}

TEST_CASE("pfm round trip is bit exact, NaN included") {
    PfmImage img;
    img.channels = 3;
    img.width = 3;
    img.height = 2;
    img.data.assign(18, 0.0f);
    std::mt19937_64 rng(61);
    std::uniform_real_distribution<float> u(-10.0f, 10.0f);
    for (float& f : img.data) f = u(rng);
    // Non-finite payloads travel verbatim.
    const std::uint32_t nan_bits = 0x7fc12345u;
    std::memcpy(&img.data[4], &nan_bits, 4);
    img.data[5] = std::numeric_limits<float>::infinity();
    img.data[6] = -0.0f;

    const fs::path path = temp_file("roundtrip.pfm");
    write_pfm(path.string(), img);
    const PfmImage back = read_pfm(path.string());
    REQUIRE(back.data.size() == img.data.size());
    CHECK(back.channels == 3);
    CHECK(back.width == 3);
    CHECK(back.height == 2);
    for (size_t i = 0; i < img.data.size(); ++i) CHECK(bits_equal(back.data[i], img.data[i]));
}

TEST_CASE("pfm row order is bottom-up") {
    PfmImage img;
    img.channels = 1;
    img.width = 2;
    img.height = 2;
    img.data.assign(4, 0.0f);
    img.at(0, 0, 0) = 1.0f;  // top-left
    img.at(1, 1, 0) = 2.0f;  // bottom-right
    // Bottom row is stored first.
    CHECK(img.data[1] == 2.0f);
    CHECK(img.data[2] == 1.0f);
}

TEST_CASE("read_pfm error diagnostics") {
    const fs::path bad_magic = temp_file("bad_magic.pfm");
    std::ofstream(bad_magic, std::ios::binary) << "P6\n1 1\n-1.0\n????";
    CHECK_THROWS_WITH_AS(read_pfm(bad_magic.string()), doctest::Contains("malformed header"),
                         std::runtime_error);

    const fs::path truncated = temp_file("truncated.pfm");
    {
        std::ofstream out(truncated, std::ios::binary);
        out << "PF\n1 1\n-1.0\n";
        const float v = 1.0f;
        out.write(reinterpret_cast<const char*>(&v), 4);
        out.write(reinterpret_cast<const char*>(&v), 4);  // one float short of 12 bytes
    }
    CHECK_THROWS_WITH_AS(read_pfm(truncated.string()), doctest::Contains("truncated"),
                         std::runtime_error);
}

TEST_CASE("read_pfm handles big-endian payloads") {
    const fs::path path = temp_file("big_endian.pfm");
    {
        std::ofstream out(path, std::ios::binary);
        out << "Pf\n2 1\n1.0\n";  // positive scale = big-endian
        const float values[2] = {1.5f, -2.25f};
        for (float v : values) {
            std::uint32_t u;
            std::memcpy(&u, &v, 4);
            const unsigned char bytes[4] = {static_cast<unsigned char>(u >> 24),
                                            static_cast<unsigned char>(u >> 16),
                                            static_cast<unsigned char>(u >> 8),
                                            static_cast<unsigned char>(u)};
            out.write(reinterpret_cast<const char*>(bytes), 4);
        }
    }
    const PfmImage img = read_pfm(path.string());
    CHECK(img.data[0] == 1.5f);
    CHECK(img.data[1] == -2.25f);
}

TEST_CASE("write_csv") {
    const fs::path path = temp_file("simple.csv");
    write_csv(path.string(), {"a", "b"}, std::vector<std::vector<double>>{{1.0, 2.0}});
    CHECK(slurp(path) == "a,b\n1,2\n");

    const fs::path empty = temp_file("empty.csv");
    write_csv(empty.string(), {"x"}, std::vector<std::vector<double>>{});
    CHECK(slurp(empty) == "x\n");

    // 17 significant digits round-trip to the identical double.
    const fs::path rt = temp_file("roundtrip.csv");
    const double value = 0.1;
    write_csv(rt.string(), {"v"}, std::vector<std::vector<double>>{{value}});
    const std::string text = slurp(rt);
    const double parsed = std::stod(text.substr(2));
    CHECK(parsed == value);

    CHECK_THROWS(write_csv(path.string(), {"a", "b"}, std::vector<std::vector<double>>{{1.0}}));
}
