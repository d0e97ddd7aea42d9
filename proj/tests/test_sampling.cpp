// Copyright (c) 2026 The polaris authors.
// SPDX-License-Identifier: Apache-2.0

#include <cmath>
#include <numbers>
#include <random>

#include <doctest.h>

#include "polaris/sampling.hpp"

using namespace polaris;

TEST_CASE("fibonacci hemisphere stays in the hemisphere") {
    std::mt19937_64 rng(59);
    std::normal_distribution<double> g(0.0, 1.0);
    for (int it = 0; it < 20; ++it) {
        const Vec3 n = normalize(Vec3{g(rng), g(rng), g(rng)});
        for (const auto& s : fibonacci_hemisphere(64, n, it)) {
            CHECK(dot(s.direction, n) >= 0.0);
            CHECK(std::abs(length(s.direction) - 1.0) < 1e-12);
        }
    }
}

TEST_CASE("fibonacci weights sum to 2 pi") {
    // Every weight is exactly 2 pi / n; the sum re-rounds at each add, so
    // compare at rounding level.
    const auto samples = fibonacci_hemisphere(256, {0.0, 0.0, 1.0}, 0);
    double sum = 0.0;
    for (const auto& s : samples) {
        CHECK(s.weight == 2.0 * std::numbers::pi / 256.0);
        sum += s.weight;
    }
    CHECK(std::abs(sum - 2.0 * std::numbers::pi) < 1e-12);

    const auto odd = fibonacci_hemisphere(100, {0.0, 1.0, 0.0}, 3);
    double sum_odd = 0.0;
    for (const auto& s : odd) sum_odd += s.weight;
    CHECK(std::abs(sum_odd - 2.0 * std::numbers::pi) < 1e-12);
}

TEST_CASE("fibonacci quadrature of cos(theta) equals pi") {
    const Vec3 n{0.0, 0.0, 1.0};
    const auto samples = fibonacci_hemisphere(256, n, 0);
    double integral = 0.0;
    for (const auto& s : samples) integral += dot(s.direction, n) * s.weight;
    CHECK(std::abs(integral - std::numbers::pi) < 0.02 * std::numbers::pi);
}

TEST_CASE("fibonacci determinism and seed dependence") {
    const Vec3 n = normalize(Vec3{0.3, -0.5, 0.81});
    const auto a = fibonacci_hemisphere(128, n, 42);
    const auto b = fibonacci_hemisphere(128, n, 42);
    for (size_t i = 0; i < a.size(); ++i) {
        CHECK(a[i].direction.x == b[i].direction.x);
        CHECK(a[i].direction.y == b[i].direction.y);
        CHECK(a[i].direction.z == b[i].direction.z);
    }

    const auto c = fibonacci_hemisphere(128, n, 43);
    bool any_different = false;
    for (size_t i = 0; i < a.size(); ++i)
        if (a[i].direction.x != c[i].direction.x) any_different = true;
    CHECK(any_different);
}

TEST_CASE("fill and vector APIs agree") {
    const Vec3 n = normalize(Vec3{-0.2, 0.9, 0.4});
    std::vector<double> x(96), y(96), z(96);
    fibonacci_hemisphere_fill(96, n, 7, x, y, z);
    const auto samples = fibonacci_hemisphere(96, n, 7);
    for (int i = 0; i < 96; ++i) {
        CHECK(samples[i].direction.x == x[i]);
        CHECK(samples[i].direction.y == y[i]);
        CHECK(samples[i].direction.z == z[i]);
    }
}
