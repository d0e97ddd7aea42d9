// Copyright (c) 2026 The polaris authors.
// SPDX-License-Identifier: Apache-2.0

#include "polaris/sampling.hpp"

#include <cmath>
#include <numbers>

namespace polaris {

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

void fibonacci_hemisphere_fill(int n, const Vec3& normal, std::uint64_t seed,
                               std::span<double> dir_x, std::span<double> dir_y,
                               std::span<double> dir_z) {
    Vec3 t, b;
    orthonormal_basis(normal, t, b);

    constexpr double golden_angle = std::numbers::pi * (3.0 - 2.2360679774997896964091736687747);
    const double offset =
        2.0 * std::numbers::pi * (static_cast<double>(splitmix64(seed) >> 11) * 0x1.0p-53);

    for (int i = 0; i < n; ++i) {
        const double z = (i + 0.5) / n;
        const double r = std::sqrt(1.0 - z * z);
        const double phi = i * golden_angle + offset;
        const double lx = r * std::cos(phi);
        const double ly = r * std::sin(phi);
        dir_x[i] = lx * t.x + ly * b.x + z * normal.x;
        dir_y[i] = lx * t.y + ly * b.y + z * normal.y;
        dir_z[i] = lx * t.z + ly * b.z + z * normal.z;
    }
}

std::vector<HemisphereSample> fibonacci_hemisphere(int n, const Vec3& normal, std::uint64_t seed) {
    std::vector<double> x(n), y(n), z(n);
    fibonacci_hemisphere_fill(n, normal, seed, x, y, z);
    std::vector<HemisphereSample> out(n);
    const double w = 2.0 * std::numbers::pi / n;
    for (int i = 0; i < n; ++i) out[i] = {{x[i], y[i], z[i]}, w};
    return out;
}

}  // namespace polaris
