// Copyright (c) 2026 The polaris authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "polaris/vec3.hpp"

namespace polaris {

struct HemisphereSample {
    Vec3 direction;  // unit, d . normal >= 0
    double weight;   // solid angle, 2*pi/n
};

/// Deterministic equal-weight Fibonacci lattice on the hemisphere around
/// `normal`. The seed hashes to a global azimuthal offset of the lattice.
std::vector<HemisphereSample> fibonacci_hemisphere(int n, const Vec3& normal, std::uint64_t seed);

/// Same lattice written into caller-provided direction buffers (one value
/// per sample). This is the allocation-free path the renderer uses; the
/// vector API above is a thin wrapper so both produce identical directions.
void fibonacci_hemisphere_fill(int n, const Vec3& normal, std::uint64_t seed,
                               std::span<double> dir_x, std::span<double> dir_y,
                               std::span<double> dir_z);

/// SplitMix64 hash, used wherever an integer seed must become a stable
/// pseudo-random real.
std::uint64_t splitmix64(std::uint64_t x);

}  // namespace polaris
