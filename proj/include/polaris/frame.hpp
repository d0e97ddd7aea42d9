// Copyright (c) 2026 The polaris authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cmath>
#include <stdexcept>

#include "polaris/mueller.hpp"
#include "polaris/vec3.hpp"

namespace polaris {

/// Reference frame of a Stokes vector: unit propagation direction d and a
/// unit reference axis x orthogonal to it. s1/s2 are measured against x.
struct Frame {
    Vec3 d;
    Vec3 x;

    Vec3 y() const { return cross(d, x); }
};

/// Signed angle phi in (-pi, pi] that rotates from.x onto to.x about the
/// shared propagation direction (right-handed about d). Both frames must
/// propagate the same way.
inline double frame_rotation_angle(const Frame& from, const Frame& to) {
    // cos(1e-6 rad) bound on the direction mismatch.
    if (dot(from.d, to.d) < 0.9999999999995)
        throw std::invalid_argument("frame_rotation_angle: propagation directions differ");
    const double c = dot(from.x, to.x);
    const double s = dot(cross(from.x, to.x), from.d);
    return std::atan2(s, c);
}

/// Mueller rotation that re-expresses a Stokes vector given in `from`
/// using the reference axis of `to`.
inline MuellerMatrix rotation_between(const Frame& from, const Frame& to) {
    return rotation_mueller(frame_rotation_angle(from, to));
}

}  // namespace polaris
