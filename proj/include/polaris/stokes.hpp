// Copyright (c) 2026 The polaris authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <cmath>
#include <stdexcept>

namespace polaris {

/// Linear-polarization Stokes vector. s0 is the total radiance, s1 the
/// 0-vs-90 degree component and s2 the 45-vs-135 degree component, all in
/// the same linear HDR units. Circular polarization is not modeled.
struct StokesVector {
    double s0 = 0.0, s1 = 0.0, s2 = 0.0;

    constexpr StokesVector() = default;
    constexpr StokesVector(double s0_, double s1_, double s2_) : s0(s0_), s1(s1_), s2(s2_) {}

    constexpr StokesVector operator+(const StokesVector& o) const {
        return {s0 + o.s0, s1 + o.s1, s2 + o.s2};
    }
    constexpr StokesVector operator-(const StokesVector& o) const {
        return {s0 - o.s0, s1 - o.s1, s2 - o.s2};
    }
    constexpr StokesVector operator*(double k) const { return {s0 * k, s1 * k, s2 * k}; }
    constexpr StokesVector& operator+=(const StokesVector& o) {
        s0 += o.s0;
        s1 += o.s1;
        s2 += o.s2;
        return *this;
    }
};

constexpr StokesVector operator*(double k, const StokesVector& s) { return s * k; }

/// One Stokes vector per color channel (R, G, B).
using StokesRgb = std::array<StokesVector, 3>;

/// Degree of linear polarization, sqrt(s1^2+s2^2)/s0 clamped to [0,1].
/// Near-black pixels (s0 <= 1e-12) map to 0 so DoLP images stay finite.
inline double dolp(const StokesVector& s) {
    if (s.s0 <= 1e-12) return 0.0;
    const double p = std::sqrt(s.s1 * s.s1 + s.s2 * s.s2) / s.s0;
    return p > 1.0 ? 1.0 : p;
}

/// Reassembles a Stokes vector from four ideal linear-polarizer captures.
inline StokesVector stokes_from_polarizer(double i0, double i45, double i90, double i135) {
    if (i0 < 0.0 || i45 < 0.0 || i90 < 0.0 || i135 < 0.0)
        throw std::domain_error("stokes_from_polarizer: polarizer intensities must be >= 0");
    return {(i0 + i45 + i90 + i135) / 2.0, i0 - i90, i45 - i135};
}

/// Radiance passed by an ideal linear polarizer at angle alpha (radians,
/// measured from the Stokes reference axis).
inline double polarizer_from_stokes(const StokesVector& s, double alpha) {
    return 0.5 * (s.s0 + s.s1 * std::cos(2.0 * alpha) + s.s2 * std::sin(2.0 * alpha));
}

}  // namespace polaris
