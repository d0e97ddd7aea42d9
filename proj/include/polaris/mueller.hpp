// Copyright (c) 2026 The polaris authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cmath>

#include "polaris/stokes.hpp"

namespace polaris {

/// 3x3 Mueller matrix acting on linear-polarization Stokes vectors.
struct MuellerMatrix {
    double m[3][3] = {{0, 0, 0}, {0, 0, 0}, {0, 0, 0}};

    static constexpr MuellerMatrix zero() { return {}; }

    static constexpr MuellerMatrix identity() {
        MuellerMatrix r;
        r.m[0][0] = r.m[1][1] = r.m[2][2] = 1.0;
        return r;
    }

    constexpr MuellerMatrix operator*(const MuellerMatrix& o) const {
        MuellerMatrix r;
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j)
                r.m[i][j] = m[i][0] * o.m[0][j] + m[i][1] * o.m[1][j] + m[i][2] * o.m[2][j];
        return r;
    }

    constexpr MuellerMatrix operator*(double k) const {
        MuellerMatrix r;
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) r.m[i][j] = m[i][j] * k;
        return r;
    }

    constexpr MuellerMatrix operator+(const MuellerMatrix& o) const {
        MuellerMatrix r;
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) r.m[i][j] = m[i][j] + o.m[i][j];
        return r;
    }
};

constexpr MuellerMatrix operator*(double k, const MuellerMatrix& M) { return M * k; }

constexpr StokesVector apply(const MuellerMatrix& M, const StokesVector& s) {
    return {M.m[0][0] * s.s0 + M.m[0][1] * s.s1 + M.m[0][2] * s.s2,
            M.m[1][0] * s.s0 + M.m[1][1] * s.s1 + M.m[1][2] * s.s2,
            M.m[2][0] * s.s0 + M.m[2][1] * s.s1 + M.m[2][2] * s.s2};
}

/// Rotation Mueller matrix for a reference-frame rotation by phi radians.
/// Positive phi is counterclockwise when looking toward the source (the
/// propagation direction pointing at the viewer). Period pi in phi.
inline MuellerMatrix rotation_mueller(double phi) {
    const double c = std::cos(2.0 * phi);
    const double s = std::sin(2.0 * phi);
    MuellerMatrix r;
    r.m[0][0] = 1.0;
    r.m[1][1] = c;
    r.m[1][2] = s;
    r.m[2][1] = -s;
    r.m[2][2] = c;
    return r;
}

/// Ideal depolarizer diag(1,0,0).
constexpr MuellerMatrix depolarizer() {
    MuellerMatrix r;
    r.m[0][0] = 1.0;
    return r;
}

}  // namespace polaris
