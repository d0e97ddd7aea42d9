// Copyright (c) 2026 The polaris authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <complex>

#include "polaris/mueller.hpp"
#include "polaris/vec3.hpp"

namespace polaris {

/// Per-channel complex refractive index eta - k*i. k = 0 on all channels
/// means the material is a dielectric.
struct ComplexIor {
    Rgb eta{1.5, 1.5, 1.5};
    Rgb k{0.0, 0.0, 0.0};

    bool is_dielectric() const { return k.r == 0.0 && k.g == 0.0 && k.b == 0.0; }

    /// Complex index for one channel. The imaginary part is stored with a
    /// positive sign internally; conjugating the index conjugates the
    /// amplitude coefficients and leaves every reflectance and cos(delta)
    /// unchanged, so the two sign conventions are observationally equal.
    std::complex<double> channel(int c) const { return {eta[c], k[c]}; }
};

/// Complex cosine of the transmitted angle, sqrt(1 - (sin(theta_i)/n)^2).
/// The principal square root picks the branch where the transmitted wave
/// decays into the medium: Im(n * cos_theta_t) >= 0 whenever Im(n) >= 0.
std::complex<double> complex_cos_theta_t(std::complex<double> n, double theta_i);

struct AmplitudeCoeffs {
    std::complex<double> rs;  // perpendicular (s)
    std::complex<double> rp;  // parallel (p)
};

/// Fresnel amplitude reflection coefficients for a surface with relative
/// index n, valid for real and complex n.
AmplitudeCoeffs amplitude_coeffs(std::complex<double> n, double theta_i);

struct Reflectances {
    double rs;  // |r_s|^2
    double rp;  // |r_p|^2
};

Reflectances reflectances(std::complex<double> n, double theta_i);

/// Cosine of the phase delay delta = arg(r_p) - arg(r_s). For dielectrics
/// this steps from -1 (below the Brewster angle) to +1 (above); for
/// conductors it varies smoothly. When one coefficient vanishes (the
/// Brewster zero itself) the below-Brewster limit -1 is returned.
double phase_delay_cos(std::complex<double> n, double theta_i);

/// Fresnel reflection Mueller matrix
///   [[R+, R-, 0], [R-, R+, 0], [0, 0, Rx cos(delta)]]
/// with R+ = (Rs+Rp)/2, R- = (Rs-Rp)/2, Rx = sqrt(Rs*Rp). The reference
/// axis of its frames is perpendicular to the plane of incidence.
MuellerMatrix fresnel_reflection_mueller(std::complex<double> n, double theta_i);

/// Fresnel transmission Mueller matrix for dielectrics, built from the
/// intensity transmittances T = 1 - R per component:
///   [[T+, T-, 0], [T-, T+, 0], [0, 0, Tx]]
/// Throws std::domain_error for complex n (conductors transmit nothing).
MuellerMatrix fresnel_transmission_mueller(std::complex<double> n, double theta);

inline MuellerMatrix fresnel_transmission_mueller(double n, double theta) {
    return fresnel_transmission_mueller(std::complex<double>{n, 0.0}, theta);
}

/// atan(n), the angle where r_p vanishes for a dielectric of index n > 0.
double brewster_angle(double n);

}  // namespace polaris
