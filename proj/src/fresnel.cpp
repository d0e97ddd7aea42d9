// Copyright (c) 2026 The polaris authors.
// SPDX-License-Identifier: Apache-2.0

#include "polaris/fresnel.hpp"

#include <cmath>
#include <stdexcept>

namespace polaris {

std::complex<double> complex_cos_theta_t(std::complex<double> n, double theta_i) {
    const double s = std::sin(theta_i);
    const std::complex<double> sin_over_n = s / n;
    // std::sqrt is the principal branch: Re >= 0 and sign(Im) follows the
    // argument, which is the decaying-wave branch for this orientation.
    return std::sqrt(1.0 - sin_over_n * sin_over_n);
}

AmplitudeCoeffs amplitude_coeffs(std::complex<double> n, double theta_i) {
    const double ci = std::cos(theta_i);
    const std::complex<double> ct = complex_cos_theta_t(n, theta_i);
    const std::complex<double> nct = n * ct;
    const std::complex<double> nci = n * ci;
    return {(ci - nct) / (ci + nct), (nci - ct) / (nci + ct)};
}

Reflectances reflectances(std::complex<double> n, double theta_i) {
    const AmplitudeCoeffs a = amplitude_coeffs(n, theta_i);
    return {std::norm(a.rs), std::norm(a.rp)};
}

double phase_delay_cos(std::complex<double> n, double theta_i) {
    const AmplitudeCoeffs a = amplitude_coeffs(n, theta_i);
    const double mag = std::abs(a.rs) * std::abs(a.rp);
    if (mag < 1e-15) return -1.0;
    const double c = std::real(a.rp * std::conj(a.rs)) / mag;
    return c < -1.0 ? -1.0 : (c > 1.0 ? 1.0 : c);
}

MuellerMatrix fresnel_reflection_mueller(std::complex<double> n, double theta_i) {
    const AmplitudeCoeffs a = amplitude_coeffs(n, theta_i);
    const double rs = std::norm(a.rs);
    const double rp = std::norm(a.rp);
    MuellerMatrix f;
    f.m[0][0] = f.m[1][1] = 0.5 * (rs + rp);
    f.m[0][1] = f.m[1][0] = 0.5 * (rs - rp);
    // Rx cos(delta) = Re(r_p conj(r_s)), no explicit normalization needed.
    f.m[2][2] = std::real(a.rp * std::conj(a.rs));
    return f;
}

MuellerMatrix fresnel_transmission_mueller(std::complex<double> n, double theta) {
    if (n.imag() != 0.0)
        throw std::domain_error("fresnel_transmission_mueller: transmission undefined for conductors");
    const Reflectances r = reflectances(n, theta);
    const double ts = 1.0 - r.rs;
    const double tp = 1.0 - r.rp;
    MuellerMatrix f;
    f.m[0][0] = f.m[1][1] = 0.5 * (ts + tp);
    f.m[0][1] = f.m[1][0] = 0.5 * (ts - tp);
    f.m[2][2] = std::sqrt(ts * tp);
    return f;
}

double brewster_angle(double n) {
    if (n <= 0.0) throw std::domain_error("brewster_angle: index must be positive");
    return std::atan(n);
}

}  // namespace polaris
