// Copyright (c) 2026 The polaris authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <string>

#include "polaris/stokes.hpp"
#include "polaris/vec3.hpp"

namespace polaris::kernels {

/// Number of accumulator stripes shared by every kernel variant. Both the
/// scalar and the SIMD kernel accumulate sample i into stripe i % 4 and
/// reduce as (a0+a1)+(a2+a3), which makes their outputs bit-identical.
inline constexpr size_t kLanes = 4;

/// Geometry-only context of one shading point. Everything here is
/// independent of the material, so inverse solvers can cache it and replay
/// the kernel with updated materials.
struct ShadePoint {
    Vec3 n;       // unit surface normal
    Vec3 wo;      // unit, toward the camera
    Vec3 x_cam;   // camera reference axis, unit, perpendicular to wo
    double cos_theta_o = 1.0;
    double spec_norm = 0.25;    // 1 / (4 cos_theta_o)
    double t_plus_o = 0.0;      // dielectric transmission T+ at theta_o
    double t_minus_o = 0.0;     // dielectric transmission T- at theta_o
    double rot_dif_cos2 = 1.0;  // cos/sin of twice the rotation that takes the
    double rot_dif_sin2 = 0.0;  // diffuse exit frame into the camera frame
};

/// Material-dependent per-point coefficients, cheap to rebuild per call.
struct ShadeCoeffs {
    double m_gate = 1.0;  // binary conductor/dielectric indicator
    double alpha2 = 0.0;  // roughness^2
    double ks = 1.0;
    double g1_o = 1.0;                     // Smith G1 toward the camera
    double albedo_over_pi[3] = {0, 0, 0};  // per channel
    double eta[3] = {1.5, 1.5, 1.5};       // complex IOR, real part
    double kappa[3] = {0, 0, 0};           // complex IOR, imaginary part
    double inv_n2_re[3] = {0, 0, 0};       // Re(1/n^2), precomputed
    double inv_n2_im[3] = {0, 0, 0};       // Im(1/n^2)
};

/// Hemisphere samples in SoA layout. count must be a multiple of kLanes;
/// callers pad with zero-radiance samples whose direction is the normal.
/// radiance is the visibility-masked incident radiance per channel; the
/// incident light is unpolarized, which is what lets the kernel reduce the
/// Mueller sandwich to its first column.
struct ShadeSamples {
    const double* wi_x = nullptr;
    const double* wi_y = nullptr;
    const double* wi_z = nullptr;
    const double* radiance[3] = {nullptr, nullptr, nullptr};
    size_t count = 0;
};

/// Accumulates, per color channel, the un-weighted sum over samples of the
/// pBRDF contribution rotated into the camera frame. The caller applies the
/// quadrature weight (2*pi/N).
using ShadeKernelFn = void (*)(const ShadePoint&, const ShadeCoeffs&, const ShadeSamples&,
                               StokesRgb& out);

void shade_batch_scalar(const ShadePoint& point, const ShadeCoeffs& coeffs,
                        const ShadeSamples& samples, StokesRgb& out);

#if defined(POLARIS_HAVE_SIMD_KERNEL)
void shade_batch_simd(const ShadePoint& point, const ShadeCoeffs& coeffs,
                      const ShadeSamples& samples, StokesRgb& out);
#endif

/// Runtime-selected kernel: the SIMD variant when the CPU supports it,
/// overridable with POLARIS_KERNEL=scalar|simd|auto.
ShadeKernelFn shade_kernel();

/// Name of the variant shade_kernel() resolves to ("scalar" or "simd").
std::string shade_kernel_name();

}  // namespace polaris::kernels
