// Copyright (c) 2026 The polaris authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <string>

#include "polaris/frame.hpp"
#include "polaris/fresnel.hpp"
#include "polaris/mueller.hpp"
#include "polaris/vec3.hpp"

namespace polaris {

/// Index of refraction assumed for every dielectric surface.
inline constexpr double kDielectricIor = 1.5;
inline constexpr double kMinRoughness = 1e-3;

struct MaterialParams {
    int m = 1;  // 1 dielectric, 0 conductor; gates the diffuse polarization term
    Rgb albedo{0.5, 0.5, 0.5};
    double roughness = 0.3;  // GGX alpha, no remap
    double ks = 1.0;
    ComplexIor ior;
    std::string name;
};

struct ShadingGeometry {
    Vec3 n;   // unit surface normal
    Vec3 wi;  // unit, toward the light
    Vec3 wo;  // unit, toward the camera
    Vec3 h;   // unit half-vector

    static ShadingGeometry make(const Vec3& n, const Vec3& wi, const Vec3& wo) {
        return {n, wi, wo, normalize(wi + wo)};
    }
};

/// GGX normal distribution, alpha = roughness.
double ggx_d(double cos_theta_h, double roughness);

/// Separable Smith-GGX masking-shadowing, G1(wi) * G1(wo).
double smith_g1(double cos_theta, double roughness);
double smith_g(const ShadingGeometry& geom, double roughness);

using MuellerRgb = std::array<MuellerMatrix, 3>;

/// Diffuse polarization term per channel:
///   (albedo/pi) cos(theta_i) * Ft(theta_o) * depolarizer * Ft(theta_i)
/// with the transmissions evaluated against the fixed dielectric index.
/// Returns zero matrices for back-facing geometry.
MuellerRgb mueller_diffuse(const MaterialParams& params, const ShadingGeometry& geom);

/// Specular microfacet term per channel:
///   ks * D(theta_h) G / (4 cos(theta_o)) * Fr(ior, theta_d)
/// where theta_d is the angle between wi and the half-vector.
MuellerRgb mueller_specular(const MaterialParams& params, const ShadingGeometry& geom);

/// One pBRDF term with the frames its Mueller matrices are expressed in.
/// in_frame propagates along -wi (toward the surface), out_frame along wo.
/// Reference axes are perpendicular to the term's plane of incidence: the
/// plane through the macro normal for the diffuse term, the plane through
/// the half-vector for the specular term. Frames are pi-periodic for
/// 3-component Stokes vectors, so the axis sign is immaterial.
struct PbrdfTerm {
    MuellerRgb mueller;
    Frame in_frame;
    Frame out_frame;
};

struct PbrdfEval {
    PbrdfTerm diffuse;
    PbrdfTerm specular;
};

/// Full material evaluation. The diffuse term is multiplied by the binary
/// indicator m, so it is exactly zero for conductors.
PbrdfEval evaluate(const MaterialParams& params, const ShadingGeometry& geom);

}  // namespace polaris
