// Copyright (c) 2026 The polaris authors.
// SPDX-License-Identifier: Apache-2.0

#include "polaris/pbrdf.hpp"

#include <cmath>
#include <numbers>

namespace polaris {

namespace {

constexpr double kDegenerateCross = 1e-12;

MuellerRgb zero_rgb() { return {MuellerMatrix::zero(), MuellerMatrix::zero(), MuellerMatrix::zero()}; }

/// Unit axis perpendicular to the plane spanned by a and b, falling back
/// to a deterministic axis perpendicular to d when the plane degenerates.
Vec3 plane_perpendicular(const Vec3& a, const Vec3& b, const Vec3& d) {
    const Vec3 c = cross(a, b);
    const double len = length(c);
    if (len < kDegenerateCross) return perpendicular_axis(d);
    return c / len;
}

}  // namespace

double ggx_d(double cos_theta_h, double roughness) {
    const double a2 = roughness * roughness;
    const double t = cos_theta_h * cos_theta_h * (a2 - 1.0) + 1.0;
    return a2 / (std::numbers::pi * t * t);
}

double smith_g1(double cos_theta, double roughness) {
    const double a2 = roughness * roughness;
    return 2.0 * cos_theta / (cos_theta + std::sqrt(a2 + (1.0 - a2) * cos_theta * cos_theta));
}

double smith_g(const ShadingGeometry& geom, double roughness) {
    return smith_g1(dot(geom.n, geom.wi), roughness) * smith_g1(dot(geom.n, geom.wo), roughness);
}

MuellerRgb mueller_diffuse(const MaterialParams& params, const ShadingGeometry& geom) {
    const double cos_i = dot(geom.n, geom.wi);
    const double cos_o = dot(geom.n, geom.wo);
    if (cos_i <= 0.0 || cos_o <= 0.0) return zero_rgb();

    const double theta_i = std::acos(cos_i > 1.0 ? 1.0 : cos_i);
    const double theta_o = std::acos(cos_o > 1.0 ? 1.0 : cos_o);
    const MuellerMatrix ft_i = fresnel_transmission_mueller(kDielectricIor, theta_i);
    const MuellerMatrix ft_o = fresnel_transmission_mueller(kDielectricIor, theta_o);
    const MuellerMatrix chain = ft_o * depolarizer() * ft_i;

    MuellerRgb out;
    for (int c = 0; c < 3; ++c)
        out[c] = (params.albedo[c] / std::numbers::pi * cos_i) * chain;
    return out;
}

MuellerRgb mueller_specular(const MaterialParams& params, const ShadingGeometry& geom) {
    const double cos_o = dot(geom.n, geom.wo);
    if (cos_o <= 1e-9) return zero_rgb();
    // wi = -wo leaves the half-vector undefined; the term vanishes there.
    if (length_squared(geom.wi + geom.wo) < kDegenerateCross * kDegenerateCross) return zero_rgb();

    const double cos_h = dot(geom.n, geom.h);
    const double cos_d = dot(geom.wi, geom.h);
    const double theta_d = std::acos(cos_d > 1.0 ? 1.0 : (cos_d < -1.0 ? -1.0 : cos_d));
    const double scale =
        params.ks * ggx_d(cos_h, params.roughness) * smith_g(geom, params.roughness) / (4.0 * cos_o);

    MuellerRgb out;
    for (int c = 0; c < 3; ++c)
        out[c] = scale * fresnel_reflection_mueller(params.ior.channel(c), theta_d);
    return out;
}

PbrdfEval evaluate(const MaterialParams& params, const ShadingGeometry& geom) {
    PbrdfEval eval;

    const Vec3 d_in = -geom.wi;
    eval.diffuse.mueller = params.m == 0 ? zero_rgb() : mueller_diffuse(params, geom);
    eval.diffuse.in_frame = {d_in, plane_perpendicular(geom.n, geom.wi, d_in)};
    eval.diffuse.out_frame = {geom.wo, plane_perpendicular(geom.n, geom.wo, geom.wo)};

    // wi, wo and h are coplanar, so one perpendicular serves both frames.
    const Vec3 x_spec = plane_perpendicular(geom.wi, geom.wo, geom.wo);
    eval.specular.mueller = mueller_specular(params, geom);
    eval.specular.in_frame = {d_in, x_spec};
    eval.specular.out_frame = {geom.wo, x_spec};

    return eval;
}

}  // namespace polaris
