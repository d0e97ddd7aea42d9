// Copyright (c) 2026 The polaris authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <vector>

#include "polaris/frame.hpp"
#include "polaris/kernels/shade_kernel.hpp"
#include "polaris/scene.hpp"
#include "polaris/stokes.hpp"

namespace polaris {

/// Per-pixel RGB Stokes vectors, linear HDR, row-major from the top left.
struct PolarizedImage {
    int width = 0;
    int height = 0;
    std::vector<StokesVector> pixels;  // (y*width + x)*3 + channel

    PolarizedImage() = default;
    PolarizedImage(int w, int h) : width(w), height(h), pixels(static_cast<size_t>(w) * h * 3) {}

    StokesVector& at(int x, int y, int c) { return pixels[(static_cast<size_t>(y) * width + x) * 3 + c]; }
    const StokesVector& at(int x, int y, int c) const {
        return pixels[(static_cast<size_t>(y) * width + x) * 3 + c];
    }
};

struct RenderResult {
    PolarizedImage image;
    std::vector<float> mask;            // 1 = hit, 0 = miss
    std::vector<float> conductor_mask;  // 1 = hit on a conductor (m = 0)
};

struct RenderOptions {
    int threads = 0;  // 0 = POLARIS_THREADS env var, else hardware
};

struct CameraBasis {
    Vec3 origin, forward, right, up;
    double tan_half_fov = 1.0;
    double aspect = 1.0;
    int width = 0, height = 0;
};

CameraBasis make_camera_basis(const Camera& cam);

/// Unit ray direction through image coordinates (px, py); pixel centers
/// are at half-integer coordinates.
Vec3 camera_ray_direction(const CameraBasis& basis, double px, double py);

/// Measurement frame of the light arriving along this camera ray:
/// propagation toward the camera, reference axis = image right projected
/// orthogonal to the ray.
Frame camera_frame_for(const CameraBasis& basis, const Vec3& ray_dir);

/// Incident Stokes vectors at `origin` from direction wi (toward the
/// light), expressed in `frame`: the unpolarized environment radiance
/// gated by a binary shadow trace from origin. Callers offset the origin
/// off the surface before tracing.
StokesRgb incident_stokes(const Scene& scene, const Vec3& origin, const Vec3& wi,
                          const Frame& frame);

/// Offset applied along the normal before shadow rays are traced.
inline constexpr double kShadowEpsilon = 1e-3;

/// Material-independent shading context of one surface point, plus the
/// (padded) hemisphere sample SoA. Inverse solvers cache these and replay
/// shade_task with new materials; render() itself goes through the same
/// path so both produce identical values.
struct PixelTask {
    kernels::ShadePoint point;
    int material_id = 0;
    std::vector<double> wi_x, wi_y, wi_z, rad_r, rad_g, rad_b;
    size_t sample_count = 0;  // padded; multiple of kernels::kLanes
    double quad_weight = 0.0; // 2*pi/N

    kernels::ShadeSamples samples_view() const {
        return {wi_x.data(), wi_y.data(), wi_z.data(),
                {rad_r.data(), rad_g.data(), rad_b.data()}, sample_count};
    }
};

/// Fills `task` for a surface hit. Returns false when the geometry is
/// edge-on (cos theta_o below the grazing clamp); such pixels shade black.
bool build_pixel_task(const Scene& scene, const Hit& hit, const Vec3& wo,
                      const Frame& camera_frame, PixelTask& task);

kernels::ShadeCoeffs make_shade_coeffs(const kernels::ShadePoint& point,
                                       const MaterialParams& mat);

/// Runs the selected shading kernel over the task and applies the
/// quadrature weight.
StokesRgb shade_task(const PixelTask& task, const MaterialParams& mat);

/// Outgoing Stokes vectors (camera frame) for a surface hit: the
/// Fibonacci-hemisphere quadrature of the pBRDF under the environment.
StokesRgb shade(const Scene& scene, const Hit& hit, const Vec3& wo, const Frame& camera_frame);

/// Straightforward full-Mueller evaluation of the same quadrature,
/// composing pBRDF terms and frame rotations matrix by matrix. Used by the
/// tests as the reference for the kernels; optionally swaps both Mueller
/// terms for an ideal depolarizer (a debug mode that must kill s1/s2).
StokesRgb shade_reference(const Scene& scene, const Hit& hit, const Vec3& wo,
                          const Frame& camera_frame, bool debug_depolarizer = false);

RenderResult render_view(const Scene& scene, const Camera& camera, const RenderOptions& opts = {});
RenderResult render(const Scene& scene, const RenderOptions& opts = {});

struct DerivedImages {
    std::vector<double> s0, dolp, i000, i045, i090, i135;  // width*height*3 each
};

DerivedImages derive_images(const PolarizedImage& img);

/// Cameras on a horizontal circle through the base camera's position,
/// looking at the scene origin.
std::vector<Camera> orbit_cameras(const Camera& base, int count);

}  // namespace polaris
