// Copyright (c) 2026 The polaris authors.
// SPDX-License-Identifier: Apache-2.0

#include "polaris/renderer.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "polaris/parallel.hpp"
#include "polaris/pbrdf.hpp"
#include "polaris/sampling.hpp"

namespace polaris {

namespace {

constexpr double kGrazingClamp = 1e-9;

/// Projection of v orthogonal to d, normalized; deterministic fallback
/// when v is parallel to d.
Vec3 project_axis(const Vec3& v, const Vec3& d) {
    const Vec3 p = v - dot(v, d) * d;
    const double len = length(p);
    if (len < 1e-9) return perpendicular_axis(d);
    return p / len;
}

}  // namespace

CameraBasis make_camera_basis(const Camera& cam) {
    CameraBasis basis;
    basis.origin = cam.position;
    basis.forward = normalize(cam.look_at - cam.position);
    basis.right = normalize(cross(basis.forward, cam.up));
    basis.up = cross(basis.right, basis.forward);
    basis.tan_half_fov = std::tan(cam.vertical_fov * std::numbers::pi / 360.0);
    basis.aspect = static_cast<double>(cam.width) / cam.height;
    basis.width = cam.width;
    basis.height = cam.height;
    return basis;
}

Vec3 camera_ray_direction(const CameraBasis& basis, double px, double py) {
    const double u = (2.0 * px / basis.width - 1.0) * basis.tan_half_fov * basis.aspect;
    const double v = (1.0 - 2.0 * py / basis.height) * basis.tan_half_fov;
    return normalize(basis.forward + u * basis.right + v * basis.up);
}

Frame camera_frame_for(const CameraBasis& basis, const Vec3& ray_dir) {
    const Vec3 wo = -ray_dir;  // propagation toward the camera
    return {wo, project_axis(basis.right, wo)};
}

StokesRgb incident_stokes(const Scene& scene, const Vec3& origin, const Vec3& wi,
                          [[maybe_unused]] const Frame& frame) {
    StokesRgb out{};
    if (trace_any(scene, origin, wi)) return out;
    const Rgb radiance = scene.env.radiance(wi);
    for (int c = 0; c < 3; ++c) out[c] = StokesVector{radiance[c], 0.0, 0.0};
    return out;
}

bool build_pixel_task(const Scene& scene, const Hit& hit, const Vec3& wo,
                      const Frame& camera_frame, PixelTask& task) {
    const Vec3 n = hit.normal;
    const double cos_o = dot(n, wo);
    if (cos_o <= kGrazingClamp) return false;

    kernels::ShadePoint& p = task.point;
    p.n = n;
    p.wo = wo;
    p.x_cam = camera_frame.x;
    p.cos_theta_o = cos_o;
    p.spec_norm = 1.0 / (4.0 * cos_o);

    // Dielectric transmission toward the camera (fixed index 1.5), written
    // with the same algebra the kernels use per sample.
    {
        const double ci = cos_o;
        const double si2 = 1.0 - ci * ci;
        const double ct = std::sqrt(1.0 - si2 / (kDielectricIor * kDielectricIor));
        const double rs = (ci - kDielectricIor * ct) / (ci + kDielectricIor * ct);
        const double rp = (kDielectricIor * ci - ct) / (kDielectricIor * ci + ct);
        const double ts = 1.0 - rs * rs;
        const double tp = 1.0 - rp * rp;
        p.t_plus_o = 0.5 * (ts + tp);
        p.t_minus_o = 0.5 * (ts - tp);
    }

    // Rotation from the diffuse exit frame (axis perpendicular to the
    // n/wo plane) into the camera frame.
    {
        Vec3 x_dif = cross(n, wo);
        const double len = length(x_dif);
        x_dif = len < 1e-12 ? camera_frame.x : x_dif / len;
        const double c = dot(x_dif, camera_frame.x);
        const double s = dot(cross(x_dif, camera_frame.x), wo);
        p.rot_dif_cos2 = c * c - s * s;
        p.rot_dif_sin2 = 2.0 * s * c;
    }

    task.material_id = hit.material_id;

    const int n_samples = scene.sampling.hemisphere_samples;
    const size_t padded = (static_cast<size_t>(n_samples) + kernels::kLanes - 1) /
                          kernels::kLanes * kernels::kLanes;
    task.wi_x.resize(padded);
    task.wi_y.resize(padded);
    task.wi_z.resize(padded);
    task.rad_r.resize(padded);
    task.rad_g.resize(padded);
    task.rad_b.resize(padded);
    task.sample_count = padded;
    task.quad_weight = 2.0 * std::numbers::pi / n_samples;

    fibonacci_hemisphere_fill(n_samples, n, scene.sampling.seed, task.wi_x, task.wi_y, task.wi_z);

    const Vec3 shadow_origin = hit.position + kShadowEpsilon * n;
    for (int i = 0; i < n_samples; ++i) {
        const Vec3 wi{task.wi_x[i], task.wi_y[i], task.wi_z[i]};
        const Frame light_frame{-wi, perpendicular_axis(-wi)};
        const StokesRgb s_in = incident_stokes(scene, shadow_origin, wi, light_frame);
        task.rad_r[i] = s_in[0].s0;
        task.rad_g[i] = s_in[1].s0;
        task.rad_b[i] = s_in[2].s0;
    }
    // Padding: unit direction along the normal with zero radiance, which
    // contributes exactly zero through either kernel.
    for (size_t i = n_samples; i < padded; ++i) {
        task.wi_x[i] = n.x;
        task.wi_y[i] = n.y;
        task.wi_z[i] = n.z;
        task.rad_r[i] = task.rad_g[i] = task.rad_b[i] = 0.0;
    }
    return true;
}

kernels::ShadeCoeffs make_shade_coeffs(const kernels::ShadePoint& point,
                                       const MaterialParams& mat) {
    kernels::ShadeCoeffs c;
    c.m_gate = static_cast<double>(mat.m);
    c.alpha2 = mat.roughness * mat.roughness;
    c.ks = mat.ks;
    {
        const double co = point.cos_theta_o;
        c.g1_o = 2.0 * co / (co + std::sqrt(c.alpha2 + (1.0 - c.alpha2) * co * co));
    }
    for (int ch = 0; ch < 3; ++ch) {
        c.albedo_over_pi[ch] = mat.albedo[ch] / std::numbers::pi;
        const double e = mat.ior.eta[ch];
        const double k = mat.ior.k[ch];
        c.eta[ch] = e;
        c.kappa[ch] = k;
        const double mag2 = e * e + k * k;
        const double den = mag2 * mag2;  // |n^2|^2 = |n|^4
        c.inv_n2_re[ch] = (e * e - k * k) / den;
        c.inv_n2_im[ch] = -2.0 * e * k / den;
    }
    return c;
}

StokesRgb shade_task(const PixelTask& task, const MaterialParams& mat) {
    const kernels::ShadeCoeffs coeffs = make_shade_coeffs(task.point, mat);
    StokesRgb out{};
    kernels::shade_kernel()(task.point, coeffs, task.samples_view(), out);
    for (int c = 0; c < 3; ++c) out[c] = out[c] * task.quad_weight;
    return out;
}

StokesRgb shade(const Scene& scene, const Hit& hit, const Vec3& wo, const Frame& camera_frame) {
    thread_local PixelTask task;
    if (!build_pixel_task(scene, hit, wo, camera_frame, task)) return {};
    return shade_task(task, scene.materials[task.material_id]);
}

StokesRgb shade_reference(const Scene& scene, const Hit& hit, const Vec3& wo,
                          const Frame& camera_frame, bool debug_depolarizer) {
    StokesRgb out{};
    const Vec3 n = hit.normal;
    if (dot(n, wo) <= kGrazingClamp) return out;

    const MaterialParams& mat = scene.materials[hit.material_id];
    const int n_samples = scene.sampling.hemisphere_samples;
    const double weight = 2.0 * std::numbers::pi / n_samples;
    const Vec3 shadow_origin = hit.position + kShadowEpsilon * n;

    const auto samples = fibonacci_hemisphere(n_samples, n, scene.sampling.seed);
    for (const HemisphereSample& sample : samples) {
        const Vec3 wi = sample.direction;
        if (dot(n, wi) <= 0.0) continue;

        const ShadingGeometry geom = ShadingGeometry::make(n, wi, wo);
        PbrdfEval eval = evaluate(mat, geom);
        if (debug_depolarizer) {
            for (int c = 0; c < 3; ++c) {
                eval.diffuse.mueller[c] = depolarizer();
                eval.specular.mueller[c] = depolarizer();
            }
        }

        const Frame light_frame{-wi, perpendicular_axis(-wi)};
        const StokesRgb s_env = incident_stokes(scene, shadow_origin, wi, light_frame);

        const MuellerMatrix rot_in_dif = rotation_between(light_frame, eval.diffuse.in_frame);
        const MuellerMatrix rot_in_spec = rotation_between(light_frame, eval.specular.in_frame);
        const MuellerMatrix rot_cam_dif = rotation_between(eval.diffuse.out_frame, camera_frame);
        const MuellerMatrix rot_cam_spec = rotation_between(eval.specular.out_frame, camera_frame);

        for (int c = 0; c < 3; ++c) {
            const StokesVector dif =
                apply(rot_cam_dif, apply(eval.diffuse.mueller[c], apply(rot_in_dif, s_env[c])));
            const StokesVector spec =
                apply(rot_cam_spec, apply(eval.specular.mueller[c], apply(rot_in_spec, s_env[c])));
            out[c] += (dif + spec) * weight;
        }
    }
    return out;
}

RenderResult render_view(const Scene& scene, const Camera& camera, const RenderOptions& opts) {
    const CameraBasis basis = make_camera_basis(camera);
    const size_t n_pixels = static_cast<size_t>(camera.width) * camera.height;

    RenderResult result;
    result.image = PolarizedImage(camera.width, camera.height);
    result.mask.assign(n_pixels, 0.0f);
    result.conductor_mask.assign(n_pixels, 0.0f);

    parallel_for_chunks(n_pixels, 64, opts.threads, [&](size_t begin, size_t end) {
        thread_local PixelTask task;
        for (size_t p = begin; p < end; ++p) {
            const int x = static_cast<int>(p % camera.width);
            const int y = static_cast<int>(p / camera.width);
            const Vec3 dir = camera_ray_direction(basis, x + 0.5, y + 0.5);
            const auto hit = sphere_trace(scene, basis.origin, dir);
            if (!hit) {
                const Rgb bg = scene.env.radiance(dir);
                for (int c = 0; c < 3; ++c) result.image.at(x, y, c) = {bg[c], 0.0, 0.0};
                continue;
            }
            result.mask[p] = 1.0f;
            result.conductor_mask[p] = scene.materials[hit->material_id].m == 0 ? 1.0f : 0.0f;
            const Vec3 wo = -dir;
            const Frame cam_frame = camera_frame_for(basis, dir);
            StokesRgb s{};
            if (build_pixel_task(scene, *hit, wo, cam_frame, task))
                s = shade_task(task, scene.materials[task.material_id]);
            for (int c = 0; c < 3; ++c) result.image.at(x, y, c) = s[c];
        }
    });
    return result;
}

RenderResult render(const Scene& scene, const RenderOptions& opts) {
    return render_view(scene, scene.camera, opts);
}

DerivedImages derive_images(const PolarizedImage& img) {
    const size_t n = static_cast<size_t>(img.width) * img.height * 3;
    DerivedImages d;
    d.s0.resize(n);
    d.dolp.resize(n);
    d.i000.resize(n);
    d.i045.resize(n);
    d.i090.resize(n);
    d.i135.resize(n);
    constexpr double q = std::numbers::pi / 4.0;
    for (size_t i = 0; i < n; ++i) {
        const StokesVector& s = img.pixels[i];
        d.s0[i] = s.s0;
        d.dolp[i] = dolp(s);
        d.i000[i] = polarizer_from_stokes(s, 0.0);
        d.i045[i] = polarizer_from_stokes(s, q);
        d.i090[i] = polarizer_from_stokes(s, 2.0 * q);
        d.i135[i] = polarizer_from_stokes(s, 3.0 * q);
    }
    return d;
}

std::vector<Camera> orbit_cameras(const Camera& base, int count) {
    if (count < 1) throw std::invalid_argument("orbit_cameras: count must be >= 1");
    const double radius = std::sqrt(base.position.x * base.position.x +
                                    base.position.z * base.position.z);
    if (radius < 1e-9)
        throw std::invalid_argument("orbit_cameras: camera sits on the vertical axis");
    const double phi0 = std::atan2(base.position.z, base.position.x);

    std::vector<Camera> cams(count, base);
    for (int k = 0; k < count; ++k) {
        const double phi = phi0 + 2.0 * std::numbers::pi * k / count;
        cams[k].position = {radius * std::cos(phi), base.position.y, radius * std::sin(phi)};
        cams[k].look_at = {0.0, 0.0, 0.0};
        cams[k].up = {0.0, 1.0, 0.0};
    }
    return cams;
}

}  // namespace polaris
