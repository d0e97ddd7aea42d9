// Copyright (c) 2026 The polaris authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "polaris/pbrdf.hpp"
#include "polaris/vec3.hpp"

namespace polaris {

struct Camera {
    Vec3 position;
    Vec3 look_at;
    Vec3 up{0.0, 1.0, 0.0};
    double vertical_fov = 45.0;  // degrees
    int width = 64;
    int height = 64;
};

struct SpherePrim {
    Vec3 center;
    double radius = 1.0;
};

struct PlanePrim {
    Vec3 point;
    Vec3 normal{0.0, 1.0, 0.0};
};

struct BoxPrim {
    Vec3 center;
    Vec3 half_extents{1.0, 1.0, 1.0};
};

struct Primitive {
    std::variant<SpherePrim, PlanePrim, BoxPrim> shape;
    int material_id = 0;
};

struct SunLight {
    Vec3 direction{0.0, 1.0, 0.0};   // unit, toward the sun
    double angular_radius = 0.1;     // radians
    Rgb radiance{1.0, 1.0, 1.0};
};

struct EnvLight {
    Rgb ambient{0.0, 0.0, 0.0};
    std::vector<SunLight> suns;

    /// Unpolarized radiance arriving from direction w (unit, toward the source).
    Rgb radiance(const Vec3& w) const;
};

struct SamplingConfig {
    int hemisphere_samples = 128;
    std::uint64_t seed = 0;
};

struct Scene {
    Camera camera;
    std::vector<Primitive> primitives;
    std::vector<MaterialParams> materials;
    EnvLight env;
    SamplingConfig sampling;
};

/// Parse/validation failure with a human-readable location.
class SceneError : public std::runtime_error {
  public:
    explicit SceneError(const std::string& msg) : std::runtime_error(msg) {}
};

/// Parses and validates a scene document (strict: unknown keys are errors).
/// Never crashes on malformed input; throws SceneError with a diagnostic.
Scene parse_scene(std::string_view text);
Scene load_scene(const std::string& path);

inline constexpr double kHitTolerance = 1e-4;
inline constexpr int kMaxTraceSteps = 512;
inline constexpr double kMaxTraceDistance = 100.0;

/// Signed distance to the union of all primitives.
double sdf(const Scene& scene, const Vec3& x);

/// Normalized central-difference SDF gradient (step 1e-5). Throws
/// std::runtime_error at degenerate points where the gradient vanishes.
Vec3 sdf_normal(const Scene& scene, const Vec3& x);

struct Hit {
    Vec3 position;
    Vec3 normal;
    int material_id = 0;
    double t = 0.0;
};

/// Sphere tracing along origin + t*direction; direction must be unit.
std::optional<Hit> sphere_trace(const Scene& scene, const Vec3& origin, const Vec3& direction);

/// Hit test only: like sphere_trace but skips the normal estimate.
bool trace_any(const Scene& scene, const Vec3& origin, const Vec3& direction);

}  // namespace polaris
