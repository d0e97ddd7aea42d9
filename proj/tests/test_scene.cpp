// Copyright (c) 2026 The polaris authors.
// SPDX-License-Identifier: Apache-2.0

#include <cmath>
#include <random>
#include <string>

#include <doctest.h>

#include "polaris/scene.hpp"

using namespace polaris;

namespace {

const char* kMinimalScene = R"({
  "camera": {"position": [0,0,3], "look_at": [0,0,0], "vertical_fov": 45, "width": 8, "height": 8},
  "materials": [{"m": 1, "albedo": [0.5,0.5,0.5], "roughness": 0.3}],
  "primitives": [{"type": "sphere", "center": [0,0,0], "radius": 1.0, "material": 0}],
  "env": {"ambient": [1,1,1]}
})";

Scene unit_sphere_scene() { return parse_scene(kMinimalScene); }

std::string with_extra_material(const std::string& material_json) {
    return std::string(R"({
  "camera": {"position": [0,0,3], "look_at": [0,0,0], "vertical_fov": 45, "width": 8, "height": 8},
  "materials": [)") +
           material_json + R"(],
  "primitives": []
})";
}

}  // namespace

TEST_CASE("parse_scene minimal valid file") {
    const Scene scene = unit_sphere_scene();
    CHECK(scene.primitives.size() == 1);
    CHECK(scene.materials.size() == 1);
    CHECK(scene.materials[0].m == 1);
    CHECK(scene.materials[0].ior.eta.r == 1.5);
    CHECK(scene.sampling.hemisphere_samples == 128);  // default
    CHECK(scene.env.ambient.r == 1.0);
}

TEST_CASE("parse_scene dielectric with nonzero k is rejected") {
    const std::string text = with_extra_material(
        R"({"m": 1, "albedo": [0.5,0.5,0.5], "roughness": 0.3, "k": [3.4, 3.4, 3.4]})");
    CHECK_THROWS_WITH_AS(parse_scene(text),
                         doctest::Contains("dielectric must have k=0"), SceneError);
}

TEST_CASE("parse_scene shared material ids are valid") {
    const std::string text = R"({
      "camera": {"position": [0,0,3], "look_at": [0,0,0], "vertical_fov": 45, "width": 8, "height": 8},
      "materials": [{"m": 0, "roughness": 0.4, "eta": [0.2,0.2,0.2], "k": [3.4,3.4,3.4]}],
      "primitives": [
        {"type": "sphere", "center": [0,0,0], "radius": 1.0, "material": 0},
        {"type": "plane", "point": [0,-2,0], "normal": [0,1,0], "material": 0}
      ]
    })";
    const Scene scene = parse_scene(text);
    CHECK(scene.primitives.size() == 2);
    CHECK(scene.primitives[0].material_id == scene.primitives[1].material_id);
}

TEST_CASE("parse_scene diagnostics") {
    SUBCASE("unknown key") {
        const std::string text = with_extra_material(
            R"({"m": 1, "albedo": [0.5,0.5,0.5], "roughness": 0.3, "shininess": 3})");
        CHECK_THROWS_WITH_AS(parse_scene(text), doctest::Contains("unknown key"), SceneError);
    }
    SUBCASE("syntax error carries line and column") {
        CHECK_THROWS_WITH_AS(parse_scene("{\n  \"camera\": [,]\n}"),
                             doctest::Contains("line 2"), SceneError);
    }
    SUBCASE("material id out of range") {
        const std::string text = R"({
          "camera": {"position": [0,0,3], "look_at": [0,0,0], "vertical_fov": 45, "width": 8, "height": 8},
          "materials": [{"m": 1, "albedo": [0.5,0.5,0.5], "roughness": 0.3}],
          "primitives": [{"type": "sphere", "center": [0,0,0], "radius": 1.0, "material": 7}]
        })";
        CHECK_THROWS_WITH_AS(parse_scene(text), doctest::Contains("out of range"), SceneError);
    }
    SUBCASE("invalid radius") {
        const std::string text = R"({
          "camera": {"position": [0,0,3], "look_at": [0,0,0], "vertical_fov": 45, "width": 8, "height": 8},
          "materials": [{"m": 1, "albedo": [0.5,0.5,0.5], "roughness": 0.3}],
          "primitives": [{"type": "sphere", "center": [0,0,0], "radius": -2.0, "material": 0}]
        })";
        CHECK_THROWS_AS(parse_scene(text), SceneError);
    }
    SUBCASE("conductor requires eta and k") {
        CHECK_THROWS_AS(parse_scene(with_extra_material(R"({"m": 0, "roughness": 0.3})")),
                        SceneError);
    }
}

TEST_CASE("parse_scene is total over arbitrary bytes") {
    std::mt19937_64 rng(41);
    std::uniform_int_distribution<int> len(0, 200);
    std::uniform_int_distribution<int> byte(0, 255);
    for (int it = 0; it < 1000; ++it) {
        std::string junk(len(rng), '\0');
        for (char& ch : junk) ch = static_cast<char>(byte(rng));
        try {
            (void)parse_scene(junk);
        } catch (const SceneError&) {
            // structured diagnostic, fine
        }
    }
    CHECK(true);
}

TEST_CASE("sdf of primitives and unions") {
    const Scene scene = unit_sphere_scene();
    CHECK(sdf(scene, {0, 0, 2}) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(sdf(scene, {0, 0, 0}) == doctest::Approx(-1.0).epsilon(1e-15));

    Scene with_plane = scene;
    Primitive plane;
    plane.shape = PlanePrim{{0, -0.5, 0}, {0, 1, 0}};
    plane.material_id = 0;
    with_plane.primitives.push_back(plane);
    // Union takes the minimum of the two distances.
    CHECK(sdf(with_plane, {0, 0, 2}) == doctest::Approx(std::min(1.0, 0.5)).epsilon(1e-12));
    CHECK(sdf(with_plane, {5, 3, 0}) ==
          doctest::Approx(std::min(std::sqrt(34.0) - 1.0, 3.5)).epsilon(1e-12));
}

TEST_CASE("sdf_normal") {
    const Scene scene = unit_sphere_scene();
    const Vec3 top = sdf_normal(scene, {0, 0, 1});
    CHECK(length(top - Vec3{0, 0, 1}) < 1e-4);

    Scene plane_scene = unit_sphere_scene();
    plane_scene.primitives[0].shape = PlanePrim{{0, 0, 0}, {0, 1, 0}};
    CHECK(length(sdf_normal(plane_scene, {3.0, 0.0, -2.0}) - Vec3{0, 1, 0}) < 1e-6);

    std::mt19937_64 rng(43);
    std::normal_distribution<double> g(0.0, 1.0);
    for (int it = 0; it < 100; ++it) {
        const Vec3 p = normalize(Vec3{g(rng), g(rng), g(rng)});
        const Vec3 n = sdf_normal(scene, p);
        CHECK(length(n - p) < 1e-4);  // analytic sphere normal is (x-c)/r
    }

    // Degenerate gradient between two equidistant spheres.
    Scene twin = unit_sphere_scene();
    twin.primitives[0].shape = SpherePrim{{-2, 0, 0}, 1.0};
    Primitive other;
    other.shape = SpherePrim{{2, 0, 0}, 1.0};
    other.material_id = 0;
    twin.primitives.push_back(other);
    CHECK_THROWS_AS(sdf_normal(twin, {0, 0, 0}), std::runtime_error);
}

TEST_CASE("sphere_trace") {
    const Scene scene = unit_sphere_scene();

    const auto hit = sphere_trace(scene, {0, 0, 3}, {0, 0, -1});
    REQUIRE(hit.has_value());
    CHECK(length(hit->position - Vec3{0, 0, 1}) < 1e-3);
    CHECK(length(hit->normal - Vec3{0, 0, 1}) < 1e-3);
    CHECK(hit->material_id == 0);

    CHECK_FALSE(sphere_trace(scene, {0, 0, 3}, {0, 0, 1}).has_value());

    // Grazing ray against the closed-form ray/sphere intersection.
    const double b = 0.999;
    const auto grazing = sphere_trace(scene, {b, 0, 3}, {0, 0, -1});
    REQUIRE(grazing.has_value());
    const double z_hit = std::sqrt(1.0 - b * b);
    CHECK(length(grazing->position - Vec3{b, 0, z_hit}) < 1e-3);

    // Hit points sit within twice the hit tolerance of the surface.
    std::mt19937_64 rng(47);
    std::normal_distribution<double> g(0.0, 1.0);
    for (int it = 0; it < 200; ++it) {
        const Vec3 origin = normalize(Vec3{g(rng), g(rng), g(rng)}) * 4.0;
        const Vec3 target = normalize(Vec3{g(rng), g(rng), g(rng)}) * 0.3;
        const auto h = sphere_trace(scene, origin, normalize(target - origin));
        REQUIRE(h.has_value());
        CHECK(std::abs(sdf(scene, h->position)) <= 2.0 * kHitTolerance);
    }
}

TEST_CASE("sdf is 1-Lipschitz") {
    Scene scene = unit_sphere_scene();
    Primitive plane;
    plane.shape = PlanePrim{{0, -1.5, 0}, {0, 1, 0}};
    plane.material_id = 0;
    scene.primitives.push_back(plane);
    Primitive box;
    box.shape = BoxPrim{{2, 0.5, -1}, {0.7, 0.4, 1.2}};
    box.material_id = 0;
    scene.primitives.push_back(box);

    std::mt19937_64 rng(53);
    std::uniform_real_distribution<double> coord(-5.0, 5.0);
    for (int it = 0; it < 2000; ++it) {
        const Vec3 a{coord(rng), coord(rng), coord(rng)};
        const Vec3 b{coord(rng), coord(rng), coord(rng)};
        const double lhs = std::abs(sdf(scene, a) - sdf(scene, b));
        const double rhs = length(a - b);
        CHECK(lhs <= rhs * (1.0 + 1e-9) + 1e-12);
    }
}
