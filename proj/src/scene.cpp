// Copyright (c) 2026 The polaris authors.
// SPDX-License-Identifier: Apache-2.0

#include "polaris/scene.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>

#include <json.hpp>

namespace polaris {

using nlohmann::json;

Rgb EnvLight::radiance(const Vec3& w) const {
    Rgb out = ambient;
    for (const SunLight& sun : suns) {
        if (dot(w, sun.direction) >= std::cos(sun.angular_radius)) out = out + sun.radiance;
    }
    return out;
}

// ---------------------------------------------------------------------------
// SDF evaluation

namespace {

double sdf_sphere(const SpherePrim& s, const Vec3& x) { return length(x - s.center) - s.radius; }

double sdf_plane(const PlanePrim& p, const Vec3& x) { return dot(x - p.point, p.normal); }

double sdf_box(const BoxPrim& b, const Vec3& x) {
    const Vec3 p = x - b.center;
    const Vec3 q{std::abs(p.x) - b.half_extents.x, std::abs(p.y) - b.half_extents.y,
                 std::abs(p.z) - b.half_extents.z};
    const Vec3 qpos{std::max(q.x, 0.0), std::max(q.y, 0.0), std::max(q.z, 0.0)};
    return length(qpos) + std::min(std::max(q.x, std::max(q.y, q.z)), 0.0);
}

double sdf_primitive(const Primitive& prim, const Vec3& x) {
    return std::visit(
        [&](const auto& shape) {
            using T = std::decay_t<decltype(shape)>;
            if constexpr (std::is_same_v<T, SpherePrim>)
                return sdf_sphere(shape, x);
            else if constexpr (std::is_same_v<T, PlanePrim>)
                return sdf_plane(shape, x);
            else
                return sdf_box(shape, x);
        },
        prim.shape);
}

int nearest_primitive(const Scene& scene, const Vec3& x) {
    int best = 0;
    double best_d = std::numeric_limits<double>::infinity();
    for (size_t i = 0; i < scene.primitives.size(); ++i) {
        const double d = sdf_primitive(scene.primitives[i], x);
        if (d < best_d) {
            best_d = d;
            best = static_cast<int>(i);
        }
    }
    return best;
}

}  // namespace

double sdf(const Scene& scene, const Vec3& x) {
    double d = std::numeric_limits<double>::infinity();
    for (const Primitive& prim : scene.primitives) d = std::min(d, sdf_primitive(prim, x));
    return d;
}

Vec3 sdf_normal(const Scene& scene, const Vec3& x) {
    constexpr double h = 1e-5;
    const Vec3 g{sdf(scene, {x.x + h, x.y, x.z}) - sdf(scene, {x.x - h, x.y, x.z}),
                 sdf(scene, {x.x, x.y + h, x.z}) - sdf(scene, {x.x, x.y - h, x.z}),
                 sdf(scene, {x.x, x.y, x.z + h}) - sdf(scene, {x.x, x.y, x.z - h})};
    const double len = length(g);
    if (len < 1e-12) throw std::runtime_error("sdf_normal: degenerate gradient");
    return g / len;
}

std::optional<Hit> sphere_trace(const Scene& scene, const Vec3& origin, const Vec3& direction) {
    if (scene.primitives.empty()) return std::nullopt;
    double t = 0.0;
    for (int step = 0; step < kMaxTraceSteps; ++step) {
        const double d = sdf(scene, origin + t * direction);
        if (d < kHitTolerance) {
            // Keep marching below the detection tolerance: at grazing
            // incidence the along-ray gap to the true intersection is
            // sdf/sin(angle), far larger than the radial residual.
            for (int refine = 0; refine < 64; ++refine) {
                const double dr = sdf(scene, origin + t * direction);
                if (dr < kHitTolerance / 20.0) break;
                t += dr;
            }
            const Vec3 p = origin + t * direction;
            Hit hit;
            hit.position = p;
            hit.normal = sdf_normal(scene, p);
            hit.material_id = scene.primitives[nearest_primitive(scene, p)].material_id;
            hit.t = t;
            return hit;
        }
        t += d;
        if (t > kMaxTraceDistance) return std::nullopt;
    }
    return std::nullopt;
}

bool trace_any(const Scene& scene, const Vec3& origin, const Vec3& direction) {
    if (scene.primitives.empty()) return false;
    double t = 0.0;
    for (int step = 0; step < kMaxTraceSteps; ++step) {
        const double d = sdf(scene, origin + t * direction);
        if (d < kHitTolerance) return true;
        t += d;
        if (t > kMaxTraceDistance) return false;
    }
    return false;
}

// ---------------------------------------------------------------------------
// Scene file parsing

namespace {

[[noreturn]] void fail(const std::string& where, const std::string& what) {
    throw SceneError(where.empty() ? what : where + ": " + what);
}

void check_known_keys(const json& obj, const std::string& where,
                      std::initializer_list<const char*> keys) {
    for (const auto& item : obj.items()) {
        if (std::find_if(keys.begin(), keys.end(),
                         [&](const char* k) { return item.key() == k; }) == keys.end())
            fail(where, "unknown key '" + item.key() + "'");
    }
}

double get_number(const json& obj, const std::string& where, const char* key) {
    if (!obj.contains(key)) fail(where, std::string("missing key '") + key + "'");
    const json& v = obj.at(key);
    if (!v.is_number()) fail(where + "." + key, "expected a number");
    return v.get<double>();
}

double get_number_or(const json& obj, const std::string& where, const char* key, double fallback) {
    if (!obj.contains(key)) return fallback;
    const json& v = obj.at(key);
    if (!v.is_number()) fail(where + "." + key, "expected a number");
    return v.get<double>();
}

int get_int(const json& obj, const std::string& where, const char* key) {
    if (!obj.contains(key)) fail(where, std::string("missing key '") + key + "'");
    const json& v = obj.at(key);
    if (!v.is_number_integer()) fail(where + "." + key, "expected an integer");
    return v.get<int>();
}

Vec3 get_vec3(const json& obj, const std::string& where, const char* key) {
    if (!obj.contains(key)) fail(where, std::string("missing key '") + key + "'");
    const json& v = obj.at(key);
    if (!v.is_array() || v.size() != 3 || !v[0].is_number() || !v[1].is_number() ||
        !v[2].is_number())
        fail(where + "." + key, "expected an array of 3 numbers");
    return {v[0].get<double>(), v[1].get<double>(), v[2].get<double>()};
}

Rgb get_rgb(const json& obj, const std::string& where, const char* key) {
    const Vec3 v = get_vec3(obj, where, key);
    return {v.x, v.y, v.z};
}

Rgb get_rgb_or(const json& obj, const std::string& where, const char* key, const Rgb& fallback) {
    if (!obj.contains(key)) return fallback;
    return get_rgb(obj, where, key);
}

Camera parse_camera(const json& j) {
    const std::string where = "camera";
    if (!j.is_object()) fail(where, "expected an object");
    check_known_keys(j, where, {"position", "look_at", "up", "vertical_fov", "width", "height"});
    Camera cam;
    cam.position = get_vec3(j, where, "position");
    cam.look_at = get_vec3(j, where, "look_at");
    if (j.contains("up")) cam.up = get_vec3(j, where, "up");
    cam.vertical_fov = get_number(j, where, "vertical_fov");
    cam.width = get_int(j, where, "width");
    cam.height = get_int(j, where, "height");

    if (cam.vertical_fov <= 0.0 || cam.vertical_fov >= 180.0)
        fail(where + ".vertical_fov", "must be in (0, 180) degrees");
    if (cam.width < 1 || cam.height < 1) fail(where, "width and height must be >= 1");
    const Vec3 view = cam.look_at - cam.position;
    if (length(view) < 1e-12) fail(where, "position and look_at coincide");
    if (length(cross(view, cam.up)) < 1e-9) fail(where + ".up", "parallel to the view direction");
    return cam;
}

Primitive parse_primitive(const json& j, size_t index, size_t material_count) {
    const std::string where = "primitives[" + std::to_string(index) + "]";
    if (!j.is_object()) fail(where, "expected an object");
    if (!j.contains("type") || !j.at("type").is_string()) fail(where, "missing string key 'type'");
    const std::string type = j.at("type").get<std::string>();

    Primitive prim;
    prim.material_id = get_int(j, where, "material");
    if (prim.material_id < 0 || static_cast<size_t>(prim.material_id) >= material_count)
        fail(where + ".material", "material id " + std::to_string(prim.material_id) +
                                      " out of range (have " + std::to_string(material_count) +
                                      " materials)");

    if (type == "sphere") {
        check_known_keys(j, where, {"type", "center", "radius", "material"});
        SpherePrim s;
        s.center = get_vec3(j, where, "center");
        s.radius = get_number(j, where, "radius");
        if (s.radius <= 0.0) fail(where + ".radius", "must be > 0");
        prim.shape = s;
    } else if (type == "plane") {
        check_known_keys(j, where, {"type", "point", "normal", "material"});
        PlanePrim p;
        p.point = get_vec3(j, where, "point");
        p.normal = get_vec3(j, where, "normal");
        const double len = length(p.normal);
        if (std::abs(len - 1.0) > 1e-6) fail(where + ".normal", "must be a unit vector");
        p.normal = p.normal / len;
        prim.shape = p;
    } else if (type == "box") {
        check_known_keys(j, where, {"type", "center", "half_extents", "material"});
        BoxPrim b;
        b.center = get_vec3(j, where, "center");
        b.half_extents = get_vec3(j, where, "half_extents");
        if (b.half_extents.x <= 0.0 || b.half_extents.y <= 0.0 || b.half_extents.z <= 0.0)
            fail(where + ".half_extents", "must be > 0");
        prim.shape = b;
    } else {
        fail(where + ".type", "unknown primitive type '" + type + "'");
    }
    return prim;
}

MaterialParams parse_material(const json& j, size_t index) {
    const std::string where = "materials[" + std::to_string(index) + "]";
    if (!j.is_object()) fail(where, "expected an object");
    check_known_keys(j, where, {"name", "m", "albedo", "roughness", "ks", "eta", "k"});

    MaterialParams mat;
    if (j.contains("name")) {
        if (!j.at("name").is_string()) fail(where + ".name", "expected a string");
        mat.name = j.at("name").get<std::string>();
    }
    mat.m = get_int(j, where, "m");
    if (mat.m != 0 && mat.m != 1) fail(where + ".m", "must be 0 (conductor) or 1 (dielectric)");

    mat.roughness = get_number(j, where, "roughness");
    if (mat.roughness <= 0.0 || mat.roughness > 1.0) fail(where + ".roughness", "must be in (0, 1]");
    mat.roughness = std::max(mat.roughness, kMinRoughness);

    mat.ks = get_number_or(j, where, "ks", 1.0);
    if (mat.ks < 0.0) fail(where + ".ks", "must be >= 0");

    if (mat.m == 1) {
        mat.albedo = get_rgb(j, where, "albedo");
        for (int c = 0; c < 3; ++c)
            if (mat.albedo[c] < 0.0 || mat.albedo[c] > 1.0)
                fail(where + ".albedo", "components must be in [0, 1]");
        mat.ior.eta = get_rgb_or(j, where, "eta", Rgb{kDielectricIor});
        mat.ior.k = get_rgb_or(j, where, "k", Rgb{0.0});
        if (mat.ior.k != Rgb{0.0}) fail(where + ".k", "dielectric must have k=0");
        if (mat.ior.eta != Rgb{kDielectricIor})
            fail(where + ".eta", "dielectric eta is fixed at 1.5");
    } else {
        mat.albedo = get_rgb_or(j, where, "albedo", Rgb{0.0});
        mat.ior.eta = get_rgb(j, where, "eta");
        mat.ior.k = get_rgb(j, where, "k");
        for (int c = 0; c < 3; ++c) {
            if (mat.ior.eta[c] <= 0.0) fail(where + ".eta", "components must be > 0");
            if (mat.ior.k[c] < 0.0) fail(where + ".k", "components must be >= 0");
        }
    }
    return mat;
}

EnvLight parse_env(const json& j) {
    const std::string where = "env";
    if (!j.is_object()) fail(where, "expected an object");
    check_known_keys(j, where, {"ambient", "suns"});
    EnvLight env;
    env.ambient = get_rgb_or(j, where, "ambient", Rgb{0.0});
    for (int c = 0; c < 3; ++c)
        if (env.ambient[c] < 0.0) fail(where + ".ambient", "must be >= 0");

    if (j.contains("suns")) {
        const json& suns = j.at("suns");
        if (!suns.is_array()) fail(where + ".suns", "expected an array");
        for (size_t i = 0; i < suns.size(); ++i) {
            const std::string sw = where + ".suns[" + std::to_string(i) + "]";
            const json& sj = suns[i];
            if (!sj.is_object()) fail(sw, "expected an object");
            check_known_keys(sj, sw, {"direction", "angular_radius", "radiance"});
            SunLight sun;
            sun.direction = get_vec3(sj, sw, "direction");
            const double len = length(sun.direction);
            if (len < 1e-12) fail(sw + ".direction", "must be nonzero");
            sun.direction = sun.direction / len;
            sun.angular_radius = get_number(sj, sw, "angular_radius") * std::numbers::pi / 180.0;
            if (sun.angular_radius <= 0.0 || sun.angular_radius >= std::numbers::pi / 2.0)
                fail(sw + ".angular_radius", "must be in (0, 90) degrees");
            sun.radiance = get_rgb(sj, sw, "radiance");
            for (int c = 0; c < 3; ++c)
                if (sun.radiance[c] < 0.0) fail(sw + ".radiance", "must be >= 0");
            env.suns.push_back(sun);
        }
    }
    return env;
}

SamplingConfig parse_sampling(const json& j) {
    const std::string where = "sampling";
    if (!j.is_object()) fail(where, "expected an object");
    check_known_keys(j, where, {"hemisphere_samples", "seed"});
    SamplingConfig cfg;
    if (j.contains("hemisphere_samples")) cfg.hemisphere_samples = get_int(j, where, "hemisphere_samples");
    if (cfg.hemisphere_samples < 4) fail(where + ".hemisphere_samples", "must be >= 4");
    if (j.contains("seed")) {
        const json& v = j.at("seed");
        if (!v.is_number_integer() || v.get<long long>() < 0)
            fail(where + ".seed", "expected a nonnegative integer");
        cfg.seed = v.get<std::uint64_t>();
    }
    return cfg;
}

void line_col_of_offset(std::string_view text, size_t byte, size_t& line, size_t& col) {
    line = 1;
    col = 1;
    for (size_t i = 0; i < byte && i < text.size(); ++i) {
        if (text[i] == '\n') {
            ++line;
            col = 1;
        } else {
            ++col;
        }
    }
}

}  // namespace

Scene parse_scene(std::string_view text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        size_t line = 0, col = 0;
        line_col_of_offset(text, e.byte > 0 ? e.byte - 1 : 0, line, col);
        throw SceneError("syntax error at line " + std::to_string(line) + ", column " +
                         std::to_string(col) + ": " + e.what());
    }
    if (!doc.is_object()) throw SceneError("top level: expected an object");
    check_known_keys(doc, "top level", {"camera", "primitives", "materials", "env", "sampling"});

    Scene scene;
    if (!doc.contains("camera")) fail("top level", "missing key 'camera'");
    scene.camera = parse_camera(doc.at("camera"));

    if (!doc.contains("materials") || !doc.at("materials").is_array())
        fail("top level", "missing array key 'materials'");
    for (size_t i = 0; i < doc.at("materials").size(); ++i)
        scene.materials.push_back(parse_material(doc.at("materials")[i], i));

    if (doc.contains("primitives")) {
        if (!doc.at("primitives").is_array()) fail("primitives", "expected an array");
        for (size_t i = 0; i < doc.at("primitives").size(); ++i)
            scene.primitives.push_back(
                parse_primitive(doc.at("primitives")[i], i, scene.materials.size()));
    }

    scene.env = doc.contains("env") ? parse_env(doc.at("env")) : EnvLight{};
    scene.sampling = doc.contains("sampling") ? parse_sampling(doc.at("sampling")) : SamplingConfig{};
    return scene;
}

Scene load_scene(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw SceneError("cannot open scene file '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_scene(ss.str());
}

}  // namespace polaris
