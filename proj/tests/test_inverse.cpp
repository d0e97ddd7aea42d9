// Copyright (c) 2026 The polaris authors.
// SPDX-License-Identifier: Apache-2.0

#include <cmath>
#include <random>

#include <doctest.h>

#include "polaris/inverse.hpp"
#include "polaris/renderer.hpp"
#include "polaris/scene.hpp"

#include "test_scenes.hpp"

using namespace polaris;
using namespace polaris::inverse;

namespace {

/// Renders orbit views of the scene into in-memory observations.
Observations make_observations(const Scene& scene, int n_views) {
    Observations obs;
    const auto cams = orbit_cameras(scene.camera, n_views);
    for (const Camera& cam : cams) {
        const RenderResult r = render_view(scene, cam);
        ObservationView view;
        view.camera = cam;
        view.stokes = r.image;
        view.mask.resize(r.mask.size());
        for (size_t i = 0; i < r.mask.size(); ++i) view.mask[i] = r.mask[i] > 0.5f ? 1 : 0;
        obs.views.push_back(std::move(view));
    }
    return obs;
}

}  // namespace

TEST_CASE("pack/unpack round trip") {
    Scene scene = parse_scene(testing::conductor_sphere_json(8, 8));
    scene.materials[0].ks = 0.73;

    FreeParams free = FreeParams::parse("roughness,ks,eta,k", scene.materials.size());
    const PackedLayout layout = PackedLayout::make(scene.materials, free);
    CHECK(layout.size() == 8);

    std::vector<MaterialParams> mats = scene.materials;
    const std::vector<double> x = pack(mats, layout);
    std::vector<MaterialParams> back = scene.materials;
    back[0].roughness = 0.999;  // must be overwritten
    unpack(x, layout, back);
    CHECK(std::abs(back[0].roughness - mats[0].roughness) < 1e-12);
    CHECK(std::abs(back[0].ks - mats[0].ks) < 1e-12);
    for (int c = 0; c < 3; ++c) {
        CHECK(std::abs(back[0].ior.eta[c] - mats[0].ior.eta[c]) < 1e-12);
        CHECK(std::abs(back[0].ior.k[c] - mats[0].ior.k[c]) < 1e-12);
    }

    // Albedo goes through logit space.
    Scene diel = parse_scene(testing::dielectric_sphere_json(8, 8));
    const PackedLayout alayout = PackedLayout::make(
        diel.materials, FreeParams::parse("albedo", diel.materials.size()));
    std::vector<MaterialParams> amats = diel.materials;
    unpack(pack(amats, alayout), alayout, amats);
    for (int c = 0; c < 3; ++c)
        CHECK(std::abs(amats[0].albedo[c] - diel.materials[0].albedo[c]) < 1e-12);
}

TEST_CASE("layout validation") {
    const Scene diel = parse_scene(testing::dielectric_sphere_json(8, 8));
    CHECK_THROWS(PackedLayout::make(diel.materials, FreeParams::parse("eta", 1)));
    CHECK_THROWS(PackedLayout::make(diel.materials, FreeParams::parse("k", 1)));

    const Scene cond = parse_scene(testing::conductor_sphere_json(8, 8));
    CHECK_THROWS(PackedLayout::make(cond.materials, FreeParams::parse("albedo", 1)));
    CHECK_THROWS(FreeParams::parse("metalness", 1));
    CHECK_THROWS(PackedLayout::make(cond.materials, FreeParams::parse("", 1)));
}

TEST_CASE("grad_fd on analytic functions") {
    const auto quadratic = [](const std::vector<double>& x) {
        double s = 0.0;
        for (double v : x) s += v * v;
        return s;
    };
    const std::vector<double> g = grad_fd(quadratic, {1.0, 2.0}, 1e-4);
    CHECK(g[0] == doctest::Approx(2.0).epsilon(1e-6));
    CHECK(g[1] == doctest::Approx(4.0).epsilon(1e-6));

    const auto constant = [](const std::vector<double>&) { return 3.5; };
    for (double v : grad_fd(constant, {0.3, -0.7, 2.0}, 1e-4)) CHECK(v == 0.0);

    const auto bad = [](const std::vector<double>& x) {
        return x[1] > 0.5 ? std::numeric_limits<double>::quiet_NaN() : 0.0;
    };
    const std::vector<std::string> names{"alpha", "beta"};
    CHECK_THROWS_WITH_AS(grad_fd(bad, {0.0, 0.5}, 0.1, &names), doctest::Contains("beta"),
                         std::runtime_error);
}

TEST_CASE("adam_optimize") {
    const auto parabola = [](const std::vector<double>& x) {
        return (x[0] - 3.0) * (x[0] - 3.0);
    };
    AdamConfig cfg;
    cfg.lr = 0.1;
    cfg.iters = 500;
    const AdamResult r = adam_optimize(parabola, {0.0}, cfg);
    CHECK_FALSE(r.diverged);
    CHECK(std::abs(r.best[0] - 3.0) < 1e-3);
    CHECK(r.trace.size() == 501);
    CHECK(r.trace.front().first == 0);

    // Zero gradient everywhere leaves the parameters untouched.
    const auto flat = [](const std::vector<double>&) { return 1.0; };
    const AdamResult f = adam_optimize(flat, {0.4, -2.0}, cfg);
    CHECK(f.best[0] == 0.4);
    CHECK(f.best[1] == -2.0);
}

TEST_CASE("joint loss vanishes at the ground truth") {
    const Scene scene = parse_scene(testing::conductor_sphere_json(24, 32));
    const Observations obs = make_observations(scene, 2);
    const double at_truth = joint_loss(scene, obs);
    CHECK(at_truth < 1e-9);

    // Perturbing roughness strictly increases the loss.
    Scene perturbed = scene;
    perturbed.materials[0].roughness += 0.1;
    CHECK(joint_loss(perturbed, obs) > at_truth + 1e-6);
}

TEST_CASE("joint loss L1 semantics with doubled observations") {
    const Scene scene = parse_scene(testing::dielectric_sphere_json(16, 32));
    Observations obs = make_observations(scene, 1);
    obs.lambda_s = 1.0;
    obs.lambda_dolp = 0.0;

    // Mean |s| over masked pixels, channels and components.
    double mean_abs = 0.0;
    size_t masked = 0;
    const auto& view = obs.views[0];
    for (int y = 0; y < view.camera.height; ++y)
        for (int x = 0; x < view.camera.width; ++x) {
            if (!view.mask[static_cast<size_t>(y) * view.camera.width + x]) continue;
            ++masked;
            for (int c = 0; c < 3; ++c) {
                const StokesVector& s = view.stokes.at(x, y, c);
                mean_abs += std::abs(s.s0) + std::abs(s.s1) + std::abs(s.s2);
            }
        }
    mean_abs /= static_cast<double>(masked) * 9.0;

    for (auto& s : obs.views[0].stokes.pixels) s = s * 2.0;
    const double loss = joint_loss(scene, obs);
    CHECK(loss == doctest::Approx(mean_abs).epsilon(1e-9));
}

TEST_CASE("empty mask is an error") {
    const Scene scene = parse_scene(testing::dielectric_sphere_json(8, 16));
    Observations obs = make_observations(scene, 1);
    std::fill(obs.views[0].mask.begin(), obs.views[0].mask.end(), 0);
    CHECK_THROWS(joint_loss(scene, obs));
}

TEST_CASE("finite-difference gradient agrees with a higher-order stencil") {
    Scene scene = parse_scene(testing::dielectric_sphere_json(16, 32));
    const Observations obs = make_observations(scene, 1);

    const FreeParams free = FreeParams::parse("roughness,ks", scene.materials.size());
    const PackedLayout layout = PackedLayout::make(scene.materials, free);
    const LossEvaluator evaluator(scene, obs);

    std::vector<MaterialParams> work = scene.materials;
    const auto fn = [&](const std::vector<double>& x) {
        unpack(x, layout, work);
        return evaluator.joint(work);
    };

    // Probe away from the optimum so the gradient is meaningfully nonzero.
    std::vector<MaterialParams> off = scene.materials;
    off[0].roughness = 0.45;
    off[0].ks = 0.8;
    const std::vector<double> x0 = pack(off, layout);

    const double h = 1e-4;
    const std::vector<double> g2 = grad_fd(fn, x0, h);
    for (size_t i = 0; i < x0.size(); ++i) {
        std::vector<double> p = x0;
        auto f = [&](double v) {
            p[i] = v;
            const double out = fn(p);
            p[i] = x0[i];
            return out;
        };
        const double g4 = (-f(x0[i] + 2 * h) + 8 * f(x0[i] + h) - 8 * f(x0[i] - h) +
                           f(x0[i] - 2 * h)) /
                          (12 * h);
        CHECK(std::abs(g2[i]) > 1e-5);
        CHECK(std::abs(g2[i] - g4) <= 0.05 * std::max(std::abs(g2[i]), std::abs(g4)));
    }
}

TEST_CASE("landscape scan self-consistency at the truth") {
    const Scene scene = parse_scene(testing::bright_sun_conductor_json(24, 32));
    const Observations obs = make_observations(scene, 2);

    for (LossKind kind : {LossKind::StokesL1, LossKind::IntensityL1, LossKind::DolpL1}) {
        const auto rows = landscape_scan(scene, obs, GeomParam::SphereRadius, 0.9, 1.1, 21, kind);
        REQUIRE(rows.size() == 21);
        CHECK(rows[10].value == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(rows[10].loss < 1e-9);
        size_t argmin = 0;
        for (size_t i = 1; i < rows.size(); ++i)
            if (rows[i].loss < rows[argmin].loss) argmin = i;
        CHECK(argmin == 10);
    }
}

TEST_CASE("DoLP landscape is invariant to uniform intensity scaling") {
    const Scene scene = parse_scene(testing::bright_sun_conductor_json(20, 32));

    Scene bright = scene;
    bright.env.ambient = bright.env.ambient * 10.0;
    for (SunLight& sun : bright.env.suns) sun.radiance = sun.radiance * 10.0;

    const Observations obs = make_observations(scene, 1);
    const Observations obs_bright = make_observations(bright, 1);

    const auto rows = landscape_scan(scene, obs, GeomParam::SphereRadius, 0.94, 1.06, 7,
                                     LossKind::DolpL1);
    const auto rows_bright = landscape_scan(bright, obs_bright, GeomParam::SphereRadius, 0.94,
                                            1.06, 7, LossKind::DolpL1);
    for (size_t i = 0; i < rows.size(); ++i)
        CHECK(std::abs(rows[i].loss - rows_bright[i].loss) < 1e-6);
}

TEST_CASE("recovery with the ground truth as the starting point") {
    const Scene scene = parse_scene(testing::dielectric_sphere_json(16, 32));
    const Observations obs = make_observations(scene, 1);
    const LossEvaluator evaluator(scene, obs);
    // Already at the optimum: the loss is immediately below threshold.
    CHECK(evaluator.joint(scene.materials) < 1e-9);
}
