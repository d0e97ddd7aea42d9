// Copyright (c) 2026 The polaris authors.
// SPDX-License-Identifier: Apache-2.0
//
// polaris: polarimetric renderer and inverse material solver.

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "polaris/csv.hpp"
#include "polaris/fresnel.hpp"
#include "polaris/inverse.hpp"
#include "polaris/pfm.hpp"
#include "polaris/renderer.hpp"
#include "polaris/scene.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace polaris;

namespace {

// ---------------------------------------------------------------------------
// Shared helpers

json camera_to_json(const Camera& cam) {
    return json{{"position", {cam.position.x, cam.position.y, cam.position.z}},
                {"look_at", {cam.look_at.x, cam.look_at.y, cam.look_at.z}},
                {"up", {cam.up.x, cam.up.y, cam.up.z}},
                {"vertical_fov", cam.vertical_fov},
                {"width", cam.width},
                {"height", cam.height}};
}

Camera camera_from_json(const json& j) {
    Camera cam;
    auto vec = [&](const char* key) {
        const auto& a = j.at(key);
        return Vec3{a.at(0).get<double>(), a.at(1).get<double>(), a.at(2).get<double>()};
    };
    cam.position = vec("position");
    cam.look_at = vec("look_at");
    cam.up = vec("up");
    cam.vertical_fov = j.at("vertical_fov").get<double>();
    cam.width = j.at("width").get<int>();
    cam.height = j.at("height").get<int>();
    return cam;
}

std::vector<double> stokes_plane(const PolarizedImage& img, int component) {
    std::vector<double> out(static_cast<size_t>(img.width) * img.height * 3);
    for (size_t i = 0; i < out.size(); ++i) {
        const StokesVector& s = img.pixels[i];
        out[i] = component == 0 ? s.s0 : (component == 1 ? s.s1 : s.s2);
    }
    return out;
}

/// Writes the per-view dataset layout. The derived planes (DoLP, polarizer
/// intensities) are computed from the float32-quantized Stokes values, so
/// re-deriving them from the written s0/s1/s2.pfm reproduces these files
/// bit for bit.
void write_view_outputs(const fs::path& dir, const RenderResult& result, const Camera& camera,
                        const SamplingConfig& sampling, int view_index) {
    fs::create_directories(dir);
    const PolarizedImage& img = result.image;
    const int w = img.width, h = img.height;

    const PfmImage s0 = pfm_from_rows(w, h, 3, stokes_plane(img, 0));
    const PfmImage s1 = pfm_from_rows(w, h, 3, stokes_plane(img, 1));
    const PfmImage s2 = pfm_from_rows(w, h, 3, stokes_plane(img, 2));
    write_pfm((dir / "s0.pfm").string(), s0);
    write_pfm((dir / "s1.pfm").string(), s1);
    write_pfm((dir / "s2.pfm").string(), s2);

    PolarizedImage quantized(w, h);
    for (size_t i = 0; i < img.pixels.size(); ++i) {
        quantized.pixels[i] = {static_cast<double>(static_cast<float>(img.pixels[i].s0)),
                               static_cast<double>(static_cast<float>(img.pixels[i].s1)),
                               static_cast<double>(static_cast<float>(img.pixels[i].s2))};
    }
    const DerivedImages derived = derive_images(quantized);
    write_pfm((dir / "dolp.pfm").string(), pfm_from_rows(w, h, 3, derived.dolp));
    write_pfm((dir / "i000.pfm").string(), pfm_from_rows(w, h, 3, derived.i000));
    write_pfm((dir / "i045.pfm").string(), pfm_from_rows(w, h, 3, derived.i045));
    write_pfm((dir / "i090.pfm").string(), pfm_from_rows(w, h, 3, derived.i090));
    write_pfm((dir / "i135.pfm").string(), pfm_from_rows(w, h, 3, derived.i135));

    PfmImage mask;
    mask.channels = 1;
    mask.width = w;
    mask.height = h;
    mask.data.resize(static_cast<size_t>(w) * h);
    PfmImage cmask = mask;
    for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x) {
            const size_t p = static_cast<size_t>(y) * w + x;
            mask.at(x, y, 0) = result.mask[p];
            cmask.at(x, y, 0) = result.conductor_mask[p];
        }
    write_pfm((dir / "mask.pfm").string(), mask);
    write_pfm((dir / "conductor_mask.pfm").string(), cmask);

    json meta{{"view", view_index},
              {"camera", camera_to_json(camera)},
              {"seed", sampling.seed},
              {"hemisphere_samples", sampling.hemisphere_samples}};
    std::ofstream out(dir / "meta.json");
    out << meta.dump(2) << '\n';
}

struct LoadedObservations {
    inverse::Observations obs;
    SamplingConfig sampling;
};

inverse::ObservationView load_view(const fs::path& dir, SamplingConfig& sampling) {
    std::ifstream meta_in(dir / "meta.json");
    if (!meta_in) throw std::runtime_error("missing meta.json in " + dir.string());
    json meta = json::parse(meta_in);

    inverse::ObservationView view;
    view.camera = camera_from_json(meta.at("camera"));
    sampling.seed = meta.at("seed").get<std::uint64_t>();
    sampling.hemisphere_samples = meta.at("hemisphere_samples").get<int>();

    const PfmImage s0 = read_pfm((dir / "s0.pfm").string());
    const PfmImage s1 = read_pfm((dir / "s1.pfm").string());
    const PfmImage s2 = read_pfm((dir / "s2.pfm").string());
    const PfmImage mask = read_pfm((dir / "mask.pfm").string());
    if (s0.width != view.camera.width || s0.height != view.camera.height || s0.channels != 3 ||
        s1.width != s0.width || s2.width != s0.width || mask.width != s0.width ||
        mask.height != s0.height)
        throw std::runtime_error("observation images in " + dir.string() +
                                 " do not match the camera dimensions");

    view.stokes = PolarizedImage(s0.width, s0.height);
    for (int y = 0; y < s0.height; ++y)
        for (int x = 0; x < s0.width; ++x)
            for (int c = 0; c < 3; ++c)
                view.stokes.at(x, y, c) = {s0.at(x, y, c), s1.at(x, y, c), s2.at(x, y, c)};

    view.mask.resize(static_cast<size_t>(s0.width) * s0.height);
    for (int y = 0; y < s0.height; ++y)
        for (int x = 0; x < s0.width; ++x)
            view.mask[static_cast<size_t>(y) * s0.width + x] = mask.at(x, y, 0) > 0.5f ? 1 : 0;
    return view;
}

LoadedObservations load_observations(const std::string& obs_dir) {
    LoadedObservations loaded;
    const fs::path root(obs_dir);
    if (fs::exists(root / "s0.pfm")) {
        loaded.obs.views.push_back(load_view(root, loaded.sampling));
        return loaded;
    }
    std::vector<fs::path> view_dirs;
    if (fs::exists(root))
        for (const auto& entry : fs::directory_iterator(root))
            if (entry.is_directory() && entry.path().filename().string().rfind("view_", 0) == 0)
                view_dirs.push_back(entry.path());
    std::sort(view_dirs.begin(), view_dirs.end());
    if (view_dirs.empty())
        throw std::runtime_error("no observations found under " + obs_dir +
                                 " (expected s0.pfm or view_* directories)");
    for (const fs::path& dir : view_dirs)
        loaded.obs.views.push_back(load_view(dir, loaded.sampling));
    return loaded;
}

// ---------------------------------------------------------------------------
// Subcommand payloads

struct RenderArgs {
    std::string scene_path, out_dir;
    int views = 0;
    int samples = 0;
    std::optional<std::uint64_t> seed;
    int threads = 0;
};

int run_render(const RenderArgs& args) {
    Scene scene = load_scene(args.scene_path);
    if (args.samples > 0) scene.sampling.hemisphere_samples = args.samples;
    if (args.seed) scene.sampling.seed = *args.seed;

    std::cout << "config: subcommand=render scene=" << args.scene_path << " out=" << args.out_dir
              << " views=" << args.views << " samples=" << scene.sampling.hemisphere_samples
              << " seed=" << scene.sampling.seed << " threads=" << args.threads << "\n";

    const RenderOptions opts{args.threads};
    if (args.views <= 0) {
        const RenderResult result = render(scene, opts);
        write_view_outputs(args.out_dir, result, scene.camera, scene.sampling, 0);
        std::cout << "wrote " << args.out_dir << "\n";
        return 0;
    }

    const std::vector<Camera> cameras = orbit_cameras(scene.camera, args.views);
    for (int k = 0; k < args.views; ++k) {
        const RenderResult result = render_view(scene, cameras[k], opts);
        char name[32];
        std::snprintf(name, sizeof(name), "view_%03d", k);
        write_view_outputs(fs::path(args.out_dir) / name, result, cameras[k], scene.sampling, k);
    }
    std::cout << "wrote " << args.views << " views under " << args.out_dir << "\n";
    return 0;
}

struct FresnelArgs {
    double eta = 1.5, k = 0.0;
    double theta_min = 0.0, theta_max = 89.9;
    std::string out_csv;
};

int run_fresnel_curve(const FresnelArgs& args) {
    std::cout << "config: subcommand=fresnel-curve eta=" << args.eta << " k=" << args.k
              << " theta=[" << args.theta_min << "," << args.theta_max << "] out=" << args.out_csv
              << "\n";
    if (args.eta <= 0.0 || args.k < 0.0 || args.theta_min < 0.0 || args.theta_max >= 90.0 ||
        args.theta_min > args.theta_max)
        throw std::runtime_error("fresnel-curve: need eta > 0, k >= 0, 0 <= theta_min <= theta_max < 90");

    const std::complex<double> n{args.eta, args.k};
    std::vector<std::vector<double>> rows;
    // 0.1 degree steps, indexed in tenths to keep the grid exact.
    const long lo = std::lround(args.theta_min * 10.0);
    const long hi = std::lround(args.theta_max * 10.0);
    for (long i = lo; i <= hi; ++i) {
        const double deg = i / 10.0;
        const double theta = deg * std::numbers::pi / 180.0;
        const Reflectances r = reflectances(n, theta);
        rows.push_back({deg, r.rs, r.rp, 0.5 * (r.rs + r.rp), phase_delay_cos(n, theta)});
    }
    write_csv(args.out_csv, {"theta_deg", "R_s", "R_p", "R_avg", "cos_delta"}, rows);
    std::cout << "wrote " << rows.size() << " rows to " << args.out_csv << "\n";
    return 0;
}

struct StokesArgs {
    std::string mode, in_dir, out_dir;
};

PfmImage load_plane(const fs::path& dir, const char* name, int& w, int& h) {
    PfmImage img = read_pfm((dir / name).string());
    if (img.channels != 3) throw std::runtime_error(std::string(name) + ": expected 3 channels");
    if (w == 0) {
        w = img.width;
        h = img.height;
    } else if (img.width != w || img.height != h) {
        throw std::runtime_error(std::string(name) + ": dimensions do not match the other inputs");
    }
    return img;
}

int run_stokes(const StokesArgs& args) {
    std::cout << "config: subcommand=stokes mode=" << args.mode << " in=" << args.in_dir
              << " out=" << args.out_dir << "\n";
    const fs::path in(args.in_dir);
    fs::create_directories(args.out_dir);
    const fs::path out(args.out_dir);
    int w = 0, h = 0;

    if (args.mode == "from_polarizer") {
        const PfmImage i000 = load_plane(in, "i000.pfm", w, h);
        const PfmImage i045 = load_plane(in, "i045.pfm", w, h);
        const PfmImage i090 = load_plane(in, "i090.pfm", w, h);
        const PfmImage i135 = load_plane(in, "i135.pfm", w, h);
        const size_t n = static_cast<size_t>(w) * h * 3;
        std::vector<double> s0(n), s1(n), s2(n);
        const auto a = pfm_to_rows(i000), b = pfm_to_rows(i045), c = pfm_to_rows(i090),
                   d = pfm_to_rows(i135);
        for (size_t i = 0; i < n; ++i) {
            const StokesVector s = stokes_from_polarizer(a[i], b[i], c[i], d[i]);
            s0[i] = s.s0;
            s1[i] = s.s1;
            s2[i] = s.s2;
        }
        write_pfm((out / "s0.pfm").string(), pfm_from_rows(w, h, 3, s0));
        write_pfm((out / "s1.pfm").string(), pfm_from_rows(w, h, 3, s1));
        write_pfm((out / "s2.pfm").string(), pfm_from_rows(w, h, 3, s2));
    } else if (args.mode == "to_polarizer" || args.mode == "dolp") {
        const PfmImage s0 = load_plane(in, "s0.pfm", w, h);
        const PfmImage s1 = load_plane(in, "s1.pfm", w, h);
        const PfmImage s2 = load_plane(in, "s2.pfm", w, h);
        PolarizedImage img(w, h);
        const auto p0 = pfm_to_rows(s0), p1 = pfm_to_rows(s1), p2 = pfm_to_rows(s2);
        for (size_t i = 0; i < img.pixels.size(); ++i) img.pixels[i] = {p0[i], p1[i], p2[i]};
        const DerivedImages derived = derive_images(img);
        if (args.mode == "dolp") {
            write_pfm((out / "dolp.pfm").string(), pfm_from_rows(w, h, 3, derived.dolp));
        } else {
            write_pfm((out / "i000.pfm").string(), pfm_from_rows(w, h, 3, derived.i000));
            write_pfm((out / "i045.pfm").string(), pfm_from_rows(w, h, 3, derived.i045));
            write_pfm((out / "i090.pfm").string(), pfm_from_rows(w, h, 3, derived.i090));
            write_pfm((out / "i135.pfm").string(), pfm_from_rows(w, h, 3, derived.i135));
        }
    } else {
        throw std::runtime_error("stokes: unknown mode '" + args.mode +
                                 "' (expected to_polarizer, from_polarizer or dolp)");
    }
    std::cout << "wrote " << args.out_dir << "\n";
    return 0;
}

struct InvertArgs {
    std::string scene_path, obs_dir, out_dir;
    std::string free_list = "roughness";
    double lr = 0.05;
    int iters = 300;
    double lambda_s = 1.0;
    double lambda_dolp = 0.1;
    bool dolp_unmasked = false;
    int threads = 0;
};

int run_invert(const InvertArgs& args) {
    Scene scene = load_scene(args.scene_path);
    LoadedObservations loaded = load_observations(args.obs_dir);
    scene.sampling = loaded.sampling;  // match the forward model of the dataset

    std::cout << "config: subcommand=invert scene=" << args.scene_path << " obs=" << args.obs_dir
              << " out=" << args.out_dir << " free=" << args.free_list << " lr=" << args.lr
              << " iters=" << args.iters << " lambda_s=" << args.lambda_s
              << " lambda_dolp=" << args.lambda_dolp << " views=" << loaded.obs.views.size()
              << " samples=" << scene.sampling.hemisphere_samples
              << " seed=" << scene.sampling.seed << " threads=" << args.threads << "\n";

    const inverse::FreeParams free =
        inverse::FreeParams::parse(args.free_list, scene.materials.size());
    inverse::RecoveryConfig config;
    config.adam.lr = args.lr;
    config.adam.iters = args.iters;
    config.lambda_s = args.lambda_s;
    config.lambda_dolp = args.lambda_dolp;
    config.mask_dolp = !args.dolp_unmasked;
    config.threads = args.threads;

    const inverse::RecoveryResult result =
        inverse::recover_materials(scene, loaded.obs, free, config);

    fs::create_directories(args.out_dir);
    std::vector<std::vector<std::string>> report_rows;
    for (const inverse::RecoveryRow& row : result.report) {
        report_rows.push_back({row.param, format_double(row.gt), format_double(row.recovered),
                               format_double(row.abs_error)});
        std::cout << row.param << ": gt=" << row.gt << " recovered=" << row.recovered
                  << " abs_error=" << row.abs_error << "\n";
    }
    write_csv((fs::path(args.out_dir) / "report.csv").string(),
              {"param_name", "gt", "recovered", "abs_error"}, report_rows);

    std::vector<std::vector<double>> trace_rows;
    for (const auto& [iter, loss] : result.trace)
        trace_rows.push_back({static_cast<double>(iter), loss});
    write_csv((fs::path(args.out_dir) / "trace.csv").string(), {"iter", "loss"}, trace_rows);

    std::cout << "best_loss=" << result.best_loss << (result.diverged ? " (diverged)" : "") << "\n";
    if (result.diverged) throw std::runtime_error("invert: optimization diverged (see trace.csv)");
    return 0;
}

struct LandscapeArgs {
    std::string scene_path, obs_dir, out_csv;
    std::string param = "sphere_radius";
    std::string grid = "0.9:1.1:21";
    std::string loss = "dolp_l1";
    int threads = 0;
};

int run_landscape(const LandscapeArgs& args) {
    Scene scene = load_scene(args.scene_path);
    LoadedObservations loaded = load_observations(args.obs_dir);
    scene.sampling = loaded.sampling;

    std::cout << "config: subcommand=landscape scene=" << args.scene_path
              << " obs=" << args.obs_dir << " param=" << args.param << " grid=" << args.grid
              << " loss=" << args.loss << " out=" << args.out_csv << " threads=" << args.threads
              << "\n";

    inverse::GeomParam param;
    if (args.param == "sphere_radius")
        param = inverse::GeomParam::SphereRadius;
    else if (args.param == "sphere_center_x")
        param = inverse::GeomParam::SphereCenterX;
    else if (args.param == "sphere_center_y")
        param = inverse::GeomParam::SphereCenterY;
    else if (args.param == "sphere_center_z")
        param = inverse::GeomParam::SphereCenterZ;
    else
        throw std::runtime_error("landscape: unknown param '" + args.param + "'");

    inverse::LossKind kind;
    if (args.loss == "stokes_l1")
        kind = inverse::LossKind::StokesL1;
    else if (args.loss == "intensity_l1")
        kind = inverse::LossKind::IntensityL1;
    else if (args.loss == "dolp_l1")
        kind = inverse::LossKind::DolpL1;
    else
        throw std::runtime_error("landscape: unknown loss '" + args.loss + "'");

    double lo = 0.0, hi = 0.0;
    int steps = 0;
    {
        std::stringstream ss(args.grid);
        std::string a, b, c;
        if (!std::getline(ss, a, ':') || !std::getline(ss, b, ':') || !std::getline(ss, c))
            throw std::runtime_error("landscape: --grid expects lo:hi:steps");
        lo = std::stod(a);
        hi = std::stod(b);
        steps = std::stoi(c);
    }

    const auto rows =
        inverse::landscape_scan(scene, loaded.obs, param, lo, hi, steps, kind, args.threads);
    std::vector<std::vector<double>> csv_rows;
    for (const auto& row : rows) csv_rows.push_back({row.value, row.loss});
    write_csv(args.out_csv, {"param_value", "loss"}, csv_rows);
    std::cout << "wrote " << rows.size() << " rows to " << args.out_csv << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"polaris: polarimetric forward renderer and inverse material solver"};
    app.require_subcommand(1);

    RenderArgs render_args;
    CLI::App* render_cmd = app.add_subcommand("render", "Render a scene to a PFM dataset");
    render_cmd->add_option("scene", render_args.scene_path, "Scene JSON file")->required();
    render_cmd->add_option("--out", render_args.out_dir, "Output directory")->required();
    render_cmd->add_option("--views", render_args.views,
                           "Render N orbit views (view_000...) instead of the scene camera");
    render_cmd->add_option("--samples", render_args.samples, "Override hemisphere sample count");
    render_cmd->add_option("--seed", render_args.seed, "Override the sampling seed");
    render_cmd->add_option("--threads", render_args.threads,
                           "Worker threads (0 = POLARIS_THREADS or hardware)");

    FresnelArgs fresnel_args;
    CLI::App* fresnel_cmd =
        app.add_subcommand("fresnel-curve", "Reflectance and phase-delay curves as CSV");
    fresnel_cmd->add_option("--eta", fresnel_args.eta, "Real part of the IOR")->required();
    fresnel_cmd->add_option("--k", fresnel_args.k, "Imaginary part of the IOR (0 = dielectric)");
    fresnel_cmd->add_option("--theta-min", fresnel_args.theta_min, "Start angle, degrees");
    fresnel_cmd->add_option("--theta-max", fresnel_args.theta_max, "End angle, degrees");
    fresnel_cmd->add_option("--out", fresnel_args.out_csv, "Output CSV path")->required();

    StokesArgs stokes_args;
    CLI::App* stokes_cmd =
        app.add_subcommand("stokes", "Convert between Stokes, polarizer and DoLP images");
    stokes_cmd->add_option("mode", stokes_args.mode, "to_polarizer | from_polarizer | dolp")
        ->required();
    stokes_cmd->add_option("--in", stokes_args.in_dir, "Input directory")->required();
    stokes_cmd->add_option("--out", stokes_args.out_dir, "Output directory")->required();

    InvertArgs invert_args;
    CLI::App* invert_cmd =
        app.add_subcommand("invert", "Recover material parameters from observations");
    invert_cmd->add_option("scene", invert_args.scene_path, "Scene JSON (geometry + GT materials)")
        ->required();
    invert_cmd->add_option("--obs", invert_args.obs_dir, "Observation directory")->required();
    invert_cmd->add_option("--out", invert_args.out_dir, "Report output directory")->required();
    invert_cmd->add_option("--free", invert_args.free_list,
                           "Free parameters, comma separated (roughness,ks,eta,k,albedo)");
    invert_cmd->add_option("--lr", invert_args.lr, "Adam learning rate");
    invert_cmd->add_option("--iters", invert_args.iters, "Adam iterations");
    invert_cmd->add_option("--lambda-s", invert_args.lambda_s, "Stokes L1 weight");
    invert_cmd->add_option("--lambda-dolp", invert_args.lambda_dolp, "DoLP L1 weight");
    invert_cmd->add_flag("--dolp-unmasked", invert_args.dolp_unmasked,
                         "Average the DoLP loss over the full frame instead of the object mask");
    invert_cmd->add_option("--threads", invert_args.threads,
                           "Worker threads (0 = POLARIS_THREADS or hardware)");

    LandscapeArgs landscape_args;
    CLI::App* landscape_cmd =
        app.add_subcommand("landscape", "Loss landscape over a geometry parameter");
    landscape_cmd->add_option("scene", landscape_args.scene_path, "Scene JSON file")->required();
    landscape_cmd->add_option("--obs", landscape_args.obs_dir, "Observation directory")->required();
    landscape_cmd->add_option("--param", landscape_args.param,
                              "sphere_radius | sphere_center_x | sphere_center_y | sphere_center_z");
    landscape_cmd->add_option("--grid", landscape_args.grid, "lo:hi:steps");
    landscape_cmd->add_option("--loss", landscape_args.loss,
                              "stokes_l1 | intensity_l1 | dolp_l1");
    landscape_cmd->add_option("--out", landscape_args.out_csv, "Output CSV path")->required();
    landscape_cmd->add_option("--threads", landscape_args.threads,
                              "Worker threads (0 = POLARIS_THREADS or hardware)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 1;
    }

    try {
        if (render_cmd->parsed()) return run_render(render_args);
        if (fresnel_cmd->parsed()) return run_fresnel_curve(fresnel_args);
        if (stokes_cmd->parsed()) return run_stokes(stokes_args);
        if (invert_cmd->parsed()) return run_invert(invert_args);
        if (landscape_cmd->parsed()) return run_landscape(landscape_args);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
