// Copyright (c) 2026 The polaris authors.
// SPDX-License-Identifier: Apache-2.0

#include "polaris/inverse.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "polaris/parallel.hpp"

namespace polaris::inverse {

namespace {

using Var = PackedLayout::Entry::Var;

std::string material_label(const MaterialParams& mat, int index) {
    return mat.name.empty() ? "mat" + std::to_string(index) : mat.name;
}

constexpr const char* kChannelSuffix[3] = {".r", ".g", ".b"};

double logit(double p) { return std::log(p / (1.0 - p)); }
double sigmoid(double x) { return 1.0 / (1.0 + std::exp(-x)); }

}  // namespace

FreeParams FreeParams::parse(const std::string& list, size_t material_count) {
    MaterialSelection sel;
    std::stringstream ss(list);
    std::string item;
    while (std::getline(ss, item, ',')) {
        item.erase(std::remove_if(item.begin(), item.end(), ::isspace), item.end());
        if (item.empty()) continue;
        if (item == "roughness")
            sel.roughness = true;
        else if (item == "ks")
            sel.ks = true;
        else if (item == "eta")
            sel.eta = true;
        else if (item == "k")
            sel.k = true;
        else if (item == "albedo")
            sel.albedo = true;
        else
            throw std::invalid_argument("unknown free parameter '" + item +
                                        "' (expected roughness, ks, eta, k or albedo)");
    }
    FreeParams free;
    free.per_material.assign(material_count, sel);
    return free;
}

PackedLayout PackedLayout::make(const std::vector<MaterialParams>& materials,
                                const FreeParams& free) {
    if (free.per_material.size() != materials.size())
        throw std::invalid_argument("free-parameter selection does not match material count");

    PackedLayout layout;
    for (size_t m = 0; m < materials.size(); ++m) {
        const MaterialSelection& sel = free.per_material[m];
        const MaterialParams& mat = materials[m];
        const std::string label = material_label(mat, static_cast<int>(m));
        const int mi = static_cast<int>(m);

        if ((sel.eta || sel.k) && mat.m == 1)
            throw std::invalid_argument(label + ": dielectric IOR is fixed, eta/k cannot be free");
        if (sel.albedo && mat.m == 0)
            throw std::invalid_argument(label + ": albedo has no effect on conductors (m=0)");

        if (sel.roughness) layout.entries.push_back({mi, Var::Roughness, -1, label + ".roughness"});
        if (sel.ks) layout.entries.push_back({mi, Var::Ks, -1, label + ".ks"});
        for (int c = 0; c < 3; ++c)
            if (sel.albedo) layout.entries.push_back({mi, Var::Albedo, c, label + ".albedo" + kChannelSuffix[c]});
        for (int c = 0; c < 3; ++c)
            if (sel.eta) layout.entries.push_back({mi, Var::Eta, c, label + ".eta" + kChannelSuffix[c]});
        for (int c = 0; c < 3; ++c)
            if (sel.k) layout.entries.push_back({mi, Var::K, c, label + ".k" + kChannelSuffix[c]});
    }
    if (layout.entries.empty()) throw std::invalid_argument("no free parameters selected");
    return layout;
}

std::vector<double> pack(const std::vector<MaterialParams>& materials, const PackedLayout& layout) {
    std::vector<double> x(layout.size());
    for (size_t i = 0; i < layout.entries.size(); ++i) {
        const auto& e = layout.entries[i];
        const MaterialParams& mat = materials[e.material];
        switch (e.var) {
            case Var::Roughness: x[i] = std::log(mat.roughness); break;
            case Var::Ks: x[i] = std::log(mat.ks); break;
            case Var::Eta: x[i] = std::log(mat.ior.eta[e.channel]); break;
            case Var::K: x[i] = std::log(mat.ior.k[e.channel]); break;
            case Var::Albedo: x[i] = logit(mat.albedo[e.channel]); break;
        }
    }
    return x;
}

void unpack(const std::vector<double>& x, const PackedLayout& layout,
            std::vector<MaterialParams>& materials) {
    if (x.size() != layout.size()) throw std::invalid_argument("unpack: size mismatch");
    for (size_t i = 0; i < layout.entries.size(); ++i) {
        const auto& e = layout.entries[i];
        MaterialParams& mat = materials[e.material];
        switch (e.var) {
            case Var::Roughness:
                mat.roughness = std::clamp(std::exp(x[i]), kMinRoughness, 1.0);
                break;
            case Var::Ks: mat.ks = std::exp(x[i]); break;
            case Var::Eta: mat.ior.eta[e.channel] = std::exp(x[i]); break;
            case Var::K: mat.ior.k[e.channel] = std::exp(x[i]); break;
            case Var::Albedo: mat.albedo[e.channel] = sigmoid(x[i]); break;
        }
    }
}

// ---------------------------------------------------------------------------
// LossEvaluator

LossEvaluator::LossEvaluator(const Scene& scene, const Observations& obs, int threads)
    : lambda_s_(obs.lambda_s), lambda_dolp_(obs.lambda_dolp), mask_dolp_(obs.mask_dolp),
      threads_(threads) {
    if (obs.views.empty()) throw std::invalid_argument("loss: no observation views");

    for (const ObservationView& view : obs.views) {
        const int w = view.camera.width, h = view.camera.height;
        if (view.stokes.width != w || view.stokes.height != h)
            throw std::invalid_argument("loss: observation image does not match camera size");
        if (view.mask.size() != static_cast<size_t>(w) * h)
            throw std::invalid_argument("loss: mask size does not match camera size");

        const CameraBasis basis = make_camera_basis(view.camera);
        for (int y = 0; y < h; ++y) {
            for (int x = 0; x < w; ++x) {
                const size_t p = static_cast<size_t>(y) * w + x;
                const bool masked = view.mask[p] != 0;
                if (!masked && mask_dolp_) continue;  // pixel participates in no term

                PixelRecord rec;
                rec.in_mask = masked;
                for (int c = 0; c < 3; ++c) {
                    rec.gt[c] = view.stokes.at(x, y, c);
                    rec.gt_dolp[c] = dolp(rec.gt[c]);
                }

                const Vec3 dir = camera_ray_direction(basis, x + 0.5, y + 0.5);
                const auto hit = sphere_trace(scene, basis.origin, dir);
                if (hit) {
                    const Vec3 wo = -dir;
                    const Frame cam_frame = camera_frame_for(basis, dir);
                    rec.has_task = build_pixel_task(scene, *hit, wo, cam_frame, rec.task);
                }
                if (!rec.has_task && !hit) {
                    const Rgb bg = scene.env.radiance(dir);
                    for (int c = 0; c < 3; ++c) rec.constant[c] = {bg[c], 0.0, 0.0};
                }
                if (masked) ++masked_count_;
                records_.push_back(std::move(rec));
            }
        }
    }
    if (masked_count_ == 0) throw std::invalid_argument("loss: empty object mask");
}

double LossEvaluator::accumulate(
    const std::vector<MaterialParams>& materials,
    const std::function<void(const PixelRecord&, const StokesRgb&, double*)>& term, int n_terms,
    double* sums) const {
    constexpr size_t kChunk = 128;
    const size_t n = records_.size();
    const size_t n_chunks = (n + kChunk - 1) / kChunk;
    // Per-chunk partials reduced in index order: results do not depend on
    // how chunks were scheduled across threads.
    std::vector<double> partial(n_chunks * n_terms, 0.0);

    parallel_for_chunks(n, kChunk, threads_, [&](size_t begin, size_t end) {
        double local[8] = {0, 0, 0, 0, 0, 0, 0, 0};
        for (size_t i = begin; i < end; ++i) {
            const PixelRecord& rec = records_[i];
            const StokesRgb s =
                rec.has_task ? shade_task(rec.task, materials[rec.task.material_id]) : rec.constant;
            term(rec, s, local);
        }
        const size_t chunk_index = begin / kChunk;
        for (int t = 0; t < n_terms; ++t) partial[chunk_index * n_terms + t] = local[t];
    });

    for (int t = 0; t < n_terms; ++t) sums[t] = 0.0;
    for (size_t ci = 0; ci < n_chunks; ++ci)
        for (int t = 0; t < n_terms; ++t) sums[t] += partial[ci * n_terms + t];
    return 0.0;
}

double LossEvaluator::joint(const std::vector<MaterialParams>& materials) const {
    size_t dolp_count = 0;
    for (const PixelRecord& rec : records_)
        if (rec.in_mask || !mask_dolp_) ++dolp_count;

    double sums[2];
    accumulate(
        materials,
        [this](const PixelRecord& rec, const StokesRgb& s, double* local) {
            if (rec.in_mask) {
                for (int c = 0; c < 3; ++c) {
                    local[0] += std::abs(s[c].s0 - rec.gt[c].s0) + std::abs(s[c].s1 - rec.gt[c].s1) +
                                std::abs(s[c].s2 - rec.gt[c].s2);
                }
            }
            if (rec.in_mask || !mask_dolp_) {
                for (int c = 0; c < 3; ++c) local[1] += std::abs(dolp(s[c]) - rec.gt_dolp[c]);
            }
        },
        2, sums);

    const double stokes_term = sums[0] / (static_cast<double>(masked_count_) * 9.0);
    const double dolp_term = sums[1] / (static_cast<double>(dolp_count) * 3.0);
    return lambda_s_ * stokes_term + lambda_dolp_ * dolp_term;
}

double LossEvaluator::single(LossKind kind, const std::vector<MaterialParams>& materials) const {
    double sums[1];
    accumulate(
        materials,
        [kind](const PixelRecord& rec, const StokesRgb& s, double* local) {
            if (!rec.in_mask) return;
            for (int c = 0; c < 3; ++c) {
                switch (kind) {
                    case LossKind::StokesL1:
                        local[0] += std::abs(s[c].s0 - rec.gt[c].s0) +
                                    std::abs(s[c].s1 - rec.gt[c].s1) +
                                    std::abs(s[c].s2 - rec.gt[c].s2);
                        break;
                    case LossKind::IntensityL1:
                        local[0] += std::abs(s[c].s0 - rec.gt[c].s0);
                        break;
                    case LossKind::DolpL1:
                        local[0] += std::abs(dolp(s[c]) - rec.gt_dolp[c]);
                        break;
                }
            }
        },
        1, sums);

    const double denom = static_cast<double>(masked_count_) *
                         (kind == LossKind::StokesL1 ? 9.0 : 3.0);
    return sums[0] / denom;
}

double joint_loss(const Scene& scene, const Observations& obs, int threads) {
    return LossEvaluator(scene, obs, threads).joint(scene.materials);
}

// ---------------------------------------------------------------------------
// Optimization

std::vector<double> grad_fd(const std::function<double(const std::vector<double>&)>& fn,
                            const std::vector<double>& x, double h,
                            const std::vector<std::string>* names) {
    if (h <= 0.0) throw std::invalid_argument("grad_fd: step must be positive");
    std::vector<double> g(x.size());
    std::vector<double> probe = x;
    for (size_t i = 0; i < x.size(); ++i) {
        probe[i] = x[i] + h;
        const double fp = fn(probe);
        probe[i] = x[i] - h;
        const double fm = fn(probe);
        probe[i] = x[i];
        if (!std::isfinite(fp) || !std::isfinite(fm)) {
            const std::string name =
                names && i < names->size() ? (*names)[i] : "param " + std::to_string(i);
            throw std::runtime_error("grad_fd: non-finite loss probing coordinate " + name);
        }
        g[i] = (fp - fm) / (2.0 * h);
    }
    return g;
}

AdamResult adam_optimize(const std::function<double(const std::vector<double>&)>& fn,
                         const std::vector<double>& init, const AdamConfig& config) {
    if (config.iters < 1) throw std::invalid_argument("adam_optimize: iters must be >= 1");

    AdamResult result;
    std::vector<double> x = init;
    std::vector<double> m(x.size(), 0.0), v(x.size(), 0.0);

    double loss = fn(x);
    result.trace.emplace_back(0, loss);
    result.best = x;
    result.best_loss = loss;
    if (!std::isfinite(loss)) {
        result.diverged = true;
        return result;
    }

    for (int t = 1; t <= config.iters; ++t) {
        const std::vector<double> g = grad_fd(fn, x, config.fd_step);
        const double bc1 = 1.0 - std::pow(config.beta1, t);
        const double bc2 = 1.0 - std::pow(config.beta2, t);
        double lr = config.lr;
        if (config.cosine_decay) {
            const double lr_min = config.lr / 20.0;
            lr = lr_min + (config.lr - lr_min) *
                              0.5 * (1.0 + std::cos(std::numbers::pi * (t - 1) / config.iters));
        }
        for (size_t i = 0; i < x.size(); ++i) {
            m[i] = config.beta1 * m[i] + (1.0 - config.beta1) * g[i];
            v[i] = config.beta2 * v[i] + (1.0 - config.beta2) * g[i] * g[i];
            x[i] -= lr * (m[i] / bc1) / (std::sqrt(v[i] / bc2) + config.eps);
        }
        loss = fn(x);
        result.trace.emplace_back(t, loss);
        if (!std::isfinite(loss)) {
            result.diverged = true;
            return result;
        }
        if (loss < result.best_loss) {
            result.best_loss = loss;
            result.best = x;
        }
    }
    return result;
}

// ---------------------------------------------------------------------------
// Recovery and landscape drivers

RecoveryResult recover_materials(const Scene& gt_scene, const Observations& obs,
                                 const FreeParams& free, const RecoveryConfig& config) {
    const PackedLayout layout = PackedLayout::make(gt_scene.materials, free);

    std::vector<MaterialParams> init_materials = gt_scene.materials;
    for (size_t m = 0; m < init_materials.size(); ++m) {
        const MaterialSelection& sel = free.per_material[m];
        MaterialParams& mat = init_materials[m];
        if (sel.roughness) mat.roughness = kInitRoughness;
        if (sel.ks) mat.ks = kInitKs;
        if (sel.albedo) mat.albedo = Rgb{kInitAlbedo};
        if (sel.eta) mat.ior.eta = Rgb{kInitEta};
        if (sel.k) mat.ior.k = Rgb{kInitK};
    }

    Observations tuned = obs;
    tuned.lambda_s = config.lambda_s;
    tuned.lambda_dolp = config.lambda_dolp;
    tuned.mask_dolp = config.mask_dolp;
    const LossEvaluator evaluator(gt_scene, tuned, config.threads);

    std::vector<MaterialParams> work = init_materials;
    const auto fn = [&](const std::vector<double>& x) {
        unpack(x, layout, work);
        return evaluator.joint(work);
    };

    const AdamResult opt = adam_optimize(fn, pack(init_materials, layout), config.adam);

    RecoveryResult result;
    result.materials = init_materials;
    unpack(opt.best, layout, result.materials);
    result.trace = opt.trace;
    result.best_loss = opt.best_loss;
    result.diverged = opt.diverged;

    const std::vector<double> gt_packed = pack(gt_scene.materials, layout);
    for (size_t i = 0; i < layout.entries.size(); ++i) {
        const auto& e = layout.entries[i];
        auto value_of = [&](const std::vector<MaterialParams>& mats) {
            const MaterialParams& mat = mats[e.material];
            switch (e.var) {
                case Var::Roughness: return mat.roughness;
                case Var::Ks: return mat.ks;
                case Var::Eta: return mat.ior.eta[e.channel];
                case Var::K: return mat.ior.k[e.channel];
                case Var::Albedo: return mat.albedo[e.channel];
            }
            return 0.0;
        };
        RecoveryRow row;
        row.param = e.name;
        row.gt = value_of(gt_scene.materials);
        row.recovered = value_of(result.materials);
        row.abs_error = std::abs(row.recovered - row.gt);
        result.report.push_back(row);
    }
    return result;
}

std::vector<LandscapeRow> landscape_scan(const Scene& scene_template, const Observations& obs,
                                         GeomParam param, double lo, double hi, int steps,
                                         LossKind kind, int threads) {
    if (steps < 3) throw std::invalid_argument("landscape_scan: need at least 3 grid steps");
    if (!(lo < hi)) throw std::invalid_argument("landscape_scan: grid bounds must satisfy lo < hi");

    // The scan varies the first sphere primitive.
    int sphere_index = -1;
    for (size_t i = 0; i < scene_template.primitives.size(); ++i) {
        if (std::holds_alternative<SpherePrim>(scene_template.primitives[i].shape)) {
            sphere_index = static_cast<int>(i);
            break;
        }
    }
    if (sphere_index < 0) throw std::invalid_argument("landscape_scan: scene has no sphere");

    std::vector<LandscapeRow> rows;
    rows.reserve(steps);
    for (int i = 0; i < steps; ++i) {
        const double value = lo + (hi - lo) * i / (steps - 1);
        Scene scene = scene_template;
        SpherePrim& sphere = std::get<SpherePrim>(scene.primitives[sphere_index].shape);
        switch (param) {
            case GeomParam::SphereRadius:
                if (value <= 0.0) throw std::invalid_argument("landscape_scan: radius must be > 0");
                sphere.radius = value;
                break;
            case GeomParam::SphereCenterX: sphere.center.x = value; break;
            case GeomParam::SphereCenterY: sphere.center.y = value; break;
            case GeomParam::SphereCenterZ: sphere.center.z = value; break;
        }
        const LossEvaluator evaluator(scene, obs, threads);
        rows.push_back({value, evaluator.single(kind, scene.materials)});
    }
    return rows;
}

}  // namespace polaris::inverse
