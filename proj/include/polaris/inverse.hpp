// Copyright (c) 2026 The polaris authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "polaris/renderer.hpp"
#include "polaris/scene.hpp"

namespace polaris::inverse {

// ---------------------------------------------------------------------------
// Free-parameter selection and packing

/// Which variables of one material are optimized. The conductor/dielectric
/// indicator m is never free; it comes from the user-provided mask.
struct MaterialSelection {
    bool roughness = false;
    bool ks = false;
    bool eta = false;     // all three channels
    bool k = false;       // all three channels
    bool albedo = false;  // all three channels
};

struct FreeParams {
    std::vector<MaterialSelection> per_material;

    /// Applies a comma-separated list ("roughness,eta,k,ks,albedo") to
    /// every material in the scene.
    static FreeParams parse(const std::string& list, size_t material_count);
};

/// Flat layout of the packed vector. Positivity-constrained variables
/// (roughness, ks, eta, k) live in log space, albedo in logit space.
struct PackedLayout {
    struct Entry {
        int material = 0;
        enum class Var { Roughness, Ks, Eta, K, Albedo } var = Var::Roughness;
        int channel = -1;  // -1 for scalars
        std::string name;
    };
    std::vector<Entry> entries;

    size_t size() const { return entries.size(); }

    /// Validates the selection against the materials (dielectrics keep
    /// their fixed IOR, conductors have no diffuse albedo) and records the
    /// coordinate order.
    static PackedLayout make(const std::vector<MaterialParams>& materials, const FreeParams& free);
};

std::vector<double> pack(const std::vector<MaterialParams>& materials, const PackedLayout& layout);
void unpack(const std::vector<double>& x, const PackedLayout& layout,
            std::vector<MaterialParams>& materials);

// ---------------------------------------------------------------------------
// Observations and losses

struct ObservationView {
    Camera camera;
    PolarizedImage stokes;
    std::vector<std::uint8_t> mask;  // object mask, 1 byte per pixel
};

struct Observations {
    std::vector<ObservationView> views;
    double lambda_s = 1.0;
    double lambda_dolp = 0.1;
    bool mask_dolp = true;  // when false the DoLP term averages over the full frame
};

enum class LossKind { StokesL1, IntensityL1, DolpL1 };

/// Caches the material-independent shading context of every loss pixel so
/// repeated evaluations only replay the shading kernels.
class LossEvaluator {
  public:
    LossEvaluator(const Scene& scene, const Observations& obs, int threads = 0);

    /// lambda_s * L1(stokes) + lambda_dolp * L1(dolp), averaged over masked
    /// pixels, channels and views. Throws if every mask is empty.
    double joint(const std::vector<MaterialParams>& materials) const;

    /// Unweighted single-kind L1 (landscape scans).
    double single(LossKind kind, const std::vector<MaterialParams>& materials) const;

  private:
    struct PixelRecord {
        PixelTask task;
        bool has_task = false;      // false: miss or grazing, stokes is constant
        StokesRgb constant{};       // background value for task-less pixels
        StokesRgb gt{};
        double gt_dolp[3] = {0, 0, 0};
        bool in_mask = true;
    };

    double accumulate(const std::vector<MaterialParams>& materials,
                      const std::function<void(const PixelRecord&, const StokesRgb&, double*)>& term,
                      int n_terms, double* sums) const;

    std::vector<PixelRecord> records_;
    size_t masked_count_ = 0;
    double lambda_s_, lambda_dolp_;
    bool mask_dolp_;
    int threads_;
};

/// One-shot Eq.-style joint loss for a scene against observations.
double joint_loss(const Scene& scene, const Observations& obs, int threads = 0);

// ---------------------------------------------------------------------------
// Optimization

/// Central finite differences, 2*dim evaluations. Throws (naming the
/// coordinate) if a probe produces a non-finite loss.
std::vector<double> grad_fd(const std::function<double(const std::vector<double>&)>& fn,
                            const std::vector<double>& x, double h,
                            const std::vector<std::string>* names = nullptr);

struct AdamConfig {
    double lr = 0.05;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double eps = 1e-8;
    int iters = 300;
    double fd_step = 1e-4;
    // Cosine decay of the step size down to lr/20 across the run. Constant
    // steps keep bouncing across the valley floor of the L1 objective;
    // decaying lets the iterates settle. Set false for a fixed step.
    bool cosine_decay = true;
};

struct AdamResult {
    std::vector<double> best;
    double best_loss = 0.0;
    std::vector<std::pair<int, double>> trace;  // (iter, loss); iter 0 = init
    bool diverged = false;
};

/// Standard Adam with bias correction over finite-difference gradients.
/// Returns the best iterate seen (including the initial point). A
/// non-finite loss aborts and returns the trace gathered so far.
AdamResult adam_optimize(const std::function<double(const std::vector<double>&)>& fn,
                         const std::vector<double>& init, const AdamConfig& config);

// ---------------------------------------------------------------------------
// Recovery and landscape drivers

struct RecoveryConfig {
    AdamConfig adam;
    double lambda_s = 1.0;
    double lambda_dolp = 0.1;
    bool mask_dolp = true;
    int threads = 0;
};

struct RecoveryRow {
    std::string param;
    double gt = 0.0;
    double recovered = 0.0;
    double abs_error = 0.0;
};

struct RecoveryResult {
    std::vector<MaterialParams> materials;
    std::vector<RecoveryRow> report;
    std::vector<std::pair<int, double>> trace;
    double best_loss = 0.0;
    bool diverged = false;
};

/// Neutral starting values for every free variable.
inline constexpr double kInitRoughness = 0.3;
inline constexpr double kInitAlbedo = 0.5;
inline constexpr double kInitKs = 0.5;
inline constexpr double kInitEta = 1.0;
inline constexpr double kInitK = 1.0;

/// Optimizes the free material parameters of `gt_scene` (whose geometry
/// must match the observations) starting from the neutral initialization.
/// The report compares against the scene's own material values.
RecoveryResult recover_materials(const Scene& gt_scene, const Observations& obs,
                                 const FreeParams& free, const RecoveryConfig& config);

enum class GeomParam { SphereRadius, SphereCenterX, SphereCenterY, SphereCenterZ };

struct LandscapeRow {
    double value = 0.0;
    double loss = 0.0;
};

/// Renders the scene with the first sphere primitive's parameter swept
/// over a uniform grid and evaluates the chosen loss against obs.
std::vector<LandscapeRow> landscape_scan(const Scene& scene_template, const Observations& obs,
                                         GeomParam param, double lo, double hi, int steps,
                                         LossKind kind, int threads = 0);

}  // namespace polaris::inverse
