// Copyright (c) 2026 The polaris authors.
// SPDX-License-Identifier: Apache-2.0

#include <cmath>

#include "shade_batch_impl.hpp"

namespace polaris::kernels {

namespace {

struct ScalarOps {
    using Batch = double;
    using Mask = bool;
    static double load(const double* p) { return *p; }
    static double broadcast(double v) { return v; }
    static double sqrt_(double v) { return std::sqrt(v); }
    static double max_(double a, double b) { return a > b ? a : b; }
    static bool gt(double a, double b) { return a > b; }
    static bool lt(double a, double b) { return a < b; }
    static bool geq(double a, double b) { return a >= b; }
    static double select(bool m, double a, double b) { return m ? a : b; }
};

}  // namespace

void shade_batch_scalar(const ShadePoint& point, const ShadeCoeffs& coeffs,
                        const ShadeSamples& samples, StokesRgb& out) {
    const detail::Prologue pre = detail::make_prologue(point, coeffs);

    // Stripe accumulators mirror the SIMD lanes: sample i lands in stripe
    // i % kLanes and the final reduction groups stripes pairwise.
    double acc[3][3][kLanes] = {};
    for (size_t i = 0; i < samples.count; ++i) {
        double contrib[3][3];
        detail::sample_contribution<ScalarOps>(point, coeffs, pre, samples, i, contrib);
        const size_t lane = i % kLanes;
        for (int c = 0; c < 3; ++c)
            for (int k = 0; k < 3; ++k) acc[c][k][lane] += contrib[c][k];
    }

    for (int c = 0; c < 3; ++c) {
        double v[3];
        for (int k = 0; k < 3; ++k) v[k] = (acc[c][k][0] + acc[c][k][1]) + (acc[c][k][2] + acc[c][k][3]);
        out[c] = StokesVector{v[0], v[1], v[2]};
    }
}

}  // namespace polaris::kernels
