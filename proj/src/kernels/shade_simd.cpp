// Copyright (c) 2026 The polaris authors.
// SPDX-License-Identifier: Apache-2.0

#include <experimental/simd>
#include <type_traits>

#include "shade_batch_impl.hpp"

namespace polaris::kernels {

namespace {

namespace stdx = std::experimental;

// Four lanes to match the stripe contract; native where it already is.
using NativeBatch = stdx::native_simd<double>;
using Batch4 = std::conditional_t<NativeBatch::size() == kLanes, NativeBatch,
                                  stdx::fixed_size_simd<double, kLanes>>;

struct SimdOps {
    using Batch = Batch4;
    using Mask = Batch4::mask_type;
    static Batch load(const double* p) {
        Batch v;
        v.copy_from(p, stdx::element_aligned);
        return v;
    }
    static Batch broadcast(double v) { return Batch(v); }
    static Batch sqrt_(const Batch& v) { return stdx::sqrt(v); }
    static Batch max_(const Batch& a, const Batch& b) { return stdx::max(a, b); }
    static Mask gt(const Batch& a, const Batch& b) { return a > b; }
    static Mask lt(const Batch& a, const Batch& b) { return a < b; }
    static Mask geq(const Batch& a, const Batch& b) { return a >= b; }
    static Batch select(const Mask& m, const Batch& a, const Batch& b) {
        Batch r = b;
        stdx::where(m, r) = a;
        return r;
    }
};

}  // namespace

void shade_batch_simd(const ShadePoint& point, const ShadeCoeffs& coeffs,
                      const ShadeSamples& samples, StokesRgb& out) {
    const detail::Prologue pre = detail::make_prologue(point, coeffs);

    Batch4 acc[3][3] = {};
    for (size_t i = 0; i < samples.count; i += kLanes) {
        Batch4 contrib[3][3];
        detail::sample_contribution<SimdOps>(point, coeffs, pre, samples, i, contrib);
        for (int c = 0; c < 3; ++c)
            for (int k = 0; k < 3; ++k) acc[c][k] += contrib[c][k];
    }

    for (int c = 0; c < 3; ++c) {
        double v[3];
        for (int k = 0; k < 3; ++k) v[k] = (acc[c][k][0] + acc[c][k][1]) + (acc[c][k][2] + acc[c][k][3]);
        out[c] = StokesVector{v[0], v[1], v[2]};
    }
}

}  // namespace polaris::kernels
