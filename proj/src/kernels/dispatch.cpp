// Copyright (c) 2026 The polaris authors.
// SPDX-License-Identifier: Apache-2.0

#include <cstdlib>
#include <stdexcept>
#include <string>

#include "polaris/kernels/shade_kernel.hpp"

namespace polaris::kernels {

namespace {

bool simd_supported() {
#if !defined(POLARIS_HAVE_SIMD_KERNEL)
    return false;
#elif defined(POLARIS_SIMD_NEEDS_AVX2)
    return __builtin_cpu_supports("avx2");
#else
    return true;
#endif
}

struct Selection {
    ShadeKernelFn fn;
    const char* name;
};

Selection resolve() {
    const char* env = std::getenv("POLARIS_KERNEL");
    const std::string pref = env ? env : "auto";

    if (pref == "scalar") return {shade_batch_scalar, "scalar"};
    if (pref == "simd") {
        if (!simd_supported())
            throw std::runtime_error("POLARIS_KERNEL=simd requested but no SIMD kernel is usable");
#if defined(POLARIS_HAVE_SIMD_KERNEL)
        return {shade_batch_simd, "simd"};
#endif
    }
    if (pref != "auto")
        throw std::runtime_error("POLARIS_KERNEL must be auto, scalar or simd (got '" + pref + "')");

#if defined(POLARIS_HAVE_SIMD_KERNEL)
    if (simd_supported()) return {shade_batch_simd, "simd"};
#endif
    return {shade_batch_scalar, "scalar"};
}

const Selection& cached() {
    static const Selection sel = resolve();
    return sel;
}

}  // namespace

ShadeKernelFn shade_kernel() { return cached().fn; }

std::string shade_kernel_name() { return cached().name; }

}  // namespace polaris::kernels
