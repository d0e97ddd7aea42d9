// Copyright (c) 2026 The polaris authors.
// SPDX-License-Identifier: Apache-2.0
//
// Shared per-sample shading math for the scalar and SIMD kernels. Both
// instantiate sample_contribution() from this header, so every lane runs
// the identical IEEE op sequence and the variants stay bit-for-bit equal.
// Requires unpolarized incident radiance: the Mueller sandwich of each
// pBRDF term then collapses to its first column, rotated into the camera
// frame with double-angle identities (no trig calls).

#pragma once

#include <cmath>
#include <numbers>

#include "polaris/kernels/shade_kernel.hpp"

namespace polaris::kernels::detail {

constexpr double kDielIorKernel = 1.5;
constexpr double kInvDielIor2 = 1.0 / (kDielIorKernel * kDielIorKernel);

/// Point/material scalars derived once per kernel call, in plain double so
/// both variants receive identical values.
struct Prologue {
    double a2_over_pi;
    double a2_minus_1;
    double one_minus_a2;
    double spec_pre;  // ks * G1(wo) / (4 cos_theta_o)
    double tm_c2;     // T-(theta_o) * cos(2 phi_dif)
    double tm_s2;     // T-(theta_o) * sin(2 phi_dif)
};

inline Prologue make_prologue(const ShadePoint& p, const ShadeCoeffs& c) {
    Prologue pre;
    pre.a2_over_pi = c.alpha2 / std::numbers::pi;
    pre.a2_minus_1 = c.alpha2 - 1.0;
    pre.one_minus_a2 = 1.0 - c.alpha2;
    pre.spec_pre = c.ks * c.g1_o * p.spec_norm;
    pre.tm_c2 = p.t_minus_o * p.rot_dif_cos2;
    pre.tm_s2 = p.t_minus_o * p.rot_dif_sin2;
    return pre;
}

/// Contribution of one sample stripe (Ops::Batch wide). out[c][k] is the
/// Stokes component k of channel c, already expressed in the camera frame.
template <class Ops>
inline void sample_contribution(const ShadePoint& P, const ShadeCoeffs& C, const Prologue& R,
                                const ShadeSamples& S, size_t i,
                                typename Ops::Batch (&out)[3][3]) {
    using B = typename Ops::Batch;
    using M = typename Ops::Mask;

    const B wix = Ops::load(S.wi_x + i);
    const B wiy = Ops::load(S.wi_y + i);
    const B wiz = Ops::load(S.wi_z + i);

    const B ci = wix * P.n.x + wiy * P.n.y + wiz * P.n.z;
    const M valid = Ops::gt(ci, Ops::broadcast(0.0));

    // Half-vector; |wi + wo| > 0 whenever both directions are front-facing.
    B hx = wix + P.wo.x;
    B hy = wiy + P.wo.y;
    B hz = wiz + P.wo.z;
    const B hinv = Ops::broadcast(1.0) / Ops::sqrt_(hx * hx + hy * hy + hz * hz);
    hx = hx * hinv;
    hy = hy * hinv;
    hz = hz * hinv;
    const B ch = hx * P.n.x + hy * P.n.y + hz * P.n.z;
    const B cd = wix * hx + wiy * hy + wiz * hz;

    // GGX D and incident-side Smith G1.
    const B tt = ch * ch * Ops::broadcast(R.a2_minus_1) + Ops::broadcast(1.0);
    const B dist = Ops::broadcast(R.a2_over_pi) / (tt * tt);
    const B g1i =
        (Ops::broadcast(2.0) * ci) /
        (ci + Ops::sqrt_(Ops::broadcast(C.alpha2) + Ops::broadcast(R.one_minus_a2) * (ci * ci)));
    const B spec_c = Ops::broadcast(R.spec_pre) * dist * g1i;

    // Dielectric Fresnel transmission T+ at theta_i (diffuse entry face).
    const B si2 = Ops::broadcast(1.0) - ci * ci;
    const B ctd = Ops::sqrt_(Ops::broadcast(1.0) - si2 * Ops::broadcast(kInvDielIor2));
    const B nctd = Ops::broadcast(kDielIorKernel) * ctd;
    const B rs_d = (ci - nctd) / (ci + nctd);
    const B nci = Ops::broadcast(kDielIorKernel) * ci;
    const B rp_d = (nci - ctd) / (nci + ctd);
    const B tpi =
        Ops::broadcast(1.0) - Ops::broadcast(0.5) * (rs_d * rs_d + rp_d * rp_d);
    const B dif_c = Ops::broadcast(C.m_gate) * ci * tpi;

    // Rotation from the specular exit frame (perpendicular to the wi/wo
    // plane) into the camera frame, via double-angle identities. Degenerate
    // retro-reflection falls back to the camera axis itself; R- vanishes
    // there so the choice is unobservable.
    const B cxx = wiy * P.wo.z - wiz * P.wo.y;
    const B cxy = wiz * P.wo.x - wix * P.wo.z;
    const B cxz = wix * P.wo.y - wiy * P.wo.x;
    const B cl2 = cxx * cxx + cxy * cxy + cxz * cxz;
    const M degen = Ops::lt(cl2, Ops::broadcast(1e-24));
    const B cinv = Ops::broadcast(1.0) / Ops::sqrt_(Ops::max_(cl2, Ops::broadcast(1e-300)));
    const B xsx = Ops::select(degen, Ops::broadcast(P.x_cam.x), cxx * cinv);
    const B xsy = Ops::select(degen, Ops::broadcast(P.x_cam.y), cxy * cinv);
    const B xsz = Ops::select(degen, Ops::broadcast(P.x_cam.z), cxz * cinv);
    const B cph = xsx * Ops::broadcast(P.x_cam.x) + xsy * Ops::broadcast(P.x_cam.y) +
                  xsz * Ops::broadcast(P.x_cam.z);
    const B sph = (xsy * Ops::broadcast(P.x_cam.z) - xsz * Ops::broadcast(P.x_cam.y)) * P.wo.x +
                  (xsz * Ops::broadcast(P.x_cam.x) - xsx * Ops::broadcast(P.x_cam.z)) * P.wo.y +
                  (xsx * Ops::broadcast(P.x_cam.y) - xsy * Ops::broadcast(P.x_cam.x)) * P.wo.z;
    const B c2s = cph * cph - sph * sph;
    const B s2s = (Ops::broadcast(2.0) * cph) * sph;

    const B sd2 = Ops::broadcast(1.0) - cd * cd;

    for (int c = 0; c < 3; ++c) {
        // Complex Fresnel reflection at theta_d: w = 1 - sin^2(theta_d)/n^2,
        // cos(theta_t) as the principal square root of w computed
        // algebraically, then r_s, r_p by complex division.
        const B wre = Ops::broadcast(1.0) - sd2 * Ops::broadcast(C.inv_n2_re[c]);
        const B wim = -(sd2 * Ops::broadcast(C.inv_n2_im[c]));
        const B rmod = Ops::sqrt_(wre * wre + wim * wim);
        const B half = Ops::broadcast(0.5);
        const B zero = Ops::broadcast(0.0);
        const B ctre = Ops::sqrt_(Ops::max_(half * (rmod + wre), zero));
        const B ctim_abs = Ops::sqrt_(Ops::max_(half * (rmod - wre), zero));
        const B ctim = Ops::select(Ops::geq(wim, zero), ctim_abs, -ctim_abs);

        const B e = Ops::broadcast(C.eta[c]);
        const B k = Ops::broadcast(C.kappa[c]);
        const B nctre = e * ctre - k * ctim;
        const B nctim = e * ctim + k * ctre;

        const B are = cd - nctre;
        const B aim = -nctim;
        const B bre = cd + nctre;
        const B bim = nctim;
        const B bden = bre * bre + bim * bim;
        const B rsre = (are * bre + aim * bim) / bden;
        const B rsim = (aim * bre - are * bim) / bden;

        const B pre_ = e * cd - ctre;
        const B pim_ = k * cd - ctim;
        const B qre = e * cd + ctre;
        const B qim = k * cd + ctim;
        const B qden = qre * qre + qim * qim;
        const B rpre = (pre_ * qre + pim_ * qim) / qden;
        const B rpim = (pim_ * qre - pre_ * qim) / qden;

        const B refl_s = rsre * rsre + rsim * rsim;
        const B refl_p = rpre * rpre + rpim * rpim;
        const B r_plus = half * (refl_s + refl_p);
        const B r_minus = half * (refl_s - refl_p);

        const B dterm = dif_c * Ops::broadcast(C.albedo_over_pi[c]);
        const B rad = Ops::load(S.radiance[c] + i);
        const B o0 = rad * (dterm * Ops::broadcast(P.t_plus_o) + spec_c * r_plus);
        const B o1 = rad * (dterm * Ops::broadcast(R.tm_c2) + spec_c * (r_minus * c2s));
        const B o2 = -(rad * (dterm * Ops::broadcast(R.tm_s2) + spec_c * (r_minus * s2s)));

        out[c][0] = Ops::select(valid, o0, zero);
        out[c][1] = Ops::select(valid, o1, zero);
        out[c][2] = Ops::select(valid, o2, zero);
    }
}

}  // namespace polaris::kernels::detail
