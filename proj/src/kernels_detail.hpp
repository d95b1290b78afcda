/* SPDX-FileCopyrightText: 2026 The wdip authors
 * SPDX-License-Identifier: Apache-2.0 */
#pragma once

// Loop bodies shared by the serial and OpenMP kernel implementations. Each
// body owns a collision-free slice of the output (a row, a plane, a weight
// block), so the parallel build can split the outer loop across threads
// without changing any accumulation order.

#include <algorithm>
#include <cmath>
#include <cstddef>

#include "wdip/kernels.hpp"

namespace wdip::kernels::detail {

// Reflect-101 border (no edge duplication); -1 marks a zero-padded tap.
inline int pad_index(int i, int n, Pad pad) {
    if (static_cast<unsigned>(i) < static_cast<unsigned>(n)) return i;
    if (pad == Pad::Zero) return -1;
    if (n == 1) return 0;
    const int period = 2 * n - 2;
    i %= period;
    if (i < 0) i += period;
    return i < n ? i : period - i;
}

struct XRange {
    int lo, hi;  // [lo, hi) is the segment where every tap is in bounds
};

inline XRange fast_x(const ConvSpec& s) {
    const int st = s.stride, cx = s.k_w / 2, ow = s.out_w();
    int lo = (cx + st - 1) / st;
    int hi = (s.in_w - s.k_w + cx) / st + 1;
    lo = std::clamp(lo, 0, ow);
    hi = std::clamp(hi, lo, ow);
    return {lo, hi};
}

inline bool fast_y(const ConvSpec& s, int oy) {
    const int iy0 = oy * s.stride - s.k_h / 2;
    return iy0 >= 0 && iy0 + s.k_h <= s.in_h;
}

inline double conv_cell_checked(const double* in, const double* w_block,
                                const ConvSpec& s, int oy, int ox) {
    const int cy = s.k_h / 2, cx = s.k_w / 2;
    double acc = 0.0;
    for (int ic = 0; ic < s.in_ch; ++ic) {
        const double* plane = in + static_cast<std::size_t>(ic) * s.in_h * s.in_w;
        const double* wp = w_block + static_cast<std::size_t>(ic) * s.k_h * s.k_w;
        for (int dy = 0; dy < s.k_h; ++dy) {
            const int iy = pad_index(oy * s.stride + dy - cy, s.in_h, s.pad);
            if (iy < 0) continue;
            for (int dx = 0; dx < s.k_w; ++dx) {
                const int ix = pad_index(ox * s.stride + dx - cx, s.in_w, s.pad);
                if (ix < 0) continue;
                acc += wp[dy * s.k_w + dx] * plane[static_cast<std::size_t>(iy) * s.in_w + ix];
            }
        }
    }
    return acc;
}

inline void conv2d_forward_row(const double* in, const double* w, const double* bias,
                               double* out, const ConvSpec& s, int oc, int oy) {
    const int ow = s.out_w();
    const int kh = s.k_h, kw = s.k_w, st = s.stride;
    const int cy = kh / 2, cx = kw / 2;
    double* orow = out + (static_cast<std::size_t>(oc) * s.out_h() + oy) * ow;
    const double* w_block = w + static_cast<std::size_t>(oc) * s.in_ch * kh * kw;
    const double b = bias ? bias[oc] : 0.0;

    XRange xr = fast_x(s);
    if (!fast_y(s, oy)) xr = {0, 0};

    for (int ox = 0; ox < xr.lo; ++ox)
        orow[ox] = b + conv_cell_checked(in, w_block, s, oy, ox);
    const int iy0 = oy * st - cy;
    for (int ox = xr.lo; ox < xr.hi; ++ox) {
        double acc = b;
        const int ix0 = ox * st - cx;
        for (int ic = 0; ic < s.in_ch; ++ic) {
            const double* ip =
                in + (static_cast<std::size_t>(ic) * s.in_h + iy0) * s.in_w + ix0;
            const double* wp = w_block + static_cast<std::size_t>(ic) * kh * kw;
            for (int dy = 0; dy < kh; ++dy)
                for (int dx = 0; dx < kw; ++dx)
                    acc += wp[dy * kw + dx] * ip[static_cast<std::size_t>(dy) * s.in_w + dx];
        }
        orow[ox] = acc;
    }
    for (int ox = xr.hi; ox < ow; ++ox)
        orow[ox] = b + conv_cell_checked(in, w_block, s, oy, ox);
}

// Scatters the adjoint of one input plane; safe to run planes in parallel.
inline void conv2d_grad_input_plane(const double* gout, const double* w, double* gin,
                                    const ConvSpec& s, int ic) {
    const int oh = s.out_h(), ow = s.out_w();
    const int kh = s.k_h, kw = s.k_w, st = s.stride;
    const int cy = kh / 2, cx = kw / 2;
    double* gplane = gin + static_cast<std::size_t>(ic) * s.in_h * s.in_w;
    const XRange xr = fast_x(s);

    for (int oc = 0; oc < s.out_ch; ++oc) {
        const double* grow_base = gout + static_cast<std::size_t>(oc) * oh * ow;
        const double* wp =
            w + (static_cast<std::size_t>(oc) * s.in_ch + ic) * kh * kw;
        for (int oy = 0; oy < oh; ++oy) {
            const double* grow = grow_base + static_cast<std::size_t>(oy) * ow;
            const bool fy = fast_y(s, oy);
            const int iy0 = oy * st - cy;
            for (int dy = 0; dy < kh; ++dy) {
                const int iy = fy ? iy0 + dy : pad_index(iy0 + dy, s.in_h, s.pad);
                if (iy < 0) continue;
                double* irow = gplane + static_cast<std::size_t>(iy) * s.in_w;
                for (int dx = 0; dx < kw; ++dx) {
                    const double wv = wp[dy * kw + dx];
                    const int lo = fy ? xr.lo : 0;
                    const int hi = fy ? xr.hi : 0;
                    for (int ox = 0; ox < lo; ++ox) {
                        const int ix = pad_index(ox * st + dx - cx, s.in_w, s.pad);
                        if (ix >= 0) irow[ix] += wv * grow[ox];
                    }
                    for (int ox = lo; ox < hi; ++ox)
                        irow[ox * st + dx - cx] += wv * grow[ox];
                    for (int ox = hi; ox < ow; ++ox) {
                        const int ix = pad_index(ox * st + dx - cx, s.in_w, s.pad);
                        if (ix >= 0) irow[ix] += wv * grow[ox];
                    }
                }
            }
        }
    }
}

// One (oc, ic) weight block; blocks are independent.
inline void conv2d_grad_weights_block(const double* gout, const double* in, double* gw,
                                      const ConvSpec& s, int oc, int ic) {
    const int oh = s.out_h(), ow = s.out_w();
    const int kh = s.k_h, kw = s.k_w, st = s.stride;
    const int cy = kh / 2, cx = kw / 2;
    const double* gbase = gout + static_cast<std::size_t>(oc) * oh * ow;
    const double* plane = in + static_cast<std::size_t>(ic) * s.in_h * s.in_w;
    double* wblk = gw + (static_cast<std::size_t>(oc) * s.in_ch + ic) * kh * kw;
    const XRange xr = fast_x(s);

    for (int dy = 0; dy < kh; ++dy) {
        for (int dx = 0; dx < kw; ++dx) {
            double acc = 0.0;
            for (int oy = 0; oy < oh; ++oy) {
                const double* grow = gbase + static_cast<std::size_t>(oy) * ow;
                const bool fy = fast_y(s, oy);
                const int iy = fy ? oy * st + dy - cy
                                  : pad_index(oy * st + dy - cy, s.in_h, s.pad);
                if (iy < 0) continue;
                const double* irow = plane + static_cast<std::size_t>(iy) * s.in_w;
                const int lo = fy ? xr.lo : 0;
                const int hi = fy ? xr.hi : 0;
                for (int ox = 0; ox < lo; ++ox) {
                    const int ix = pad_index(ox * st + dx - cx, s.in_w, s.pad);
                    if (ix >= 0) acc += grow[ox] * irow[ix];
                }
                for (int ox = lo; ox < hi; ++ox)
                    acc += grow[ox] * irow[ox * st + dx - cx];
                for (int ox = hi; ox < ow; ++ox) {
                    const int ix = pad_index(ox * st + dx - cx, s.in_w, s.pad);
                    if (ix >= 0) acc += grow[ox] * irow[ix];
                }
            }
            wblk[dy * kw + dx] += acc;
        }
    }
}

inline void conv2d_grad_bias_one(const double* gout, double* gbias, const ConvSpec& s,
                                 int oc) {
    const std::size_t plane = static_cast<std::size_t>(s.out_h()) * s.out_w();
    const double* g = gout + static_cast<std::size_t>(oc) * plane;
    double acc = 0.0;
    for (std::size_t i = 0; i < plane; ++i) acc += g[i];
    gbias[oc] += acc;
}

struct BilinearTap {
    int i0, i1;
    double f;  // weight of i1
};

inline BilinearTap bilinear_tap(int o, int in_n, int out_n) {
    const double src = (o + 0.5) * static_cast<double>(in_n) / out_n - 0.5;
    int i0 = static_cast<int>(std::floor(src));
    double f = src - i0;
    int i1 = i0 + 1;
    if (i0 < 0) i0 = 0;
    if (i1 < 0) i1 = 0;
    if (i0 > in_n - 1) i0 = in_n - 1;
    if (i1 > in_n - 1) i1 = in_n - 1;
    return {i0, i1, f};
}

inline void resize_row(const double* in, double* out, int ih, int iw, int oh, int ow,
                       int c, int oy) {
    const double* plane = in + static_cast<std::size_t>(c) * ih * iw;
    double* orow = out + (static_cast<std::size_t>(c) * oh + oy) * ow;
    const BilinearTap ty = bilinear_tap(oy, ih, oh);
    const double* r0 = plane + static_cast<std::size_t>(ty.i0) * iw;
    const double* r1 = plane + static_cast<std::size_t>(ty.i1) * iw;
    for (int ox = 0; ox < ow; ++ox) {
        const BilinearTap tx = bilinear_tap(ox, iw, ow);
        const double top = r0[tx.i0] * (1.0 - tx.f) + r0[tx.i1] * tx.f;
        const double bot = r1[tx.i0] * (1.0 - tx.f) + r1[tx.i1] * tx.f;
        orow[ox] = top * (1.0 - ty.f) + bot * ty.f;
    }
}

inline void resize_backward_plane(const double* gout, double* gin, int ih, int iw,
                                  int oh, int ow, int c) {
    const double* gplane = gout + static_cast<std::size_t>(c) * oh * ow;
    double* iplane = gin + static_cast<std::size_t>(c) * ih * iw;
    for (int oy = 0; oy < oh; ++oy) {
        const BilinearTap ty = bilinear_tap(oy, ih, oh);
        double* r0 = iplane + static_cast<std::size_t>(ty.i0) * iw;
        double* r1 = iplane + static_cast<std::size_t>(ty.i1) * iw;
        const double* grow = gplane + static_cast<std::size_t>(oy) * ow;
        for (int ox = 0; ox < ow; ++ox) {
            const BilinearTap tx = bilinear_tap(ox, iw, ow);
            const double g = grow[ox];
            r0[tx.i0] += g * (1.0 - ty.f) * (1.0 - tx.f);
            r0[tx.i1] += g * (1.0 - ty.f) * tx.f;
            r1[tx.i0] += g * ty.f * (1.0 - tx.f);
            r1[tx.i1] += g * ty.f * tx.f;
        }
    }
}

inline void linear_row(const double* x, const double* w, const double* bias,
                       double* out, int in_dim, int o) {
    const double* wr = w + static_cast<std::size_t>(o) * in_dim;
    double acc = bias ? bias[o] : 0.0;
    for (int i = 0; i < in_dim; ++i) acc += wr[i] * x[i];
    out[o] = acc;
}

inline void linear_grad_w_row(const double* gout, const double* x, double* gw,
                              double* gbias, int in_dim, int o) {
    const double g = gout[o];
    if (gw) {
        double* wr = gw + static_cast<std::size_t>(o) * in_dim;
        for (int i = 0; i < in_dim; ++i) wr[i] += g * x[i];
    }
    if (gbias) gbias[o] += g;
}

inline void linear_grad_x_cell(const double* gout, const double* w, double* gx,
                               int in_dim, int out_dim, int i) {
    double acc = 0.0;
    for (int o = 0; o < out_dim; ++o)
        acc += gout[o] * w[static_cast<std::size_t>(o) * in_dim + i];
    gx[i] += acc;
}

// Fixed-size chunking keeps the combine order independent of thread count.
constexpr std::size_t kReduceChunk = 8192;

inline double reduce_chunk(const double* x, std::size_t lo, std::size_t hi) {
    double acc = 0.0;
    for (std::size_t i = lo; i < hi; ++i) acc += x[i];
    return acc;
}

}  // namespace wdip::kernels::detail
