/* SPDX-FileCopyrightText: 2026 The wdip authors
 * SPDX-License-Identifier: Apache-2.0 */
#pragma once

#include <cstddef>

namespace wdip::kernels {

enum class Pad { Zero, Reflect };

/// Same-size 2D convolution over planar [ch][h][w] data, pad = k/2 per side.
/// Weights are [out_ch][in_ch][k_h][k_w]; output is [out_ch][out_h][out_w]
/// with out = ceil(in / stride).
struct ConvSpec {
    int in_ch = 1, in_h = 0, in_w = 0;
    int out_ch = 1, k_h = 1, k_w = 1;
    int stride = 1;
    Pad pad = Pad::Reflect;

    int out_h() const { return (in_h + stride - 1) / stride; }
    int out_w() const { return (in_w + stride - 1) / stride; }
    std::size_t in_size() const {
        return static_cast<std::size_t>(in_ch) * in_h * in_w;
    }
    std::size_t out_size() const {
        return static_cast<std::size_t>(out_ch) * out_h() * out_w();
    }
    std::size_t w_size() const {
        return static_cast<std::size_t>(out_ch) * in_ch * k_h * k_w;
    }
};

// Both implementations share the same inner expressions and accumulation
// order, so outputs are bit-identical; the parallel one only splits
// collision-free outer loops across threads.
#define WDIP_DECLARE_KERNELS                                                        \
    void conv2d_forward(const double* in, const double* w, const double* bias,      \
                        double* out, const ConvSpec& s);                            \
    /* accumulates into gin */                                                      \
    void conv2d_grad_input(const double* gout, const double* w, double* gin,        \
                           const ConvSpec& s);                                      \
    /* accumulates into gw / gbias */                                               \
    void conv2d_grad_weights(const double* gout, const double* in, double* gw,      \
                             double* gbias, const ConvSpec& s);                     \
    void resize_bilinear_forward(const double* in, double* out, int ch, int ih,     \
                                 int iw, int oh, int ow);                           \
    /* accumulates into gin */                                                      \
    void resize_bilinear_backward(const double* gout, double* gin, int ch, int ih,  \
                                  int iw, int oh, int ow);                          \
    void linear_forward(const double* x, const double* w, const double* bias,       \
                        double* out, int in_dim, int out_dim);                      \
    /* accumulate into gx / gw / gbias */                                           \
    void linear_grad(const double* gout, const double* x, const double* w,          \
                     double* gx, double* gw, double* gbias, int in_dim,             \
                     int out_dim);                                                  \
    double reduce_sum(const double* x, std::size_t n);                              \
    void axpy(double alpha, const double* x, double* y, std::size_t n);             \
    void vmul(const double* a, const double* b, double* out, std::size_t n);        \
    void vscale(const double* x, double alpha, double* out, std::size_t n)

namespace serial {
WDIP_DECLARE_KERNELS;
}
namespace par {
WDIP_DECLARE_KERNELS;
}

enum class Impl { Serial, OpenMP };

/// Process-wide dispatch switch (default OpenMP). Intended for tests and the
/// kernel benchmark; not thread safe against concurrent flipping.
void set_impl(Impl impl);
Impl impl();

// Dispatching entry points used by the rest of the library.
WDIP_DECLARE_KERNELS;

#undef WDIP_DECLARE_KERNELS

}  // namespace wdip::kernels
