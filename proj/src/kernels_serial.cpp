/* SPDX-FileCopyrightText: 2026 The wdip authors
 * SPDX-License-Identifier: Apache-2.0 */
#include <vector>

#include "kernels_detail.hpp"
#include "wdip/kernels.hpp"

namespace wdip::kernels::serial {

using namespace wdip::kernels::detail;

void conv2d_forward(const double* in, const double* w, const double* bias, double* out,
                    const ConvSpec& s) {
    const int oh = s.out_h();
    for (int oc = 0; oc < s.out_ch; ++oc)
        for (int oy = 0; oy < oh; ++oy) conv2d_forward_row(in, w, bias, out, s, oc, oy);
}

void conv2d_grad_input(const double* gout, const double* w, double* gin,
                       const ConvSpec& s) {
    for (int ic = 0; ic < s.in_ch; ++ic) conv2d_grad_input_plane(gout, w, gin, s, ic);
}

void conv2d_grad_weights(const double* gout, const double* in, double* gw,
                         double* gbias, const ConvSpec& s) {
    if (gw)
        for (int oc = 0; oc < s.out_ch; ++oc)
            for (int ic = 0; ic < s.in_ch; ++ic)
                conv2d_grad_weights_block(gout, in, gw, s, oc, ic);
    if (gbias)
        for (int oc = 0; oc < s.out_ch; ++oc) conv2d_grad_bias_one(gout, gbias, s, oc);
}

void resize_bilinear_forward(const double* in, double* out, int ch, int ih, int iw,
                             int oh, int ow) {
    for (int c = 0; c < ch; ++c)
        for (int oy = 0; oy < oh; ++oy) resize_row(in, out, ih, iw, oh, ow, c, oy);
}

void resize_bilinear_backward(const double* gout, double* gin, int ch, int ih, int iw,
                              int oh, int ow) {
    for (int c = 0; c < ch; ++c) resize_backward_plane(gout, gin, ih, iw, oh, ow, c);
}

void linear_forward(const double* x, const double* w, const double* bias, double* out,
                    int in_dim, int out_dim) {
    for (int o = 0; o < out_dim; ++o) linear_row(x, w, bias, out, in_dim, o);
}

void linear_grad(const double* gout, const double* x, const double* w, double* gx,
                 double* gw, double* gbias, int in_dim, int out_dim) {
    if (gw || gbias)
        for (int o = 0; o < out_dim; ++o)
            linear_grad_w_row(gout, x, gw, gbias, in_dim, o);
    if (gx)
        for (int i = 0; i < in_dim; ++i)
            linear_grad_x_cell(gout, w, gx, in_dim, out_dim, i);
}

double reduce_sum(const double* x, std::size_t n) {
    const std::size_t chunks = (n + kReduceChunk - 1) / kReduceChunk;
    double total = 0.0;
    for (std::size_t c = 0; c < chunks; ++c)
        total += reduce_chunk(x, c * kReduceChunk, std::min(n, (c + 1) * kReduceChunk));
    return total;
}

void axpy(double alpha, const double* x, double* y, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) y[i] += alpha * x[i];
}

void vmul(const double* a, const double* b, double* out, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) out[i] = a[i] * b[i];
}

void vscale(const double* x, double alpha, double* out, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) out[i] = alpha * x[i];
}

}  // namespace wdip::kernels::serial
