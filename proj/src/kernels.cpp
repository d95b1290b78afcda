/* SPDX-FileCopyrightText: 2026 The wdip authors
 * SPDX-License-Identifier: Apache-2.0 */
#include "wdip/kernels.hpp"

#include <atomic>

namespace wdip::kernels {

namespace {
std::atomic<Impl> g_impl{Impl::OpenMP};
}

void set_impl(Impl impl) { g_impl.store(impl); }
Impl impl() { return g_impl.load(); }

#define WDIP_DISPATCH(fn, ...) \
    return impl() == Impl::Serial ? serial::fn(__VA_ARGS__) : par::fn(__VA_ARGS__)

void conv2d_forward(const double* in, const double* w, const double* bias, double* out,
                    const ConvSpec& s) {
    WDIP_DISPATCH(conv2d_forward, in, w, bias, out, s);
}
void conv2d_grad_input(const double* gout, const double* w, double* gin,
                       const ConvSpec& s) {
    WDIP_DISPATCH(conv2d_grad_input, gout, w, gin, s);
}
void conv2d_grad_weights(const double* gout, const double* in, double* gw,
                         double* gbias, const ConvSpec& s) {
    WDIP_DISPATCH(conv2d_grad_weights, gout, in, gw, gbias, s);
}
void resize_bilinear_forward(const double* in, double* out, int ch, int ih, int iw,
                             int oh, int ow) {
    WDIP_DISPATCH(resize_bilinear_forward, in, out, ch, ih, iw, oh, ow);
}
void resize_bilinear_backward(const double* gout, double* gin, int ch, int ih, int iw,
                              int oh, int ow) {
    WDIP_DISPATCH(resize_bilinear_backward, gout, gin, ch, ih, iw, oh, ow);
}
void linear_forward(const double* x, const double* w, const double* bias, double* out,
                    int in_dim, int out_dim) {
    WDIP_DISPATCH(linear_forward, x, w, bias, out, in_dim, out_dim);
}
void linear_grad(const double* gout, const double* x, const double* w, double* gx,
                 double* gw, double* gbias, int in_dim, int out_dim) {
    WDIP_DISPATCH(linear_grad, gout, x, w, gx, gw, gbias, in_dim, out_dim);
}
double reduce_sum(const double* x, std::size_t n) { WDIP_DISPATCH(reduce_sum, x, n); }
void axpy(double alpha, const double* x, double* y, std::size_t n) {
    WDIP_DISPATCH(axpy, alpha, x, y, n);
}
void vmul(const double* a, const double* b, double* out, std::size_t n) {
    WDIP_DISPATCH(vmul, a, b, out, n);
}
void vscale(const double* x, double alpha, double* out, std::size_t n) {
    WDIP_DISPATCH(vscale, x, alpha, out, n);
}

#undef WDIP_DISPATCH

}  // namespace wdip::kernels
