/* SPDX-FileCopyrightText: 2026 The wdip authors
 * SPDX-License-Identifier: Apache-2.0 */
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <omp.h>

#include <vector>

#include "wdip/kernels.hpp"
#include "wdip/rng.hpp"

using namespace wdip;
using kernels::ConvSpec;
using kernels::Pad;

namespace {

std::vector<double> random_vec(std::size_t n, Rng& rng, double lo = -1.0,
                               double hi = 1.0) {
    std::vector<double> v(n);
    for (auto& x : v) x = rng.uniform(lo, hi);
    return v;
}

struct ConvCase {
    ConvSpec spec;
    std::vector<double> in, w, b;
};

ConvCase make_case(Rng& rng, int in_ch, int in_h, int in_w, int out_ch, int k,
                   int stride, Pad pad) {
    ConvCase c;
    c.spec = ConvSpec{in_ch, in_h, in_w, out_ch, k, k, stride, pad};
    c.in = random_vec(c.spec.in_size(), rng);
    c.w = random_vec(c.spec.w_size(), rng);
    c.b = random_vec(out_ch, rng);
    return c;
}

}  // namespace

TEST_CASE("serial and openmp kernels agree bit for bit") {
    omp_set_num_threads(4);  // force real thread teams even on small machines
    Rng rng(42);

    const std::vector<ConvCase> cases = {
        make_case(rng, 3, 17, 13, 5, 3, 1, Pad::Reflect),
        make_case(rng, 2, 16, 16, 4, 3, 2, Pad::Reflect),
        make_case(rng, 4, 9, 21, 3, 5, 1, Pad::Zero),
        make_case(rng, 1, 8, 8, 8, 1, 1, Pad::Zero),
        make_case(rng, 2, 15, 10, 2, 5, 2, Pad::Reflect),
    };

    for (const auto& c : cases) {
        CAPTURE(c.spec.in_h);
        CAPTURE(c.spec.stride);

        std::vector<double> out_s(c.spec.out_size()), out_p(c.spec.out_size());
        kernels::serial::conv2d_forward(c.in.data(), c.w.data(), c.b.data(),
                                        out_s.data(), c.spec);
        kernels::par::conv2d_forward(c.in.data(), c.w.data(), c.b.data(),
                                     out_p.data(), c.spec);
        CHECK(out_s == out_p);

        // use the forward output as the incoming gradient
        std::vector<double> gin_s(c.spec.in_size(), 0.0), gin_p(c.spec.in_size(), 0.0);
        kernels::serial::conv2d_grad_input(out_s.data(), c.w.data(), gin_s.data(),
                                           c.spec);
        kernels::par::conv2d_grad_input(out_s.data(), c.w.data(), gin_p.data(),
                                        c.spec);
        CHECK(gin_s == gin_p);

        std::vector<double> gw_s(c.spec.w_size(), 0.0), gw_p(c.spec.w_size(), 0.0);
        std::vector<double> gb_s(c.spec.out_ch, 0.0), gb_p(c.spec.out_ch, 0.0);
        kernels::serial::conv2d_grad_weights(out_s.data(), c.in.data(), gw_s.data(),
                                             gb_s.data(), c.spec);
        kernels::par::conv2d_grad_weights(out_s.data(), c.in.data(), gw_p.data(),
                                          gb_p.data(), c.spec);
        CHECK(gw_s == gw_p);
        CHECK(gb_s == gb_p);
    }
}

TEST_CASE("conv2d matches a naive dense reference") {
    Rng rng(7);
    const ConvCase c = make_case(rng, 2, 7, 9, 3, 3, 1, Pad::Zero);
    std::vector<double> out(c.spec.out_size());
    kernels::conv2d_forward(c.in.data(), c.w.data(), c.b.data(), out.data(), c.spec);

    const int kh = 3, kw = 3;
    for (int oc = 0; oc < c.spec.out_ch; ++oc)
        for (int oy = 0; oy < c.spec.out_h(); ++oy)
            for (int ox = 0; ox < c.spec.out_w(); ++ox) {
                double acc = c.b[oc];
                for (int ic = 0; ic < c.spec.in_ch; ++ic)
                    for (int dy = 0; dy < kh; ++dy)
                        for (int dx = 0; dx < kw; ++dx) {
                            const int iy = oy + dy - kh / 2;
                            const int ix = ox + dx - kw / 2;
                            if (iy < 0 || ix < 0 || iy >= c.spec.in_h ||
                                ix >= c.spec.in_w)
                                continue;
                            acc += c.w[((oc * c.spec.in_ch + ic) * kh + dy) * kw + dx] *
                                   c.in[(ic * c.spec.in_h + iy) * c.spec.in_w + ix];
                        }
                const double got =
                    out[(oc * c.spec.out_h() + oy) * c.spec.out_w() + ox];
                CHECK(got == doctest::Approx(acc).epsilon(1e-12));
            }
}

TEST_CASE("conv2d gradients are true adjoints") {
    // <conv(x), y> == <x, conv_grad_input(y)> and likewise for the weights
    Rng rng(11);
    for (int stride : {1, 2}) {
        for (Pad pad : {Pad::Zero, Pad::Reflect}) {
            const ConvCase c = make_case(rng, 2, 10, 11, 3, 3, stride, pad);
            std::vector<double> out(c.spec.out_size());
            kernels::conv2d_forward(c.in.data(), c.w.data(), nullptr, out.data(),
                                    c.spec);
            const std::vector<double> cot = random_vec(c.spec.out_size(), rng);

            std::vector<double> gin(c.spec.in_size(), 0.0);
            kernels::conv2d_grad_input(cot.data(), c.w.data(), gin.data(), c.spec);
            double lhs = 0.0, rhs = 0.0;
            for (std::size_t i = 0; i < out.size(); ++i) lhs += out[i] * cot[i];
            for (std::size_t i = 0; i < c.in.size(); ++i) rhs += c.in[i] * gin[i];
            CHECK(lhs == doctest::Approx(rhs).epsilon(1e-10));

            std::vector<double> gw(c.spec.w_size(), 0.0);
            kernels::conv2d_grad_weights(cot.data(), c.in.data(), gw.data(), nullptr,
                                         c.spec);
            double rhs_w = 0.0;
            for (std::size_t i = 0; i < c.w.size(); ++i) rhs_w += c.w[i] * gw[i];
            CHECK(lhs == doctest::Approx(rhs_w).epsilon(1e-10));
        }
    }
}

TEST_CASE("bilinear resize forward/backward are adjoints and match per impl") {
    omp_set_num_threads(3);
    Rng rng(5);
    const int ch = 3, ih = 13, iw = 9, oh = 29, ow = 17;
    const std::vector<double> in = random_vec(ch * ih * iw, rng);
    std::vector<double> out_s(ch * oh * ow), out_p(out_s.size());
    kernels::serial::resize_bilinear_forward(in.data(), out_s.data(), ch, ih, iw, oh,
                                             ow);
    kernels::par::resize_bilinear_forward(in.data(), out_p.data(), ch, ih, iw, oh,
                                          ow);
    CHECK(out_s == out_p);

    const std::vector<double> cot = random_vec(out_s.size(), rng);
    std::vector<double> gin_s(in.size(), 0.0), gin_p(in.size(), 0.0);
    kernels::serial::resize_bilinear_backward(cot.data(), gin_s.data(), ch, ih, iw,
                                              oh, ow);
    kernels::par::resize_bilinear_backward(cot.data(), gin_p.data(), ch, ih, iw, oh,
                                           ow);
    CHECK(gin_s == gin_p);

    double lhs = 0.0, rhs = 0.0;
    for (std::size_t i = 0; i < out_s.size(); ++i) lhs += out_s[i] * cot[i];
    for (std::size_t i = 0; i < in.size(); ++i) rhs += in[i] * gin_s[i];
    CHECK(lhs == doctest::Approx(rhs).epsilon(1e-10));
}

TEST_CASE("linear kernels agree across impls and adjoint") {
    omp_set_num_threads(4);
    Rng rng(9);
    const int in_dim = 37, out_dim = 23;
    const std::vector<double> x = random_vec(in_dim, rng);
    const std::vector<double> w = random_vec(in_dim * out_dim, rng);
    const std::vector<double> b = random_vec(out_dim, rng);
    std::vector<double> out_s(out_dim), out_p(out_dim);
    kernels::serial::linear_forward(x.data(), w.data(), b.data(), out_s.data(),
                                    in_dim, out_dim);
    kernels::par::linear_forward(x.data(), w.data(), b.data(), out_p.data(), in_dim,
                                 out_dim);
    CHECK(out_s == out_p);

    const std::vector<double> cot = random_vec(out_dim, rng);
    std::vector<double> gx_s(in_dim, 0.0), gx_p(in_dim, 0.0);
    std::vector<double> gw_s(w.size(), 0.0), gw_p(w.size(), 0.0);
    std::vector<double> gb_s(out_dim, 0.0), gb_p(out_dim, 0.0);
    kernels::serial::linear_grad(cot.data(), x.data(), w.data(), gx_s.data(),
                                 gw_s.data(), gb_s.data(), in_dim, out_dim);
    kernels::par::linear_grad(cot.data(), x.data(), w.data(), gx_p.data(),
                              gw_p.data(), gb_p.data(), in_dim, out_dim);
    CHECK(gx_s == gx_p);
    CHECK(gw_s == gw_p);
    CHECK(gb_s == gb_p);
}

TEST_CASE("reduce_sum is chunk-deterministic and impl-identical") {
    omp_set_num_threads(4);
    Rng rng(3);
    for (std::size_t n : {std::size_t(1), std::size_t(8191), std::size_t(8192),
                          std::size_t(100000)}) {
        const std::vector<double> x = random_vec(n, rng);
        const double a = kernels::serial::reduce_sum(x.data(), n);
        const double b = kernels::par::reduce_sum(x.data(), n);
        CHECK(a == b);
    }
}

TEST_CASE("elementwise helpers are impl-identical") {
    omp_set_num_threads(4);
    Rng rng(13);
    const std::size_t n = 10007;
    const std::vector<double> a = random_vec(n, rng), b = random_vec(n, rng);
    std::vector<double> y1(b), y2(b);
    kernels::serial::axpy(0.37, a.data(), y1.data(), n);
    kernels::par::axpy(0.37, a.data(), y2.data(), n);
    CHECK(y1 == y2);

    std::vector<double> m1(n), m2(n);
    kernels::serial::vmul(a.data(), b.data(), m1.data(), n);
    kernels::par::vmul(a.data(), b.data(), m2.data(), n);
    CHECK(m1 == m2);

    kernels::serial::vscale(a.data(), -1.7, m1.data(), n);
    kernels::par::vscale(a.data(), -1.7, m2.data(), n);
    CHECK(m1 == m2);
}

TEST_CASE("impl dispatch switch routes to the same results") {
    Rng rng(21);
    const ConvCase c = make_case(rng, 2, 12, 12, 2, 3, 1, Pad::Reflect);
    std::vector<double> a(c.spec.out_size()), b(c.spec.out_size());
    kernels::set_impl(kernels::Impl::Serial);
    CHECK(kernels::impl() == kernels::Impl::Serial);
    kernels::conv2d_forward(c.in.data(), c.w.data(), c.b.data(), a.data(), c.spec);
    kernels::set_impl(kernels::Impl::OpenMP);
    kernels::conv2d_forward(c.in.data(), c.w.data(), c.b.data(), b.data(), c.spec);
    CHECK(a == b);
}
