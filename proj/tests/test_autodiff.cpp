/* SPDX-FileCopyrightText: 2026 The wdip authors
 * SPDX-License-Identifier: Apache-2.0 */
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <functional>

#include "wdip/autodiff.hpp"
#include "wdip/rng.hpp"

using namespace wdip;

namespace {

Tensor random_tensor(std::vector<int> shape, Rng& rng, double lo = -1.0,
                     double hi = 1.0) {
    Tensor t(std::move(shape));
    for (std::size_t i = 0; i < t.size(); ++i) t[i] = rng.uniform(lo, hi);
    return t;
}

using ScalarFn = std::function<ad::Var(ad::Graph&, ad::Var)>;

double eval_at(const ScalarFn& fn, const Tensor& x) {
    ad::Graph g;
    return fn(g, g.constant(x)).value()[0];
}

/// Central-difference check of d(fn)/dx on a sample of coordinates.
void check_gradient(const ScalarFn& fn, const Tensor& x0, Rng& rng,
                    double tol = 1e-6, int samples = 12, double eps = 1e-6) {
    ad::Graph g;
    ad::Var x = g.leaf(x0, true);
    ad::Var y = fn(g, x);
    g.backward(y);
    const Tensor& grad = x.grad();

    for (int s = 0; s < samples; ++s) {
        const std::size_t i = rng.index(x0.size());
        Tensor xp = x0, xm = x0;
        xp[i] += eps;
        xm[i] -= eps;
        const double fd = (eval_at(fn, xp) - eval_at(fn, xm)) / (2 * eps);
        const double scale = std::max({1.0, std::abs(fd), std::abs(grad[i])});
        CAPTURE(i);
        CHECK(std::abs(grad[i] - fd) / scale < tol);
    }
}

}  // namespace

TEST_CASE("elementwise op gradients") {
    Rng rng(1);
    const Tensor a0 = random_tensor({4, 5}, rng);
    const Tensor b0 = random_tensor({4, 5}, rng, 0.5, 2.0);

    check_gradient(
        [&](ad::Graph& g, ad::Var x) { return ad::sum(ad::add(x, g.constant(b0))); },
        a0, rng);
    check_gradient(
        [&](ad::Graph& g, ad::Var x) { return ad::sum(ad::sub(g.constant(b0), x)); },
        a0, rng);
    check_gradient(
        [&](ad::Graph& g, ad::Var x) {
            return ad::sum(ad::mul(x, ad::add_scalar(x, 0.3)));
        },
        a0, rng);
    check_gradient(
        [&](ad::Graph& g, ad::Var x) { return ad::sum(ad::div(x, g.constant(b0))); },
        a0, rng);
    check_gradient(
        [&](ad::Graph& g, ad::Var x) {
            return ad::sum(ad::div(g.constant(b0), ad::add_scalar(ad::mul(x, x), 1.0)));
        },
        a0, rng);
    check_gradient(
        [&](ad::Graph& g, ad::Var x) { return ad::mean(ad::mul_scalar(x, -2.5)); },
        a0, rng);
    check_gradient([&](ad::Graph& g, ad::Var x) { return ad::sse(x, g.constant(b0)); },
                   a0, rng);
    check_gradient([&](ad::Graph& g, ad::Var x) { return ad::mse(x, g.constant(b0)); },
                   a0, rng);
}

TEST_CASE("both arguments of binary fused ops receive gradients") {
    Rng rng(2);
    const Tensor a0 = random_tensor({8}, rng);
    const Tensor b0 = random_tensor({8}, rng);
    ad::Graph g;
    ad::Var a = g.leaf(a0, true);
    ad::Var b = g.leaf(b0, true);
    ad::Var y = ad::sse(a, b);
    g.backward(y);
    for (std::size_t i = 0; i < a0.size(); ++i) {
        CHECK(a.grad()[i] == doctest::Approx(2 * (a0[i] - b0[i])));
        CHECK(b.grad()[i] == doctest::Approx(-2 * (a0[i] - b0[i])));
    }
}

TEST_CASE("activation gradients") {
    Rng rng(3);
    const Tensor a0 = random_tensor({3, 7}, rng, -2.0, 2.0);
    check_gradient(
        [&](ad::Graph&, ad::Var x) { return ad::sum(ad::leaky_relu(x, 0.2)); }, a0,
        rng, 1e-6, 12, 1e-7);  // small eps keeps samples off the kink
    check_gradient([&](ad::Graph&, ad::Var x) { return ad::sum(ad::sigmoid(x)); }, a0,
                   rng);
    const Tensor softmax_cot = random_tensor({3, 7}, rng);
    check_gradient(
        [&](ad::Graph& g, ad::Var x) {
            return ad::sum(ad::mul(ad::softmax_flat(x), g.constant(softmax_cot)));
        },
        a0, rng);
}

TEST_CASE("shape op gradients") {
    Rng rng(4);
    const Tensor a0 = random_tensor({2, 3, 4}, rng);
    const Tensor b0 = random_tensor({1, 3, 4}, rng);
    check_gradient(
        [&](ad::Graph& g, ad::Var x) {
            return ad::sse(ad::reshape(x, {6, 4}), g.constant(Tensor({6, 4}, 0.1)));
        },
        a0, rng);
    check_gradient(
        [&](ad::Graph& g, ad::Var x) {
            return ad::sum(ad::mul(ad::concat_ch(x, g.constant(b0)),
                                   g.constant(Tensor({3, 3, 4}, 0.5))));
        },
        a0, rng);

    const Tensor k0 = random_tensor({5, 5}, rng);
    const Tensor shift_cot = random_tensor({5, 5}, rng);
    check_gradient(
        [&](ad::Graph& g, ad::Var x) {
            return ad::sum(ad::mul(ad::circshift2d(x, 2, -1), g.constant(shift_cot)));
        },
        k0, rng);
}

TEST_CASE("circshift2d wraps correctly") {
    Tensor t({3, 3});
    for (int i = 0; i < 9; ++i) t[i] = i;
    ad::Graph g;
    const Tensor s = ad::circshift2d(g.constant(t), 1, 0).value();
    // row y of the result is row (y-1 mod 3) of the input
    CHECK(s[0 * 3 + 0] == t[2 * 3 + 0]);
    CHECK(s[1 * 3 + 0] == t[0 * 3 + 0]);
    CHECK(s[2 * 3 + 2] == t[1 * 3 + 2]);
}

TEST_CASE("linear layer gradients") {
    Rng rng(5);
    const Tensor x0 = random_tensor({6}, rng);
    const Tensor w0 = random_tensor({4, 6}, rng);
    const Tensor b0 = random_tensor({4}, rng);
    const Tensor cot = random_tensor({4}, rng);

    check_gradient(
        [&](ad::Graph& g, ad::Var x) {
            return ad::sum(
                ad::mul(ad::linear(x, g.constant(w0), g.constant(b0)), g.constant(cot)));
        },
        x0, rng);
    check_gradient(
        [&](ad::Graph& g, ad::Var w) {
            return ad::sum(
                ad::mul(ad::linear(g.constant(x0), w, g.constant(b0)), g.constant(cot)));
        },
        w0, rng);
    check_gradient(
        [&](ad::Graph& g, ad::Var b) {
            return ad::sum(
                ad::mul(ad::linear(g.constant(x0), g.constant(w0), b), g.constant(cot)));
        },
        b0, rng);
}

TEST_CASE("conv2d gradients (both pads, both strides, all inputs)") {
    Rng rng(6);
    for (int stride : {1, 2}) {
        for (auto pad : {kernels::Pad::Zero, kernels::Pad::Reflect}) {
            const Tensor x0 = random_tensor({2, 6, 7}, rng);
            const Tensor w0 = random_tensor({3, 2, 3, 3}, rng);
            const Tensor b0 = random_tensor({3}, rng);
            CAPTURE(stride);

            check_gradient(
                [&](ad::Graph& g, ad::Var x) {
                    return ad::sse(ad::conv2d(x, g.constant(w0), g.constant(b0),
                                              stride, pad),
                                   g.constant(Tensor(
                                       {3, (6 + stride - 1) / stride,
                                        (7 + stride - 1) / stride},
                                       0.2)));
                },
                x0, rng, 1e-5);
            check_gradient(
                [&](ad::Graph& g, ad::Var w) {
                    return ad::sse(ad::conv2d(g.constant(x0), w, g.constant(b0),
                                              stride, pad),
                                   g.constant(Tensor(
                                       {3, (6 + stride - 1) / stride,
                                        (7 + stride - 1) / stride},
                                       0.2)));
                },
                w0, rng, 1e-5);
            check_gradient(
                [&](ad::Graph& g, ad::Var b) {
                    return ad::sum(ad::conv2d(g.constant(x0), g.constant(w0), b,
                                              stride, pad));
                },
                b0, rng, 1e-5);
        }
    }
}

TEST_CASE("instance_norm gradients") {
    Rng rng(7);
    const Tensor x0 = random_tensor({3, 5, 4}, rng);
    const Tensor g0 = random_tensor({3}, rng, 0.5, 1.5);
    const Tensor be0 = random_tensor({3}, rng);
    const Tensor cot = random_tensor({3, 5, 4}, rng);

    check_gradient(
        [&](ad::Graph& g, ad::Var x) {
            return ad::sum(ad::mul(ad::instance_norm(x, g.constant(g0), g.constant(be0), 1e-5),
                                   g.constant(cot)));
        },
        x0, rng, 1e-5);
    check_gradient(
        [&](ad::Graph& g, ad::Var ga) {
            return ad::sum(ad::mul(ad::instance_norm(g.constant(x0), ga, g.constant(be0), 1e-5),
                                   g.constant(cot)));
        },
        g0, rng, 1e-5);
    check_gradient(
        [&](ad::Graph& g, ad::Var be) {
            return ad::sum(ad::mul(ad::instance_norm(g.constant(x0), g.constant(g0), be, 1e-5),
                                   g.constant(cot)));
        },
        be0, rng, 1e-5);
}

TEST_CASE("resize_bilinear gradients") {
    Rng rng(8);
    const Tensor x0 = random_tensor({2, 5, 6}, rng);
    check_gradient(
        [&](ad::Graph& g, ad::Var x) {
            return ad::sse(ad::resize_bilinear(x, 9, 11),
                           g.constant(Tensor({2, 9, 11}, 0.3)));
        },
        x0, rng, 1e-5);
}

TEST_CASE("circ_conv gradients flow to image and kernel") {
    Rng rng(9);
    const Tensor img0 = random_tensor({10, 12}, rng);
    const Tensor k0 = random_tensor({3, 3}, rng, 0.0, 1.0);
    const Tensor target = random_tensor({10, 12}, rng);

    check_gradient(
        [&](ad::Graph& g, ad::Var x) {
            return ad::mse(ad::circ_conv(x, g.constant(k0)), g.constant(target));
        },
        img0, rng, 1e-5);
    check_gradient(
        [&](ad::Graph& g, ad::Var k) {
            return ad::mse(ad::circ_conv(g.constant(img0), k), g.constant(target));
        },
        k0, rng, 1e-5);
}

TEST_CASE("wiener op gradient matches finite differences") {
    Rng rng(10);
    const Tensor blurred = random_tensor({16, 16}, rng, 0.0, 1.0);
    const Tensor k0 = random_tensor({5, 5}, rng, 0.0, 0.2);
    const Tensor target = random_tensor({16, 16}, rng, 0.0, 1.0);

    for (double c : {0.025, 1e-3}) {
        check_gradient(
            [&](ad::Graph& g, ad::Var k) {
                return ad::mse(ad::wiener(blurred, k, c), g.constant(target));
            },
            k0, rng, 1e-4, 16);
    }
}

TEST_CASE("sep_filter_valid and ssim gradients") {
    Rng rng(11);
    const Tensor x0 = random_tensor({14, 15}, rng, 0.0, 1.0);
    const Tensor y0 = random_tensor({14, 15}, rng, 0.0, 1.0);
    const std::vector<double> win{0.25, 0.5, 0.25};

    check_gradient(
        [&](ad::Graph& g, ad::Var x) {
            return ad::sse(ad::sep_filter_valid(x, win),
                           g.constant(Tensor({12, 13}, 0.4)));
        },
        x0, rng, 1e-5);

    check_gradient(
        [&](ad::Graph& g, ad::Var x) { return ad::ssim_mean(x, g.constant(y0)); },
        x0, rng, 1e-4);
}

TEST_CASE("graphs are deterministic") {
    Rng rng(12);
    const Tensor x0 = random_tensor({3, 8, 8}, rng);
    const Tensor w0 = random_tensor({2, 3, 3, 3}, rng);
    auto run = [&]() {
        ad::Graph g;
        ad::Var x = g.leaf(x0, true);
        ad::Var y = ad::sum(ad::sigmoid(
            ad::conv2d(x, g.constant(w0), ad::Var(), 1, kernels::Pad::Reflect)));
        g.backward(y);
        return std::make_pair(y.value()[0], x.grad()[17]);
    };
    const auto a = run();
    const auto b = run();
    CHECK(a.first == b.first);
    CHECK(a.second == b.second);
}

TEST_CASE("backward requires a scalar root") {
    ad::Graph g;
    ad::Var x = g.leaf(Tensor({2, 2}, 1.0), true);
    CHECK_THROWS_AS(g.backward(x), DimensionError);
}
