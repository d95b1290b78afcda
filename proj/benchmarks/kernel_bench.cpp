/* SPDX-FileCopyrightText: 2026 The wdip authors
 * SPDX-License-Identifier: Apache-2.0 */
// Serial vs OpenMP timing for the hot kernels. Run with
// --benchmark_filter=conv to narrow down.

#include <benchmark/benchmark.h>

#include <vector>

#include "wdip/kernels.hpp"
#include "wdip/rng.hpp"

using namespace wdip;

namespace {

kernels::ConvSpec desk_spec() {
    kernels::ConvSpec s;
    s.in_ch = 16;
    s.in_h = 128;
    s.in_w = 128;
    s.out_ch = 16;
    s.k_h = 3;
    s.k_w = 3;
    s.stride = 1;
    s.pad = kernels::Pad::Reflect;
    return s;
}

struct ConvData {
    std::vector<double> in, w, b, out;
    explicit ConvData(const kernels::ConvSpec& s)
        : in(s.in_size()), w(s.w_size()), b(s.out_ch), out(s.out_size()) {
        Rng rng(7);
        for (auto& v : in) v = rng.uniform();
        for (auto& v : w) v = rng.uniform(-0.1, 0.1);
        for (auto& v : b) v = rng.uniform(-0.1, 0.1);
    }
};

template <bool Parallel>
void bm_conv_forward(benchmark::State& state) {
    kernels::set_impl(Parallel ? kernels::Impl::OpenMP : kernels::Impl::Serial);
    const kernels::ConvSpec s = desk_spec();
    ConvData d(s);
    for (auto _ : state) {
        kernels::conv2d_forward(d.in.data(), d.w.data(), d.b.data(), d.out.data(), s);
        benchmark::ClobberMemory();
    }
    state.SetItemsProcessed(state.iterations() * static_cast<long>(s.out_size()) *
                            s.in_ch * s.k_h * s.k_w);
    kernels::set_impl(kernels::Impl::OpenMP);
}

template <bool Parallel>
void bm_conv_grad_weights(benchmark::State& state) {
    kernels::set_impl(Parallel ? kernels::Impl::OpenMP : kernels::Impl::Serial);
    const kernels::ConvSpec s = desk_spec();
    ConvData d(s);
    std::vector<double> gw(s.w_size()), gb(s.out_ch);
    for (auto _ : state) {
        kernels::conv2d_grad_weights(d.out.data(), d.in.data(), gw.data(), gb.data(),
                                     s);
        benchmark::ClobberMemory();
    }
    kernels::set_impl(kernels::Impl::OpenMP);
}

template <bool Parallel>
void bm_conv_grad_input(benchmark::State& state) {
    kernels::set_impl(Parallel ? kernels::Impl::OpenMP : kernels::Impl::Serial);
    const kernels::ConvSpec s = desk_spec();
    ConvData d(s);
    std::vector<double> gin(s.in_size());
    for (auto _ : state) {
        kernels::conv2d_grad_input(d.out.data(), d.w.data(), gin.data(), s);
        benchmark::ClobberMemory();
    }
    kernels::set_impl(kernels::Impl::OpenMP);
}

template <bool Parallel>
void bm_reduce_sum(benchmark::State& state) {
    kernels::set_impl(Parallel ? kernels::Impl::OpenMP : kernels::Impl::Serial);
    Rng rng(3);
    std::vector<double> x(1 << 20);
    for (auto& v : x) v = rng.uniform();
    for (auto _ : state) {
        benchmark::DoNotOptimize(kernels::reduce_sum(x.data(), x.size()));
    }
    kernels::set_impl(kernels::Impl::OpenMP);
}

}  // namespace

BENCHMARK(bm_conv_forward<false>)->Name("conv2d_forward/serial");
BENCHMARK(bm_conv_forward<true>)->Name("conv2d_forward/openmp");
BENCHMARK(bm_conv_grad_weights<false>)->Name("conv2d_grad_weights/serial");
BENCHMARK(bm_conv_grad_weights<true>)->Name("conv2d_grad_weights/openmp");
BENCHMARK(bm_conv_grad_input<false>)->Name("conv2d_grad_input/serial");
BENCHMARK(bm_conv_grad_input<true>)->Name("conv2d_grad_input/openmp");
BENCHMARK(bm_reduce_sum<false>)->Name("reduce_sum/serial");
BENCHMARK(bm_reduce_sum<true>)->Name("reduce_sum/openmp");

BENCHMARK_MAIN();
