/* SPDX-FileCopyrightText: 2026 The wdip authors
 * SPDX-License-Identifier: Apache-2.0 */
#include "wdip/objective.hpp"

#include <cmath>
#include <limits>

#include "wdip/nets.hpp"

namespace wdip::objective {

using nets::image_to_tensor;
using nets::kernel_to_tensor;

Alignment align_kernels(const Kernel& reference, const Kernel& movable) {
    if (reference.size() != movable.size())
        throw DimensionError("align_kernels: size mismatch");
    const int n = reference.size();
    const int half = (n - 1) / 2;

    int best_dy = 0, best_dx = 0;
    double best_score = -std::numeric_limits<double>::infinity();
    long best_mag = 0;
    for (int dy = -half; dy <= half; ++dy) {
        for (int dx = -half; dx <= half; ++dx) {
            // correlation of reference with movable shifted by (dy,dx)
            double score = 0.0;
            for (int y = 0; y < n; ++y) {
                const int sy = ((y - dy) % n + n) % n;
                for (int x = 0; x < n; ++x) {
                    const int sx = ((x - dx) % n + n) % n;
                    score += reference.at(y, x) * movable.at(sy, sx);
                }
            }
            const long mag = static_cast<long>(dy) * dy + static_cast<long>(dx) * dx;
            const bool better =
                score > best_score ||
                (score == best_score &&
                 (mag < best_mag ||
                  (mag == best_mag &&
                   (dy < best_dy || (dy == best_dy && dx < best_dx)))));
            if (better) {
                best_score = score;
                best_dy = dy;
                best_dx = dx;
                best_mag = mag;
            }
        }
    }

    Alignment out;
    out.shift = {best_dy, best_dx};
    out.aligned = Kernel(n);
    for (int y = 0; y < n; ++y) {
        const int sy = ((y - best_dy) % n + n) % n;
        for (int x = 0; x < n; ++x) {
            const int sx = ((x - best_dx) % n + n) % n;
            out.aligned.at(y, x) = movable.at(sy, sx);
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// Graph builders

ad::Var data_term_graph(ad::Var gen_image, ad::Var gen_kernel, const Tensor& blurred,
                        int iter, const HQSWeights& weights) {
    ad::Graph& g = *gen_image.graph();
    ad::Var reconvolved = ad::circ_conv(gen_image, gen_kernel);
    ad::Var target = g.constant(blurred);
    if (iter < weights.ssim_switch_iter) return ad::mse(reconvolved, target);
    return ad::add_scalar(ad::mul_scalar(ad::ssim_mean(reconvolved, target), -1.0),
                          1.0);
}

ad::Var image_match_graph(ad::Var gen_image, const Tensor& blurred, ad::Var aux_kernel,
                          const HQSWeights& weights) {
    ad::Var w = ad::wiener(blurred, aux_kernel, weights.wiener_c);
    return ad::mse(gen_image, w);
}

ad::Var kernel_match_graph(ad::Var gen_kernel, ad::Var aux_kernel,
                           std::array<int, 2>* shift_out) {
    const Alignment a = align_kernels(nets::tensor_to_kernel(aux_kernel.value()),
                                      nets::tensor_to_kernel(gen_kernel.value()));
    if (shift_out) *shift_out = a.shift;
    ad::Var aligned = ad::circshift2d(gen_kernel, a.shift[0], a.shift[1]);
    return ad::sse(aligned, aux_kernel);
}

ad::Var kernel_l2_graph(ad::Var kernel) { return ad::sum(ad::mul(kernel, kernel)); }

LossBreakdown LossGraph::breakdown() const {
    LossBreakdown b;
    b.data = data.value()[0];
    b.image_match = image_match.value()[0];
    b.kernel_match = kernel_match.value()[0];
    b.kernel_l2 = kernel_l2.value()[0];
    b.total = total.value()[0];
    b.alignment_shift = alignment_shift;
    return b;
}

LossGraph total_loss_graph(ad::Var gen_image, ad::Var gen_kernel,
                           const Tensor& blurred, ad::Var aux_kernel, int iter,
                           const HQSWeights& weights) {
    LossGraph lg;
    lg.data = data_term_graph(gen_image, gen_kernel, blurred, iter, weights);
    lg.image_match = image_match_graph(gen_image, blurred, aux_kernel, weights);
    lg.kernel_match =
        kernel_match_graph(gen_kernel, aux_kernel, &lg.alignment_shift);
    lg.kernel_l2 = kernel_l2_graph(aux_kernel);
    lg.total = ad::add(ad::add(lg.data, ad::mul_scalar(lg.image_match, weights.alpha)),
                       ad::add(ad::mul_scalar(lg.kernel_match, weights.beta),
                               ad::mul_scalar(lg.kernel_l2, weights.lambda)));
    return lg;
}

// ---------------------------------------------------------------------------
// Plain evaluations

namespace {

void check_single_channel(const ImageField& img, const char* what) {
    if (img.channels() != 1)
        throw DimensionError(std::string(what) + ": single channel only");
}

}  // namespace

double data_term(const ImageField& gen_image, const Kernel& gen_kernel,
                 const ImageField& blurred, int iter, const HQSWeights& weights) {
    check_single_channel(gen_image, "data_term");
    check_single_channel(blurred, "data_term");
    ad::Graph g;
    ad::Var img = g.constant(image_to_tensor(gen_image));
    ad::Var ker = g.constant(kernel_to_tensor(gen_kernel));
    return data_term_graph(img, ker, image_to_tensor(blurred), iter, weights)
        .value()[0];
}

double image_match_term(const ImageField& gen_image, const ImageField& blurred,
                        const Kernel& aux_kernel, const HQSWeights& weights) {
    check_single_channel(gen_image, "image_match_term");
    check_single_channel(blurred, "image_match_term");
    ad::Graph g;
    ad::Var img = g.constant(image_to_tensor(gen_image));
    ad::Var aux = g.constant(kernel_to_tensor(aux_kernel));
    return image_match_graph(img, image_to_tensor(blurred), aux, weights).value()[0];
}

double kernel_match_term(const Kernel& gen_kernel, const Kernel& aux_kernel) {
    ad::Graph g;
    ad::Var gen = g.constant(kernel_to_tensor(gen_kernel));
    ad::Var aux = g.constant(kernel_to_tensor(aux_kernel));
    return kernel_match_graph(gen, aux).value()[0];
}

double kernel_l2(const Kernel& kernel) {
    double s = 0.0;
    for (std::size_t i = 0; i < kernel.count(); ++i)
        s += kernel.data()[i] * kernel.data()[i];
    return s;
}

LossBreakdown total_loss(const ImageField& gen_image, const Kernel& gen_kernel,
                         const ImageField& blurred, const Kernel& aux_kernel,
                         int iter, const HQSWeights& weights) {
    check_single_channel(gen_image, "total_loss");
    check_single_channel(blurred, "total_loss");
    ad::Graph g;
    ad::Var img = g.constant(image_to_tensor(gen_image));
    ad::Var ker = g.constant(kernel_to_tensor(gen_kernel));
    ad::Var aux = g.constant(kernel_to_tensor(aux_kernel));
    return total_loss_graph(img, ker, image_to_tensor(blurred), aux, iter, weights)
        .breakdown();
}

}  // namespace wdip::objective
