/* SPDX-FileCopyrightText: 2026 The wdip authors
 * SPDX-License-Identifier: Apache-2.0 */
#pragma once

#include <array>

#include "wdip/autodiff.hpp"
#include "wdip/image.hpp"

namespace wdip::objective {

/// Loss weights and the Wiener constant; defaults are the reference values
/// used across all experiments.
struct HQSWeights {
    double alpha = 1e-3;
    double beta = 1e-4;
    double lambda = 1e-3;
    double wiener_c = 0.025;
    int ssim_switch_iter = 1000;
};

struct LossBreakdown {
    double data = 0.0;
    double image_match = 0.0;
    double kernel_match = 0.0;
    double kernel_l2 = 0.0;
    double total = 0.0;
    std::array<int, 2> alignment_shift{0, 0};  // {dy, dx}
};

struct Alignment {
    std::array<int, 2> shift{0, 0};
    Kernel aligned;
};

/// Integer circular cross-correlation peak; `aligned` is `movable` shifted
/// onto `reference`. Ties break toward the smallest shift magnitude, then
/// lexicographically on (dy, dx). Note the lexicographic tie-break makes
/// exact ties order-dependent; for generic kernels the result is symmetric.
Alignment align_kernels(const Kernel& reference, const Kernel& movable);

// Plain evaluations (single-channel fields).
double data_term(const ImageField& gen_image, const Kernel& gen_kernel,
                 const ImageField& blurred, int iter, const HQSWeights& weights);
double image_match_term(const ImageField& gen_image, const ImageField& blurred,
                        const Kernel& aux_kernel, const HQSWeights& weights);
double kernel_match_term(const Kernel& gen_kernel, const Kernel& aux_kernel);
double kernel_l2(const Kernel& kernel);
LossBreakdown total_loss(const ImageField& gen_image, const Kernel& gen_kernel,
                         const ImageField& blurred, const Kernel& aux_kernel,
                         int iter, const HQSWeights& weights);

// Graph builders shared with the solver. Constants enter as non-grad leaves,
// so the same builders serve both alternating steps.
ad::Var data_term_graph(ad::Var gen_image, ad::Var gen_kernel, const Tensor& blurred,
                        int iter, const HQSWeights& weights);
ad::Var image_match_graph(ad::Var gen_image, const Tensor& blurred, ad::Var aux_kernel,
                          const HQSWeights& weights);
/// Aligns on current values (aux is the reference); the shift is a constant
/// for differentiation and is reported through `shift_out`.
ad::Var kernel_match_graph(ad::Var gen_kernel, ad::Var aux_kernel,
                           std::array<int, 2>* shift_out = nullptr);
ad::Var kernel_l2_graph(ad::Var kernel);

struct LossGraph {
    ad::Var data, image_match, kernel_match, kernel_l2, total;
    std::array<int, 2> alignment_shift{0, 0};

    LossBreakdown breakdown() const;
};

LossGraph total_loss_graph(ad::Var gen_image, ad::Var gen_kernel,
                           const Tensor& blurred, ad::Var aux_kernel, int iter,
                           const HQSWeights& weights);

}  // namespace wdip::objective
