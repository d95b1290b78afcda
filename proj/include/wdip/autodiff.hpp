/* SPDX-FileCopyrightText: 2026 The wdip authors
 * SPDX-License-Identifier: Apache-2.0 */
#pragma once

#include <functional>
#include <vector>

#include "wdip/kernels.hpp"
#include "wdip/tensor.hpp"

namespace wdip::ad {

class Graph;

/// Handle to a node of a Graph tape.
class Var {
  public:
    Var() = default;
    bool defined() const { return graph_ != nullptr; }
    const Tensor& value() const;
    const Tensor& grad() const;
    Graph* graph() const { return graph_; }

  private:
    friend class Graph;
    Var(Graph* g, int node) : graph_(g), node_(node) {}
    Graph* graph_ = nullptr;
    int node_ = -1;
};

/// Define-by-run reverse-mode tape over Tensors. A Graph is built fresh for
/// every objective evaluation; backward() walks the tape once.
class Graph {
  public:
    Graph() = default;
    Graph(const Graph&) = delete;
    Graph& operator=(const Graph&) = delete;

    Var leaf(Tensor value, bool requires_grad);
    Var constant(Tensor value) { return leaf(std::move(value), false); }

    /// Seeds d(root)/d(root) = 1 and accumulates leaf gradients. Root must
    /// be scalar.
    void backward(Var root);

    // --- used by op implementations ---
    using BackwardFn = std::function<void(Graph&, int node)>;
    Var make(Tensor value, std::vector<int> parents, BackwardFn fn);
    const Tensor& value_of(int node) const;
    Tensor& grad_of(int node);  // allocates zeros on first touch
    bool grad_touched(int node) const;
    bool needs_grad(int node) const;
    int index_of(Var v) const { return v.node_; }
    Var var_at(int node) { return Var(this, node); }

  private:
    struct Node {
        Tensor value;
        Tensor grad;  // empty until touched
        bool requires_grad = false;
        std::vector<int> parents;
        BackwardFn backward;
    };
    std::vector<Node> nodes_;
};

// Elementwise / reductions ------------------------------------------------
Var add(Var a, Var b);
Var sub(Var a, Var b);
Var mul(Var a, Var b);
Var div(Var a, Var b);
Var add_scalar(Var a, double s);
Var mul_scalar(Var a, double s);
Var sum(Var a);
Var mean(Var a);
Var sse(Var a, Var b);  // sum of squared differences (scalar)
Var mse(Var a, Var b);  // mean of squared differences (scalar)

// Activations --------------------------------------------------------------
Var leaky_relu(Var a, double negative_slope);
Var sigmoid(Var a);
Var softmax_flat(Var a);  // normalized exponentials over all entries

// Shape --------------------------------------------------------------------
Var reshape(Var a, std::vector<int> shape);
Var concat_ch(Var a, Var b);                 // rank-3, along channel dim
Var circshift2d(Var a, int dy, int dx);      // rank-2, wraps around

// Network layers -----------------------------------------------------------
Var linear(Var x, Var w, Var b);  // x {in}, w {out,in}, b {out}
Var conv2d(Var x, Var w, Var b, int stride, kernels::Pad pad);
Var instance_norm(Var x, Var gamma, Var beta, double eps);
Var resize_bilinear(Var x, int out_h, int out_w);

// Frequency-domain ops -------------------------------------------------------
/// Periodic convolution of image {H,W} with centered kernel {n,n}; gradients
/// flow to both inputs through the spectral product.
Var circ_conv(Var image, Var kernel);
/// Wiener deconvolution of a fixed blurred field against a free kernel
/// variable; differentiable through the regularized spectral division.
Var wiener(const Tensor& blurred, Var kernel, double c);

// Separable valid-window filtering (constant window), for SSIM ---------------
Var sep_filter_valid(Var x, const std::vector<double>& window);

/// Mean SSIM between x and a fixed reference, Gaussian 11x11 window
/// (sigma 1.5), standard stability constants, unit dynamic range.
Var ssim_mean(Var x, Var y);

}  // namespace wdip::ad
