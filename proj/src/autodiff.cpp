/* SPDX-FileCopyrightText: 2026 The wdip authors
 * SPDX-License-Identifier: Apache-2.0 */
#include "wdip/autodiff.hpp"

#include <cmath>
#include <complex>

#include "wdip/errors.hpp"
#include "wdip/fft.hpp"

namespace wdip::ad {

const Tensor& Var::value() const { return graph_->value_of(node_); }
const Tensor& Var::grad() const { return const_cast<Graph*>(graph_)->grad_of(node_); }

Var Graph::leaf(Tensor value, bool requires_grad) {
    Node n;
    n.value = std::move(value);
    n.requires_grad = requires_grad;
    nodes_.push_back(std::move(n));
    return Var(this, static_cast<int>(nodes_.size()) - 1);
}

Var Graph::make(Tensor value, std::vector<int> parents, BackwardFn fn) {
    Node n;
    n.value = std::move(value);
    for (int p : parents) n.requires_grad = n.requires_grad || nodes_[p].requires_grad;
    n.parents = std::move(parents);
    if (n.requires_grad) n.backward = std::move(fn);
    nodes_.push_back(std::move(n));
    return Var(this, static_cast<int>(nodes_.size()) - 1);
}

const Tensor& Graph::value_of(int node) const { return nodes_[node].value; }

Tensor& Graph::grad_of(int node) {
    Node& n = nodes_[node];
    if (n.grad.size() == 0) n.grad = Tensor(n.value.shape(), 0.0);
    return n.grad;
}

bool Graph::grad_touched(int node) const { return nodes_[node].grad.size() != 0; }
bool Graph::needs_grad(int node) const { return nodes_[node].requires_grad; }

void Graph::backward(Var root) {
    const int r = root.node_;
    if (nodes_[r].value.size() != 1) throw DimensionError("backward: root not scalar");
    if (!nodes_[r].requires_grad) return;
    grad_of(r)[0] = 1.0;
    for (int i = r; i >= 0; --i) {
        Node& n = nodes_[i];
        if (!n.requires_grad || n.grad.size() == 0 || !n.backward) continue;
        n.backward(*this, i);
    }
}

namespace {

int idx(Var v) { return v.graph()->index_of(v); }

Graph& same_graph(Var a, Var b) {
    if (a.graph() != b.graph()) throw Error("vars belong to different graphs");
    return *a.graph();
}

void check_shapes(Var a, Var b, const char* what) {
    if (!a.value().same_shape(b.value()))
        throw DimensionError(std::string(what) + ": shape mismatch");
}

SpectralField fft2(const Tensor& t) {
    return fft::forward(t.data(), t.dim(0), t.dim(1));
}

Tensor ifft2_real(const SpectralField& s) {
    Tensor out({s.height, s.width});
    fft::inverse_real(s, out.data());
    return out;
}

Tensor embed_tensor(const Tensor& k, int h, int w) {
    const int n = k.dim(0);
    const int c = (n - 1) / 2;
    Tensor field({h, w}, 0.0);
    for (int y = 0; y < n; ++y) {
        for (int x = 0; x < n; ++x) {
            const int fy = ((y - c) % h + h) % h;
            const int fx = ((x - c) % w + w) % w;
            field[static_cast<std::size_t>(fy) * w + fx] +=
                k[static_cast<std::size_t>(y) * n + x];
        }
    }
    return field;
}

void gather_embedded(const Tensor& field, Tensor& gk) {
    const int n = gk.dim(0);
    const int h = field.dim(0), w = field.dim(1);
    const int c = (n - 1) / 2;
    for (int y = 0; y < n; ++y) {
        for (int x = 0; x < n; ++x) {
            const int fy = ((y - c) % h + h) % h;
            const int fx = ((x - c) % w + w) % w;
            gk[static_cast<std::size_t>(y) * n + x] +=
                field[static_cast<std::size_t>(fy) * w + fx];
        }
    }
}

}  // namespace

// ---------------------------------------------------------------------------
// Elementwise / reductions

Var add(Var a, Var b) {
    Graph& g = same_graph(a, b);
    check_shapes(a, b, "add");
    Tensor out = a.value();
    kernels::axpy(1.0, b.value().data(), out.data(), out.size());
    const int pa = idx(a), pb = idx(b);
    return g.make(std::move(out), {pa, pb}, [pa, pb](Graph& g, int self) {
        const Tensor& go = g.grad_of(self);
        for (int p : {pa, pb})
            if (g.needs_grad(p))
                kernels::axpy(1.0, go.data(), g.grad_of(p).data(), go.size());
    });
}

Var sub(Var a, Var b) {
    Graph& g = same_graph(a, b);
    check_shapes(a, b, "sub");
    Tensor out = a.value();
    kernels::axpy(-1.0, b.value().data(), out.data(), out.size());
    const int pa = idx(a), pb = idx(b);
    return g.make(std::move(out), {pa, pb}, [pa, pb](Graph& g, int self) {
        const Tensor& go = g.grad_of(self);
        if (g.needs_grad(pa))
            kernels::axpy(1.0, go.data(), g.grad_of(pa).data(), go.size());
        if (g.needs_grad(pb))
            kernels::axpy(-1.0, go.data(), g.grad_of(pb).data(), go.size());
    });
}

Var mul(Var a, Var b) {
    Graph& g = same_graph(a, b);
    check_shapes(a, b, "mul");
    Tensor out(a.value().shape());
    kernels::vmul(a.value().data(), b.value().data(), out.data(), out.size());
    const int pa = idx(a), pb = idx(b);
    return g.make(std::move(out), {pa, pb}, [pa, pb](Graph& g, int self) {
        const Tensor& go = g.grad_of(self);
        const Tensor& va = g.value_of(pa);
        const Tensor& vb = g.value_of(pb);
        if (g.needs_grad(pa)) {
            Tensor& gp = g.grad_of(pa);
            for (std::size_t i = 0; i < go.size(); ++i) gp[i] += go[i] * vb[i];
        }
        if (g.needs_grad(pb)) {
            Tensor& gp = g.grad_of(pb);
            for (std::size_t i = 0; i < go.size(); ++i) gp[i] += go[i] * va[i];
        }
    });
}

Var div(Var a, Var b) {
    Graph& g = same_graph(a, b);
    check_shapes(a, b, "div");
    Tensor out(a.value().shape());
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = a.value()[i] / b.value()[i];
    const int pa = idx(a), pb = idx(b);
    return g.make(std::move(out), {pa, pb}, [pa, pb](Graph& g, int self) {
        const Tensor& go = g.grad_of(self);
        const Tensor& vo = g.value_of(self);
        const Tensor& vb = g.value_of(pb);
        if (g.needs_grad(pa)) {
            Tensor& gp = g.grad_of(pa);
            for (std::size_t i = 0; i < go.size(); ++i) gp[i] += go[i] / vb[i];
        }
        if (g.needs_grad(pb)) {
            Tensor& gp = g.grad_of(pb);
            for (std::size_t i = 0; i < go.size(); ++i)
                gp[i] -= go[i] * vo[i] / vb[i];
        }
    });
}

Var add_scalar(Var a, double s) {
    Graph& g = *a.graph();
    Tensor out = a.value();
    for (std::size_t i = 0; i < out.size(); ++i) out[i] += s;
    const int pa = idx(a);
    return g.make(std::move(out), {pa}, [pa](Graph& g, int self) {
        const Tensor& go = g.grad_of(self);
        if (g.needs_grad(pa))
            kernels::axpy(1.0, go.data(), g.grad_of(pa).data(), go.size());
    });
}

Var mul_scalar(Var a, double s) {
    Graph& g = *a.graph();
    Tensor out(a.value().shape());
    kernels::vscale(a.value().data(), s, out.data(), out.size());
    const int pa = idx(a);
    return g.make(std::move(out), {pa}, [pa, s](Graph& g, int self) {
        const Tensor& go = g.grad_of(self);
        if (g.needs_grad(pa))
            kernels::axpy(s, go.data(), g.grad_of(pa).data(), go.size());
    });
}

Var sum(Var a) {
    Graph& g = *a.graph();
    Tensor out = Tensor::scalar(kernels::reduce_sum(a.value().data(), a.value().size()));
    const int pa = idx(a);
    return g.make(std::move(out), {pa}, [pa](Graph& g, int self) {
        const double go = g.grad_of(self)[0];
        if (!g.needs_grad(pa)) return;
        Tensor& gp = g.grad_of(pa);
        for (std::size_t i = 0; i < gp.size(); ++i) gp[i] += go;
    });
}

Var mean(Var a) {
    return mul_scalar(sum(a), 1.0 / static_cast<double>(a.value().size()));
}

namespace {

Var squared_diff_reduce(Var a, Var b, bool take_mean) {
    Graph& g = same_graph(a, b);
    check_shapes(a, b, "sse/mse");
    const Tensor& va = a.value();
    const Tensor& vb = b.value();
    Tensor sq(va.shape());
    for (std::size_t i = 0; i < sq.size(); ++i) {
        const double d = va[i] - vb[i];
        sq[i] = d * d;
    }
    double total = kernels::reduce_sum(sq.data(), sq.size());
    const double scale = take_mean ? 1.0 / static_cast<double>(sq.size()) : 1.0;
    const int pa = idx(a), pb = idx(b);
    return g.make(Tensor::scalar(total * scale), {pa, pb},
                  [pa, pb, scale](Graph& g, int self) {
                      const double go = g.grad_of(self)[0];
                      const Tensor& va = g.value_of(pa);
                      const Tensor& vb = g.value_of(pb);
                      const double c = 2.0 * go * scale;
                      if (g.needs_grad(pa)) {
                          Tensor& gp = g.grad_of(pa);
                          for (std::size_t i = 0; i < gp.size(); ++i)
                              gp[i] += c * (va[i] - vb[i]);
                      }
                      if (g.needs_grad(pb)) {
                          Tensor& gp = g.grad_of(pb);
                          for (std::size_t i = 0; i < gp.size(); ++i)
                              gp[i] -= c * (va[i] - vb[i]);
                      }
                  });
}

}  // namespace

Var sse(Var a, Var b) { return squared_diff_reduce(a, b, false); }
Var mse(Var a, Var b) { return squared_diff_reduce(a, b, true); }

// ---------------------------------------------------------------------------
// Activations

Var leaky_relu(Var a, double negative_slope) {
    Graph& g = *a.graph();
    Tensor out(a.value().shape());
    const Tensor& v = a.value();
    for (std::size_t i = 0; i < out.size(); ++i)
        out[i] = v[i] > 0.0 ? v[i] : negative_slope * v[i];
    const int pa = idx(a);
    return g.make(std::move(out), {pa}, [pa, negative_slope](Graph& g, int self) {
        if (!g.needs_grad(pa)) return;
        const Tensor& go = g.grad_of(self);
        const Tensor& v = g.value_of(pa);
        Tensor& gp = g.grad_of(pa);
        for (std::size_t i = 0; i < go.size(); ++i)
            gp[i] += go[i] * (v[i] > 0.0 ? 1.0 : negative_slope);
    });
}

Var sigmoid(Var a) {
    Graph& g = *a.graph();
    Tensor out(a.value().shape());
    const Tensor& v = a.value();
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = 1.0 / (1.0 + std::exp(-v[i]));
    const int pa = idx(a);
    return g.make(std::move(out), {pa}, [pa](Graph& g, int self) {
        if (!g.needs_grad(pa)) return;
        const Tensor& go = g.grad_of(self);
        const Tensor& y = g.value_of(self);
        Tensor& gp = g.grad_of(pa);
        for (std::size_t i = 0; i < go.size(); ++i)
            gp[i] += go[i] * y[i] * (1.0 - y[i]);
    });
}

Var softmax_flat(Var a) {
    Graph& g = *a.graph();
    const Tensor& v = a.value();
    double vmax = v[0];
    for (std::size_t i = 1; i < v.size(); ++i) vmax = std::max(vmax, v[i]);
    Tensor out(v.shape());
    double total = 0.0;
    for (std::size_t i = 0; i < v.size(); ++i) {
        out[i] = std::exp(v[i] - vmax);
        total += out[i];
    }
    for (std::size_t i = 0; i < v.size(); ++i) out[i] /= total;
    const int pa = idx(a);
    return g.make(std::move(out), {pa}, [pa](Graph& g, int self) {
        if (!g.needs_grad(pa)) return;
        const Tensor& go = g.grad_of(self);
        const Tensor& y = g.value_of(self);
        double dot = 0.0;
        for (std::size_t i = 0; i < go.size(); ++i) dot += go[i] * y[i];
        Tensor& gp = g.grad_of(pa);
        for (std::size_t i = 0; i < go.size(); ++i) gp[i] += y[i] * (go[i] - dot);
    });
}

// ---------------------------------------------------------------------------
// Shape

Var reshape(Var a, std::vector<int> shape) {
    Graph& g = *a.graph();
    Tensor out = a.value().reshaped(shape);
    const int pa = idx(a);
    return g.make(std::move(out), {pa}, [pa](Graph& g, int self) {
        if (!g.needs_grad(pa)) return;
        const Tensor& go = g.grad_of(self);
        Tensor& gp = g.grad_of(pa);
        kernels::axpy(1.0, go.data(), gp.data(), go.size());
    });
}

Var concat_ch(Var a, Var b) {
    Graph& g = same_graph(a, b);
    const Tensor& va = a.value();
    const Tensor& vb = b.value();
    if (va.rank() != 3 || vb.rank() != 3 || va.dim(1) != vb.dim(1) ||
        va.dim(2) != vb.dim(2))
        throw DimensionError("concat_ch: incompatible shapes");
    Tensor out({va.dim(0) + vb.dim(0), va.dim(1), va.dim(2)});
    std::copy(va.data(), va.data() + va.size(), out.data());
    std::copy(vb.data(), vb.data() + vb.size(), out.data() + va.size());
    const int pa = idx(a), pb = idx(b);
    const std::size_t na = va.size();
    return g.make(std::move(out), {pa, pb}, [pa, pb, na](Graph& g, int self) {
        const Tensor& go = g.grad_of(self);
        if (g.needs_grad(pa))
            kernels::axpy(1.0, go.data(), g.grad_of(pa).data(), na);
        if (g.needs_grad(pb))
            kernels::axpy(1.0, go.data() + na, g.grad_of(pb).data(), go.size() - na);
    });
}

namespace {

Tensor circshift_tensor(const Tensor& t, int dy, int dx) {
    const int h = t.dim(0), w = t.dim(1);
    Tensor out(t.shape());
    for (int y = 0; y < h; ++y) {
        const int sy = ((y - dy) % h + h) % h;
        for (int x = 0; x < w; ++x) {
            const int sx = ((x - dx) % w + w) % w;
            out[static_cast<std::size_t>(y) * w + x] =
                t[static_cast<std::size_t>(sy) * w + sx];
        }
    }
    return out;
}

}  // namespace

Var circshift2d(Var a, int dy, int dx) {
    Graph& g = *a.graph();
    if (a.value().rank() != 2) throw DimensionError("circshift2d: rank-2 only");
    Tensor out = circshift_tensor(a.value(), dy, dx);
    const int pa = idx(a);
    return g.make(std::move(out), {pa}, [pa, dy, dx](Graph& g, int self) {
        if (!g.needs_grad(pa)) return;
        Tensor back = circshift_tensor(g.grad_of(self), -dy, -dx);
        kernels::axpy(1.0, back.data(), g.grad_of(pa).data(), back.size());
    });
}

// ---------------------------------------------------------------------------
// Network layers

Var linear(Var x, Var w, Var b) {
    Graph& g = same_graph(x, w);
    const Tensor& vx = x.value();
    const Tensor& vw = w.value();
    if (vx.rank() != 1 || vw.rank() != 2 || vw.dim(1) != vx.dim(0))
        throw DimensionError("linear: shape mismatch");
    const int in_dim = vx.dim(0), out_dim = vw.dim(0);
    Tensor out({out_dim});
    const double* bias = nullptr;
    int pb = -1;
    if (b.defined()) {
        same_graph(x, b);
        bias = b.value().data();
        pb = idx(b);
    }
    kernels::linear_forward(vx.data(), vw.data(), bias, out.data(), in_dim, out_dim);
    const int px = idx(x), pw = idx(w);
    std::vector<int> parents{px, pw};
    if (pb >= 0) parents.push_back(pb);
    return g.make(std::move(out), std::move(parents),
                  [px, pw, pb, in_dim, out_dim](Graph& g, int self) {
                      const Tensor& go = g.grad_of(self);
                      double* gx =
                          g.needs_grad(px) ? g.grad_of(px).data() : nullptr;
                      double* gw =
                          g.needs_grad(pw) ? g.grad_of(pw).data() : nullptr;
                      double* gb = (pb >= 0 && g.needs_grad(pb))
                                       ? g.grad_of(pb).data()
                                       : nullptr;
                      kernels::linear_grad(go.data(), g.value_of(px).data(),
                                           g.value_of(pw).data(), gx, gw, gb, in_dim,
                                           out_dim);
                  });
}

Var conv2d(Var x, Var w, Var b, int stride, kernels::Pad pad) {
    Graph& g = same_graph(x, w);
    const Tensor& vx = x.value();
    const Tensor& vw = w.value();
    if (vx.rank() != 3 || vw.rank() != 4 || vw.dim(1) != vx.dim(0))
        throw DimensionError("conv2d: shape mismatch");
    kernels::ConvSpec spec;
    spec.in_ch = vx.dim(0);
    spec.in_h = vx.dim(1);
    spec.in_w = vx.dim(2);
    spec.out_ch = vw.dim(0);
    spec.k_h = vw.dim(2);
    spec.k_w = vw.dim(3);
    spec.stride = stride;
    spec.pad = pad;

    const double* bias = nullptr;
    int pb = -1;
    if (b.defined()) {
        same_graph(x, b);
        bias = b.value().data();
        pb = idx(b);
    }
    Tensor out({spec.out_ch, spec.out_h(), spec.out_w()});
    kernels::conv2d_forward(vx.data(), vw.data(), bias, out.data(), spec);
    const int px = idx(x), pw = idx(w);
    std::vector<int> parents{px, pw};
    if (pb >= 0) parents.push_back(pb);
    return g.make(std::move(out), std::move(parents),
                  [px, pw, pb, spec](Graph& g, int self) {
                      const Tensor& go = g.grad_of(self);
                      if (g.needs_grad(px))
                          kernels::conv2d_grad_input(go.data(),
                                                     g.value_of(pw).data(),
                                                     g.grad_of(px).data(), spec);
                      const bool need_w = g.needs_grad(pw);
                      const bool need_b = pb >= 0 && g.needs_grad(pb);
                      if (need_w || need_b)
                          kernels::conv2d_grad_weights(
                              go.data(), g.value_of(px).data(),
                              need_w ? g.grad_of(pw).data() : nullptr,
                              need_b ? g.grad_of(pb).data() : nullptr, spec);
                  });
}

Var instance_norm(Var x, Var gamma, Var beta, double eps) {
    Graph& g = same_graph(x, gamma);
    same_graph(x, beta);
    const Tensor& vx = x.value();
    if (vx.rank() != 3) throw DimensionError("instance_norm: rank-3 input");
    const int ch = vx.dim(0);
    if (gamma.value().size() != static_cast<std::size_t>(ch) ||
        beta.value().size() != static_cast<std::size_t>(ch))
        throw DimensionError("instance_norm: affine size mismatch");
    const std::size_t plane = static_cast<std::size_t>(vx.dim(1)) * vx.dim(2);

    Tensor out(vx.shape());
    Tensor xhat(vx.shape());
    std::vector<double> inv_std(ch);
    for (int c = 0; c < ch; ++c) {
        const double* p = vx.data() + c * plane;
        double mu = kernels::reduce_sum(p, plane) / static_cast<double>(plane);
        double var = 0.0;
        for (std::size_t i = 0; i < plane; ++i) {
            const double d = p[i] - mu;
            var += d * d;
        }
        var /= static_cast<double>(plane);
        const double is = 1.0 / std::sqrt(var + eps);
        inv_std[c] = is;
        const double gam = gamma.value()[c], bet = beta.value()[c];
        double* xh = xhat.data() + c * plane;
        double* o = out.data() + c * plane;
        for (std::size_t i = 0; i < plane; ++i) {
            xh[i] = (p[i] - mu) * is;
            o[i] = gam * xh[i] + bet;
        }
    }
    const int px = idx(x), pg = idx(gamma), pbta = idx(beta);
    return g.make(
        std::move(out), {px, pg, pbta},
        [px, pg, pbta, xhat = std::move(xhat), inv_std = std::move(inv_std), ch,
         plane](Graph& g, int self) {
            const Tensor& go = g.grad_of(self);
            const Tensor& vgamma = g.value_of(pg);
            for (int c = 0; c < ch; ++c) {
                const double* gp = go.data() + c * plane;
                const double* xh = xhat.data() + c * plane;
                double sum_g = 0.0, sum_gx = 0.0;
                for (std::size_t i = 0; i < plane; ++i) {
                    sum_g += gp[i];
                    sum_gx += gp[i] * xh[i];
                }
                if (g.needs_grad(pg)) g.grad_of(pg)[c] += sum_gx;
                if (g.needs_grad(pbta)) g.grad_of(pbta)[c] += sum_g;
                if (g.needs_grad(px)) {
                    const double m = static_cast<double>(plane);
                    const double k = vgamma[c] * inv_std[c];
                    double* gx = g.grad_of(px).data() + c * plane;
                    for (std::size_t i = 0; i < plane; ++i)
                        gx[i] += k * (gp[i] - sum_g / m - xh[i] * sum_gx / m);
                }
            }
        });
}

Var resize_bilinear(Var x, int out_h, int out_w) {
    Graph& g = *x.graph();
    const Tensor& vx = x.value();
    if (vx.rank() != 3) throw DimensionError("resize_bilinear: rank-3 input");
    const int ch = vx.dim(0), ih = vx.dim(1), iw = vx.dim(2);
    Tensor out({ch, out_h, out_w});
    kernels::resize_bilinear_forward(vx.data(), out.data(), ch, ih, iw, out_h, out_w);
    const int px = idx(x);
    return g.make(std::move(out), {px},
                  [px, ch, ih, iw, out_h, out_w](Graph& g, int self) {
                      if (!g.needs_grad(px)) return;
                      kernels::resize_bilinear_backward(g.grad_of(self).data(),
                                                        g.grad_of(px).data(), ch, ih,
                                                        iw, out_h, out_w);
                  });
}

// ---------------------------------------------------------------------------
// Frequency-domain ops

Var circ_conv(Var image, Var kernel) {
    Graph& g = same_graph(image, kernel);
    const Tensor& vi = image.value();
    const Tensor& vk = kernel.value();
    if (vi.rank() != 2 || vk.rank() != 2 || vk.dim(0) != vk.dim(1))
        throw DimensionError("circ_conv: image {H,W}, kernel {n,n}");
    const int h = vi.dim(0), w = vi.dim(1);
    if (vk.dim(0) > std::min(h, w)) throw DimensionError("circ_conv: kernel too big");

    SpectralField X = fft2(vi);
    SpectralField K = fft2(embed_tensor(vk, h, w));
    SpectralField Y;
    Y.height = h;
    Y.width = w;
    Y.bins.resize(X.size());
    for (std::size_t i = 0; i < X.size(); ++i) Y.bins[i] = X.bins[i] * K.bins[i];
    Tensor out = ifft2_real(Y);

    const int pi = idx(image), pk = idx(kernel);
    return g.make(std::move(out), {pi, pk},
                  [pi, pk, X = std::move(X), K = std::move(K)](Graph& g, int self) {
                      SpectralField C = fft2(g.grad_of(self));
                      if (g.needs_grad(pi)) {
                          SpectralField t = C;
                          for (std::size_t i = 0; i < t.size(); ++i)
                              t.bins[i] *= std::conj(K.bins[i]);
                          Tensor gx = ifft2_real(t);
                          kernels::axpy(1.0, gx.data(), g.grad_of(pi).data(),
                                        gx.size());
                      }
                      if (g.needs_grad(pk)) {
                          SpectralField t = C;
                          for (std::size_t i = 0; i < t.size(); ++i)
                              t.bins[i] *= std::conj(X.bins[i]);
                          Tensor ge = ifft2_real(t);
                          gather_embedded(ge, g.grad_of(pk));
                      }
                  });
}

Var wiener(const Tensor& blurred, Var kernel, double c) {
    Graph& g = *kernel.graph();
    const Tensor& vk = kernel.value();
    if (blurred.rank() != 2 || vk.rank() != 2 || vk.dim(0) != vk.dim(1))
        throw DimensionError("wiener: blurred {H,W}, kernel {n,n}");
    const int h = blurred.dim(0), w = blurred.dim(1);
    if (vk.dim(0) > std::min(h, w)) throw DimensionError("wiener: kernel too big");
    if (c < 0.0) throw ConfigError("wiener: c must be >= 0");

    SpectralField B = fft2(blurred);
    SpectralField K = fft2(embed_tensor(vk, h, w));
    if (c == 0.0) {
        double min_power = std::norm(K.bins[0]);
        for (const auto& b : K.bins) min_power = std::min(min_power, std::norm(b));
        if (min_power <= 1e-24)
            throw SingularSpectrumError("wiener: c = 0 with singular kernel spectrum");
    }
    SpectralField W;
    W.height = h;
    W.width = w;
    W.bins.resize(B.size());
    for (std::size_t i = 0; i < B.size(); ++i) {
        const std::complex<double> k = K.bins[i];
        W.bins[i] = std::conj(k) * B.bins[i] / (std::norm(k) + c);
    }
    Tensor out = ifft2_real(W);

    const int pk = idx(kernel);
    return g.make(
        std::move(out), {pk},
        [pk, B = std::move(B), K = std::move(K), c](Graph& g, int self) {
            if (!g.needs_grad(pk)) return;
            SpectralField C = fft2(g.grad_of(self));
            SpectralField t;
            t.height = B.height;
            t.width = B.width;
            t.bins.resize(B.size());
            for (std::size_t i = 0; i < B.size(); ++i) {
                const std::complex<double> k = K.bins[i];
                const std::complex<double> b = B.bins[i];
                const double d = std::norm(k) + c;
                const std::complex<double> cw = C.bins[i];
                t.bins[i] = (std::conj(cw) * b * c - cw * k * k * std::conj(b)) /
                            (d * d);
            }
            Tensor ge = ifft2_real(t);
            gather_embedded(ge, g.grad_of(pk));
        });
}

// ---------------------------------------------------------------------------
// Separable valid filtering and SSIM

Var sep_filter_valid(Var x, const std::vector<double>& window) {
    Graph& g = *x.graph();
    const Tensor& vx = x.value();
    if (vx.rank() != 2) throw DimensionError("sep_filter_valid: rank-2 input");
    const int h = vx.dim(0), w = vx.dim(1);
    const int k = static_cast<int>(window.size());
    if (h < k || w < k) throw DimensionError("sep_filter_valid: window too big");
    const int oh = h - k + 1, ow = w - k + 1;

    // rows first (along x), then columns
    std::vector<double> tmp(static_cast<std::size_t>(h) * ow);
    for (int y = 0; y < h; ++y)
        for (int ox = 0; ox < ow; ++ox) {
            double acc = 0.0;
            for (int j = 0; j < k; ++j)
                acc += window[j] * vx[static_cast<std::size_t>(y) * w + ox + j];
            tmp[static_cast<std::size_t>(y) * ow + ox] = acc;
        }
    Tensor out({oh, ow});
    for (int oy = 0; oy < oh; ++oy)
        for (int ox = 0; ox < ow; ++ox) {
            double acc = 0.0;
            for (int j = 0; j < k; ++j)
                acc += window[j] * tmp[static_cast<std::size_t>(oy + j) * ow + ox];
            out[static_cast<std::size_t>(oy) * ow + ox] = acc;
        }

    const int px = idx(x);
    return g.make(std::move(out), {px}, [px, window, h, w, oh, ow](Graph& g,
                                                                   int self) {
        if (!g.needs_grad(px)) return;
        const Tensor& go = g.grad_of(self);
        const int k = static_cast<int>(window.size());
        std::vector<double> gtmp(static_cast<std::size_t>(h) * ow, 0.0);
        for (int oy = 0; oy < oh; ++oy)
            for (int ox = 0; ox < ow; ++ox) {
                const double gv = go[static_cast<std::size_t>(oy) * ow + ox];
                for (int j = 0; j < k; ++j)
                    gtmp[static_cast<std::size_t>(oy + j) * ow + ox] += window[j] * gv;
            }
        Tensor& gx = g.grad_of(px);
        for (int y = 0; y < h; ++y)
            for (int ox = 0; ox < ow; ++ox) {
                const double gv = gtmp[static_cast<std::size_t>(y) * ow + ox];
                for (int j = 0; j < k; ++j)
                    gx[static_cast<std::size_t>(y) * w + ox + j] += window[j] * gv;
            }
    });
}

namespace {

std::vector<double> gaussian_window(int size, double sigma) {
    std::vector<double> w(size);
    const double c = (size - 1) / 2.0;
    double total = 0.0;
    for (int i = 0; i < size; ++i) {
        w[i] = std::exp(-0.5 * (i - c) * (i - c) / (sigma * sigma));
        total += w[i];
    }
    for (double& v : w) v /= total;
    return w;
}

}  // namespace

Var ssim_mean(Var x, Var y) {
    Graph& g = same_graph(x, y);
    check_shapes(x, y, "ssim_mean");
    static const std::vector<double> win = gaussian_window(11, 1.5);
    constexpr double c1 = 0.01 * 0.01;
    constexpr double c2 = 0.03 * 0.03;

    Var mu_x = sep_filter_valid(x, win);
    Var mu_y = sep_filter_valid(y, win);
    Var mu_xx = mul(mu_x, mu_x);
    Var mu_yy = mul(mu_y, mu_y);
    Var mu_xy = mul(mu_x, mu_y);
    Var sigma_x = sub(sep_filter_valid(mul(x, x), win), mu_xx);
    Var sigma_y = sub(sep_filter_valid(mul(y, y), win), mu_yy);
    Var sigma_xy = sub(sep_filter_valid(mul(x, y), win), mu_xy);

    Var num = mul(add_scalar(mul_scalar(mu_xy, 2.0), c1),
                  add_scalar(mul_scalar(sigma_xy, 2.0), c2));
    Var den = mul(add_scalar(add(mu_xx, mu_yy), c1),
                  add_scalar(add(sigma_x, sigma_y), c2));
    return mean(div(num, den));
}

}  // namespace wdip::ad
