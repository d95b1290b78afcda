/* SPDX-FileCopyrightText: 2026 The wdip authors
 * SPDX-License-Identifier: Apache-2.0 */
#include "wdip/nets.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <ostream>

namespace wdip::nets {

namespace {

// Seed streams so latents stay identical across architecture changes.
constexpr std::uint64_t kStreamLatents = 0;
constexpr std::uint64_t kStreamImageNet = 1;
constexpr std::uint64_t kStreamKernelNet = 2;

Tensor uniform_tensor(std::vector<int> shape, Rng& rng, double lo, double hi) {
    Tensor t(std::move(shape));
    for (std::size_t i = 0; i < t.size(); ++i) t[i] = rng.uniform(lo, hi);
    return t;
}

// U(-1/sqrt(fan_in), 1/sqrt(fan_in)) for weights and biases.
Tensor fan_in_init(std::vector<int> shape, int fan_in, Rng& rng) {
    const double bound = 1.0 / std::sqrt(static_cast<double>(fan_in));
    return uniform_tensor(std::move(shape), rng, -bound, bound);
}

struct ConvBlockVars {
    ad::Var w, b, gamma, beta;
};

void add_conv_block(ParamSet& p, const std::string& name, int in_ch, int out_ch,
                    int k, Rng& rng) {
    const int fan_in = in_ch * k * k;
    p.add(name + ".w", fan_in_init({out_ch, in_ch, k, k}, fan_in, rng));
    p.add(name + ".b", fan_in_init({out_ch}, fan_in, rng));
    p.add(name + ".gamma", Tensor({out_ch}, 1.0));
    p.add(name + ".beta", Tensor({out_ch}, 0.0));
}

/// Binds the next four tensors of a ParamSet as graph leaves.
class ParamBinder {
  public:
    ParamBinder(ad::Graph& g, const ParamSet& params, bool requires_grad,
                std::vector<ad::Var>* out)
        : g_(g), params_(params), requires_grad_(requires_grad), out_(out) {}

    ad::Var next() {
        ad::Var v = g_.leaf(params_.tensors[cursor_++], requires_grad_);
        if (out_) out_->push_back(v);
        return v;
    }

    ConvBlockVars next_block() {
        ConvBlockVars vars;
        vars.w = next();
        vars.b = next();
        vars.gamma = next();
        vars.beta = next();
        return vars;
    }

  private:
    ad::Graph& g_;
    const ParamSet& params_;
    bool requires_grad_;
    std::vector<ad::Var>* out_;
    std::size_t cursor_ = 0;
};

ad::Var conv_in_act(ad::Var x, const ConvBlockVars& p, int stride, double slope) {
    ad::Var y = ad::conv2d(x, p.w, p.b, stride, kernels::Pad::Reflect);
    y = ad::instance_norm(y, p.gamma, p.beta, 1e-5);
    return ad::leaky_relu(y, slope);
}

}  // namespace

std::size_t ParamSet::total_values() const {
    std::size_t n = 0;
    for (const Tensor& t : tensors) n += t.size();
    return n;
}

bool ParamSet::all_finite() const {
    for (const Tensor& t : tensors)
        for (std::size_t i = 0; i < t.size(); ++i)
            if (!std::isfinite(t[i])) return false;
    return true;
}

void ParamSet::serialize(std::ostream& out) const {
    const std::uint32_t count = static_cast<std::uint32_t>(tensors.size());
    out.write(reinterpret_cast<const char*>(&count), sizeof(count));
    for (const Tensor& t : tensors) {
        const std::uint32_t rank = static_cast<std::uint32_t>(t.rank());
        out.write(reinterpret_cast<const char*>(&rank), sizeof(rank));
        for (int d : t.shape()) {
            const std::int32_t dim = d;
            out.write(reinterpret_cast<const char*>(&dim), sizeof(dim));
        }
        out.write(reinterpret_cast<const char*>(t.data()),
                  static_cast<std::streamsize>(t.size() * sizeof(double)));
    }
}

void ParamSet::deserialize(std::istream& in) {
    std::uint32_t count = 0;
    in.read(reinterpret_cast<char*>(&count), sizeof(count));
    if (count != tensors.size())
        throw IoError("checkpoint parameter count mismatch");
    for (Tensor& t : tensors) {
        std::uint32_t rank = 0;
        in.read(reinterpret_cast<char*>(&rank), sizeof(rank));
        std::vector<int> shape(rank);
        for (auto& d : shape) {
            std::int32_t dim = 0;
            in.read(reinterpret_cast<char*>(&dim), sizeof(dim));
            d = dim;
        }
        if (shape != t.shape()) throw IoError("checkpoint tensor shape mismatch");
        in.read(reinterpret_cast<char*>(t.data()),
                static_cast<std::streamsize>(t.size() * sizeof(double)));
    }
    if (!in) throw IoError("truncated checkpoint payload");
}

LatentInputs LatentInputs::create(const NetProfile& profile, int height, int width,
                                  std::uint64_t seed) {
    Rng rng(Rng::derive(seed, kStreamLatents));
    LatentInputs l;
    l.seed = seed;
    l.z_image = uniform_tensor({profile.z_channels, height, width}, rng, 0.0, 1.0);
    l.z_kernel = uniform_tensor({profile.z_dim}, rng, 0.0, 1.0);
    return l;
}

ImageGenerator::ImageGenerator(const NetProfile& profile, int out_h, int out_w,
                               Rng& rng)
    : profile_(profile), out_h_(out_h), out_w_(out_w) {
    if (out_h < (1 << profile.scales) || out_w < (1 << profile.scales))
        throw DimensionError("image too small for the configured scale count");
    int in_ch = profile.z_channels;
    for (int s = 1; s <= profile.scales; ++s) {
        const std::string lvl = "enc" + std::to_string(s);
        add_conv_block(params_, lvl + ".down1", in_ch, profile.channels, 3, rng);
        add_conv_block(params_, lvl + ".down2", profile.channels, profile.channels, 3,
                       rng);
        add_conv_block(params_, lvl + ".skip", in_ch, profile.skip_channels, 1, rng);
        in_ch = profile.channels;
    }
    const int cat_ch = profile.channels + profile.skip_channels;
    for (int s = profile.scales; s >= 1; --s) {
        const std::string lvl = "dec" + std::to_string(s);
        params_.add(lvl + ".cat.gamma", Tensor({cat_ch}, 1.0));
        params_.add(lvl + ".cat.beta", Tensor({cat_ch}, 0.0));
        add_conv_block(params_, lvl + ".conv1", cat_ch, profile.channels, 3, rng);
        add_conv_block(params_, lvl + ".conv2", profile.channels, profile.channels, 1,
                       rng);
    }
    params_.add("out.w", fan_in_init({1, profile.channels, 1, 1}, profile.channels, rng));
    params_.add("out.b", fan_in_init({1}, profile.channels, rng));
}

ad::Var ImageGenerator::build(ad::Graph& g, const Tensor& z, bool requires_grad,
                              std::vector<ad::Var>* param_vars) const {
    if (z.rank() != 3 || z.dim(0) != profile_.z_channels || z.dim(1) != out_h_ ||
        z.dim(2) != out_w_)
        throw DimensionError("image generator: latent shape mismatch");
    ParamBinder bind(g, params_, requires_grad, param_vars);
    const double slope = profile_.leaky_slope;

    // Encoder; level inputs x[s] live at resolution (h[s], w[s]).
    std::vector<ad::Var> level_input(profile_.scales + 1);
    std::vector<int> hs(profile_.scales + 1), ws(profile_.scales + 1);
    level_input[0] = g.constant(z);
    hs[0] = out_h_;
    ws[0] = out_w_;
    std::vector<ad::Var> skip_out(profile_.scales);
    ad::Var x = level_input[0];
    for (int s = 0; s < profile_.scales; ++s) {
        ConvBlockVars down1 = bind.next_block();
        ConvBlockVars down2 = bind.next_block();
        ConvBlockVars skip = bind.next_block();
        skip_out[s] = conv_in_act(x, skip, 1, slope);
        x = conv_in_act(x, down1, 2, slope);
        x = conv_in_act(x, down2, 1, slope);
        hs[s + 1] = (hs[s] + 1) / 2;
        ws[s + 1] = (ws[s] + 1) / 2;
        level_input[s + 1] = x;
    }

    // Decoder walks back up through the recorded skip resolutions.
    ad::Var u = level_input[profile_.scales];
    for (int s = profile_.scales - 1; s >= 0; --s) {
        ad::Var cat_gamma = bind.next();
        ad::Var cat_beta = bind.next();
        ConvBlockVars dec1 = bind.next_block();
        ConvBlockVars dec2 = bind.next_block();
        u = ad::resize_bilinear(u, hs[s], ws[s]);
        u = ad::concat_ch(skip_out[s], u);
        u = ad::instance_norm(u, cat_gamma, cat_beta, 1e-5);
        u = conv_in_act(u, dec1, 1, slope);
        u = conv_in_act(u, dec2, 1, slope);
    }
    ad::Var out_w_var = bind.next();
    ad::Var out_b_var = bind.next();
    u = ad::conv2d(u, out_w_var, out_b_var, 1, kernels::Pad::Reflect);
    u = ad::sigmoid(u);
    return ad::reshape(u, {out_h_, out_w_});
}

Tensor ImageGenerator::forward(const Tensor& z) const {
    ad::Graph g;
    return build(g, z, false).value();
}

KernelGenerator::KernelGenerator(const NetProfile& profile, int kernel_size, Rng& rng)
    : profile_(profile), kernel_size_(kernel_size) {
    if (kernel_size < 1 || kernel_size % 2 == 0)
        throw DimensionError("kernel size must be odd");
    const int n2 = kernel_size * kernel_size;
    params_.add("fc1.w", fan_in_init({profile.kernel_hidden, profile.z_dim},
                                     profile.z_dim, rng));
    params_.add("fc1.b", fan_in_init({profile.kernel_hidden}, profile.z_dim, rng));
    params_.add("fc2.w",
                fan_in_init({n2, profile.kernel_hidden}, profile.kernel_hidden, rng));
    params_.add("fc2.b", fan_in_init({n2}, profile.kernel_hidden, rng));
}

ad::Var KernelGenerator::build(ad::Graph& g, const Tensor& z, bool requires_grad,
                               std::vector<ad::Var>* param_vars) const {
    if (z.rank() != 1 || z.dim(0) != profile_.z_dim)
        throw DimensionError("kernel generator: latent shape mismatch");
    ParamBinder bind(g, params_, requires_grad, param_vars);
    ad::Var w1 = bind.next(), b1 = bind.next();
    ad::Var w2 = bind.next(), b2 = bind.next();
    ad::Var h = ad::leaky_relu(ad::linear(g.constant(z), w1, b1),
                               profile_.leaky_slope);
    ad::Var logits = ad::linear(h, w2, b2);
    return ad::reshape(ad::softmax_flat(logits), {kernel_size_, kernel_size_});
}

Tensor KernelGenerator::forward(const Tensor& z) const {
    ad::Graph g;
    return build(g, z, false).value();
}

GeneratorState GeneratorState::create(const NetProfile& profile, int kernel_size,
                                      int height, int width, std::uint64_t seed) {
    GeneratorState state;
    state.profile = profile;
    state.kernel_size = kernel_size;
    state.out_h = height;
    state.out_w = width;
    state.seed = seed;
    state.latents = LatentInputs::create(profile, height, width, seed);
    Rng image_rng(Rng::derive(seed, kStreamImageNet));
    state.image_net = ImageGenerator(profile, height, width, image_rng);
    Rng kernel_rng(Rng::derive(seed, kStreamKernelNet));
    state.kernel_net = KernelGenerator(profile, kernel_size, kernel_rng);
    return state;
}

bool GeneratorState::all_finite() const {
    return image_net.params().all_finite() && kernel_net.params().all_finite();
}

ImageField image_generator_forward(const GeneratorState& state,
                                   const LatentInputs& latents) {
    return tensor_to_image(state.image_net.forward(latents.z_image));
}

Kernel kernel_generator_forward(const GeneratorState& state,
                                const LatentInputs& latents) {
    return tensor_to_kernel(state.kernel_net.forward(latents.z_kernel));
}

Kernel tensor_to_kernel(const Tensor& t) {
    if (t.rank() != 2 || t.dim(0) != t.dim(1))
        throw DimensionError("tensor_to_kernel: expected {n,n}");
    Kernel k(t.dim(0));
    std::copy(t.data(), t.data() + t.size(), k.data());
    return k;
}

Tensor kernel_to_tensor(const Kernel& k) {
    Tensor t({k.size(), k.size()});
    std::copy(k.data(), k.data() + k.count(), t.data());
    return t;
}

Tensor image_to_tensor(const ImageField& image) {
    if (image.channels() != 1)
        throw DimensionError("image_to_tensor: single channel only");
    Tensor t({image.height(), image.width()});
    std::copy(image.data(), image.data() + image.size(), t.data());
    return t;
}

ImageField tensor_to_image(const Tensor& t) {
    if (t.rank() != 2) throw DimensionError("tensor_to_image: expected {H,W}");
    ImageField img(t.dim(0), t.dim(1), 1);
    std::copy(t.data(), t.data() + t.size(), img.data());
    return img;
}

}  // namespace wdip::nets
