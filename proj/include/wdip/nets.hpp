/* SPDX-FileCopyrightText: 2026 The wdip authors
 * SPDX-License-Identifier: Apache-2.0 */
#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "wdip/autodiff.hpp"
#include "wdip/image.hpp"
#include "wdip/rng.hpp"
#include "wdip/tensor.hpp"

namespace wdip::nets {

/// Architecture knobs for both generator networks. `full` mirrors the
/// SelfDeblur reference design; `mini` is the small profile used by the
/// gradient and spectral tests; `desk` sits in between for CPU-scale runs.
struct NetProfile {
    int scales = 5;
    int channels = 128;
    int skip_channels = 16;
    int z_channels = 32;
    int kernel_hidden = 1000;
    int z_dim = 200;
    double leaky_slope = 0.2;

    static NetProfile full() { return NetProfile{}; }
    static NetProfile desk() { return NetProfile{3, 32, 8, 16, 300, 64, 0.2}; }
    static NetProfile mini() { return NetProfile{2, 16, 4, 8, 100, 32, 0.2}; }

    bool operator==(const NetProfile&) const = default;
};

/// Frozen noise inputs; bit-identical for the whole run, regenerable from
/// the seed.
struct LatentInputs {
    Tensor z_image;   // {z_channels, H, W}, U(0,1)
    Tensor z_kernel;  // {z_dim}, U(0,1)
    std::uint64_t seed = 0;

    static LatentInputs create(const NetProfile& profile, int height, int width,
                               std::uint64_t seed);
};

/// Flat named parameter store; binding order and checkpoint order match the
/// registration order.
struct ParamSet {
    std::vector<std::string> names;
    std::vector<Tensor> tensors;

    Tensor& add(std::string name, Tensor t) {
        names.push_back(std::move(name));
        tensors.push_back(std::move(t));
        return tensors.back();
    }
    std::size_t count() const { return tensors.size(); }
    std::size_t total_values() const;
    bool all_finite() const;

    void serialize(std::ostream& out) const;
    void deserialize(std::istream& in);
};

/// Encoder-decoder with skip connections generating the sharp-image estimate;
/// sigmoid head keeps values in (0,1).
class ImageGenerator {
  public:
    ImageGenerator() = default;
    ImageGenerator(const NetProfile& profile, int out_h, int out_w, Rng& rng);

    /// Adds parameter leaves plus the forward graph; returns the {H,W} output.
    /// When `param_vars` is non-null it receives the leaves in ParamSet order.
    ad::Var build(ad::Graph& g, const Tensor& z, bool requires_grad,
                  std::vector<ad::Var>* param_vars = nullptr) const;

    Tensor forward(const Tensor& z) const;

    ParamSet& params() { return params_; }
    const ParamSet& params() const { return params_; }
    int out_h() const { return out_h_; }
    int out_w() const { return out_w_; }
    const NetProfile& profile() const { return profile_; }

  private:
    NetProfile profile_;
    int out_h_ = 0, out_w_ = 0;
    ParamSet params_;
};

/// Fully connected kernel generator; normalized-exponential head keeps the
/// output on the simplex.
class KernelGenerator {
  public:
    KernelGenerator() = default;
    KernelGenerator(const NetProfile& profile, int kernel_size, Rng& rng);

    ad::Var build(ad::Graph& g, const Tensor& z, bool requires_grad,
                  std::vector<ad::Var>* param_vars = nullptr) const;

    Tensor forward(const Tensor& z) const;

    ParamSet& params() { return params_; }
    const ParamSet& params() const { return params_; }
    int kernel_size() const { return kernel_size_; }

  private:
    NetProfile profile_;
    int kernel_size_ = 0;
    ParamSet params_;
};

/// Both networks plus their frozen latents; everything derives from `seed`.
struct GeneratorState {
    NetProfile profile;
    int kernel_size = 0;
    int out_h = 0, out_w = 0;
    std::uint64_t seed = 0;
    LatentInputs latents;
    ImageGenerator image_net;
    KernelGenerator kernel_net;

    static GeneratorState create(const NetProfile& profile, int kernel_size,
                                 int height, int width, std::uint64_t seed);
    bool all_finite() const;
};

ImageField image_generator_forward(const GeneratorState& state,
                                   const LatentInputs& latents);
Kernel kernel_generator_forward(const GeneratorState& state,
                                const LatentInputs& latents);

Kernel tensor_to_kernel(const Tensor& t);
Tensor kernel_to_tensor(const Kernel& k);
Tensor image_to_tensor(const ImageField& image);    // single channel, {H,W}
ImageField tensor_to_image(const Tensor& t);        // {H,W}

}  // namespace wdip::nets
