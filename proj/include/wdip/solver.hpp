/* SPDX-FileCopyrightText: 2026 The wdip authors
 * SPDX-License-Identifier: Apache-2.0 */
#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "wdip/image.hpp"
#include "wdip/nets.hpp"
#include "wdip/objective.hpp"

namespace wdip::solver {

enum class SolveMode { Wdip, SelfDeblur };

struct SolveConfig {
    int iterations = 5000;  // 2000 is enough for the microscopy-style cases
    int kernel_size = 0;
    objective::HQSWeights weights;
    std::uint64_t seed = 0;
    SolveMode mode = SolveMode::Wdip;
    Kernel aux_init;  // required in Wdip mode
    nets::NetProfile profile = nets::NetProfile::full();
    int snapshot_stride = 0;  // 0 disables snapshots
    bool project_aux_nonneg = true;
    // Off by default: the L2 term and the Wiener division regulate the aux
    // kernel's scale; renormalizing every step works against the optimizer.
    bool renormalize_aux = false;
    double lr_net_base = 1e-4;
    double lr_kernel_base = 1e-6;
};

/// Piecewise-constant network learning rate: halves at 2k, 3k and 4k.
double lr_schedule_networks(int iter);

/// Kernel learning rate: starts at 1e-6 and grows tenfold at
/// ceil(70*(n/10)), then after two further gaps of ceil(50*(n/10)).
double lr_schedule_kernel(int iter, int kernel_size);

struct IterationRecord {
    int iter = 0;
    objective::LossBreakdown loss;
    double lr_net = 0.0;
    double lr_kernel = 0.0;
};

struct Snapshot {
    int iter = 0;
    ImageField gen_image;
    Kernel gen_kernel;
    Kernel aux_kernel;
};

struct RunTrace {
    std::vector<IterationRecord> records;
    std::vector<Snapshot> snapshots;

    void write_csv(std::ostream& out) const;
    static const char* csv_header();
};

struct SolveResult {
    ImageField sharp;   // f_theta(z_I), clamped to [0,1] at read-out
    Kernel kernel;      // g_phi(z_k), the reported kernel
    Kernel aux_kernel;  // auxiliary k after nonnegative projection
    RunTrace trace;
};

/// Divergence (non-finite loss) aborts the run; the partial trace rides on
/// the exception so callers can persist it.
struct AbortedRunError : Error {
    AbortedRunError(const std::string& msg, RunTrace partial, int at_iter)
        : Error(msg), trace(std::move(partial)), iteration(at_iter) {}
    RunTrace trace;
    int iteration = 0;
};

struct AdamConfig {
    double beta1 = 0.9;
    double beta2 = 0.999;
    double eps = 1e-8;
};

/// Adam over a fixed list of tensors; moment layout follows the list.
class Adam {
  public:
    Adam() = default;
    explicit Adam(const std::vector<Tensor>& params, AdamConfig cfg = {});
    void step(std::vector<Tensor>& params, const std::vector<Tensor>& grads,
              double lr);
    void serialize(std::ostream& out) const;
    void deserialize(std::istream& in);

  private:
    AdamConfig cfg_;
    std::vector<Tensor> m_, v_;
    long t_ = 0;
};

/// One W-DIP optimization: owns the generator state, the auxiliary kernel
/// and both Adam instances, and exposes the two alternating updates.
class HqsOptimizer {
  public:
    HqsOptimizer(const SolveConfig& config, const ImageField& blurred);

    /// One Adam update of (theta, phi) with the auxiliary kernel fixed.
    /// Returns the loss breakdown evaluated at the pre-update point.
    IterationRecord step_networks();

    /// One Adam update of the auxiliary kernel with (theta, phi) fixed,
    /// followed by the configured projection.
    void step_kernel();

    void next_iteration() { ++iter_; }
    int iteration() const { return iter_; }

    const SolveConfig& config() const { return config_; }
    const nets::GeneratorState& state() const { return gen_; }
    Kernel aux_kernel_raw() const;
    Kernel aux_kernel_readout() const;  // nonnegative projection applied
    ImageField current_image() const;
    Kernel current_kernel() const;

    void save_checkpoint(const std::string& path) const;
    void load_checkpoint(const std::string& path);

  private:
    std::vector<Tensor> collect_params() const;
    void scatter_params(const std::vector<Tensor>& params);

    SolveConfig config_;
    Tensor blurred_;
    nets::GeneratorState gen_;
    Tensor aux_;
    Adam adam_nets_;
    Adam adam_aux_;
    int iter_ = 0;
    bool have_aux_ = false;
};

SolveResult run(const SolveConfig& config, const ImageField& blurred);

// ---------------------------------------------------------------------------
// Single-generator fit, instrumented per spectral band (the mechanism study).

struct DipFitRecord {
    int iter = 0;  // number of updates applied so far
    double mse_full = 0.0;
    double mse_low = 0.0;   // radial band <= 1/8 of Nyquist
    double mse_high = 0.0;  // radial band >= 1/2 of Nyquist
};

struct DipFitTrace {
    std::vector<DipFitRecord> records;  // record 0 is the initial state

    /// First record index with mse_full below the threshold, or -1.
    int first_below_full(double threshold) const;
    int first_below_low(double threshold) const;
    int first_below_high(double threshold) const;
};

DipFitTrace dip_fit_demo(const ImageField& target, int iterations,
                         std::uint64_t seed,
                         const nets::NetProfile& profile = nets::NetProfile::mini());

}  // namespace wdip::solver
