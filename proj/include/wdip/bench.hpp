/* SPDX-FileCopyrightText: 2026 The wdip authors
 * SPDX-License-Identifier: Apache-2.0 */
#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "wdip/image.hpp"
#include "wdip/solver.hpp"

namespace wdip::bench {

struct DatasetEntry {
    std::string id;
    std::optional<ImageField> sharp;
    ImageField blurred;
    std::optional<Kernel> true_kernel;
    double noise_sigma = 0.0;
    int kernel_size_estimate = 0;
    bool microscopy = false;  // enables the Otsu+Dice score
};

/// blurred = clamp(conv(sharp, kernel) + N(0, sigma^2), [0,1]); the entry
/// carries everything needed to regenerate it bit-identically.
DatasetEntry synthesize_blur(const ImageField& sharp, const Kernel& kernel,
                             double noise_sigma, std::uint64_t seed);

ImageField add_gaussian_noise(const ImageField& image, double sigma,
                              std::uint64_t seed);

/// Multi-channel wrapper over imagefreq::circular_convolve.
ImageField convolve_field(const ImageField& image, const Kernel& kernel);

// --- scene and kernel generators (desk-scale surrogates) -------------------

/// Piecewise-smooth scene: gradient background plus soft-edged shapes.
ImageField cartoon_scene(int height, int width, std::uint64_t seed);

/// Vessel-like branching structure on a dark background (microscopy
/// surrogate for the Otsu+Dice pipeline).
ImageField vessel_tree_scene(int size, std::uint64_t seed);

/// Rasterized smooth random-walk trajectory, the usual motion-blur model.
Kernel motion_kernel(int n, double length, std::uint64_t seed);

// --- manifests --------------------------------------------------------------

struct ManifestEntry {
    std::string id;
    std::string blurred_path;
    std::string sharp_path;   // optional, empty when absent
    std::string kernel_path;  // optional, empty when absent
    double noise_sigma = 0.0;
    int kernel_size = 0;
    bool microscopy = false;
};

std::vector<ManifestEntry> load_manifest(const std::string& path);
void save_manifest(const std::string& path,
                   const std::vector<ManifestEntry>& entries);
/// Loads referenced files; relative paths resolve against the manifest dir.
DatasetEntry load_entry(const ManifestEntry& entry, const std::string& base_dir);

// --- experiments ------------------------------------------------------------

struct PlanCase {
    std::string entry_id;
    std::string config_name;  // e.g. "wdip", "selfdeblur", "alpha=0"
    solver::SolveConfig config;
};

struct ExperimentPlan {
    std::vector<PlanCase> cases;
    std::vector<std::uint64_t> seeds{0, 1, 2};  // three runs per case
};

/// The standard ablation toggles applied to a base configuration.
std::vector<std::pair<std::string, solver::SolveConfig>> ablation_variants(
    const solver::SolveConfig& base);

struct RunScore {
    std::string config_name;
    std::string entry_id;
    std::uint64_t seed = 0;
    double psnr = 0.0;
    double ssim = 0.0;
    std::optional<double> error_ratio;
    std::optional<double> dice;
    bool failed = false;
    std::string error;
};

struct AggregateRow {
    std::string config_name;
    int runs = 0;
    double psnr_mean = 0.0, psnr_var = 0.0;
    double ssim_mean = 0.0, ssim_var = 0.0;
};

struct ExperimentReport {
    std::vector<RunScore> runs;
    std::vector<AggregateRow> aggregates;

    void write_csv(std::ostream& out) const;
    void write_jsonl(std::ostream& out) const;
    /// "name  psnr mean±var  ssim mean±var" table.
    std::string format_table() const;
    bool any_failed() const;
};

/// Runs every (case, seed) through the solver and scores it. Failures are
/// recorded and the experiment continues. Aggregation: means pool all runs
/// of a configuration; variances are seed-variances averaged over entries,
/// never pooled across images. `workers` bounds concurrent runs.
ExperimentReport run_experiment(const std::vector<DatasetEntry>& entries,
                                const ExperimentPlan& plan, int workers = 1,
                                const std::string& trace_dir = "");

// --- kernel-size sensitivity -------------------------------------------------

struct SensitivityRow {
    std::string mode;
    int kernel_size = 0;
    double psnr_mean = 0.0;
    double delta_vs_first = 0.0;  // PSNR drop relative to the first size
};

/// Runs wdip and selfdeblur at each requested kernel size (aux kernel
/// re-initialized per size from the entry's PSD) and reports the PSNR drop
/// of padded sizes against the first (tight) size.
std::vector<SensitivityRow> kernel_size_sensitivity(
    const DatasetEntry& entry, const std::vector<int>& sizes,
    const solver::SolveConfig& base, const std::vector<std::uint64_t>& seeds);

/// Per-entry evaluation used everywhere: PSNR/SSIM on the Y channel,
/// error ratio when the true kernel is known, Dice for microscopy entries.
RunScore score_run(const DatasetEntry& entry, const solver::SolveResult& result,
                   const solver::SolveConfig& config);

}  // namespace wdip::bench
