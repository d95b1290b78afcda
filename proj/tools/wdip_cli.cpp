/* SPDX-FileCopyrightText: 2026 The wdip authors
 * SPDX-License-Identifier: Apache-2.0 */
// wdip — blind deconvolution with Wiener-guided deep image priors.
// Subcommands: deblur, init-kernel, simulate, bench, demo-lag.

#include <CLI11.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>

#include <json.hpp>

#include "wdip/bench.hpp"
#include "wdip/color.hpp"
#include "wdip/imagefreq.hpp"
#include "wdip/io.hpp"
#include "wdip/kernel_init.hpp"
#include "wdip/metrics.hpp"
#include "wdip/plot.hpp"
#include "wdip/solver.hpp"

namespace fs = std::filesystem;
using namespace wdip;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitAborted = 3;

std::string default_out_root() {
    if (const char* env = std::getenv("WDIP_OUT_ROOT")) return env;
    return "wdip_out";
}

nets::NetProfile profile_by_name(const std::string& name) {
    if (name == "full") return nets::NetProfile::full();
    if (name == "desk") return nets::NetProfile::desk();
    if (name == "mini") return nets::NetProfile::mini();
    throw ConfigError("unknown profile: " + name);
}

/// "gauss:1.5", "motion:6", "aniso:2.5,1,0.5", "uniform", "delta" or a path
/// to a kernel text file.
Kernel parse_kernel_spec(const std::string& spec, int n, std::uint64_t seed) {
    auto after = [&](const char* prefix) {
        return spec.substr(std::string(prefix).size());
    };
    if (spec.rfind("gauss:", 0) == 0)
        return Kernel::gaussian(n, std::stod(after("gauss:")));
    if (spec.rfind("motion:", 0) == 0)
        return bench::motion_kernel(n, std::stod(after("motion:")), seed);
    if (spec.rfind("aniso:", 0) == 0) {
        const std::string args = after("aniso:");
        double a = 0, b = 0, ang = 0;
        if (std::sscanf(args.c_str(), "%lf,%lf,%lf", &a, &b, &ang) != 3)
            throw ConfigError("aniso spec needs sigma_major,sigma_minor,angle");
        return Kernel::gaussian_aniso(n, a, b, ang);
    }
    if (spec == "uniform") return Kernel::uniform(n);
    if (spec == "delta") return Kernel::delta(n);
    return io::load_kernel_text(spec);
}

void write_config_echo(const CLI::App& app, const fs::path& dir) {
    std::ofstream out(dir / "config.ini");
    out << app.config_to_str(true, true);
}

ImageField load_image_any(const std::string& path) {
    if (path.size() > 6 && path.substr(path.size() - 6) == ".fgrid")
        return io::load_fgrid(path);
    return io::load_png(path);
}

// Options shared by solver-backed commands.
struct SolveFlags {
    int iterations = 5000;
    int kernel_size = 0;
    double alpha = 1e-3, beta = 1e-4, lambda = 1e-3, wiener_c = 0.025;
    int ssim_switch = 1000;
    std::string mode = "wdip";
    std::string profile = "full";
    std::uint64_t seed = 0;
    int snapshot_stride = 0;
    std::string aux_kernel_path;
    std::string aux_init = "psd";  // psd | uniform
    double psd_threshold = kernel_init::kDefaultMassFraction;
    bool no_aux_projection = false;
    bool renormalize_aux = false;

    void attach(CLI::App* cmd) {
        cmd->add_option("--iterations", iterations, "Optimization iterations");
        cmd->add_option("--kernel-size", kernel_size, "Kernel size n (odd)");
        cmd->add_option("--alpha", alpha, "Image-matching weight");
        cmd->add_option("--beta", beta, "Kernel-matching weight");
        cmd->add_option("--lambda", lambda, "Kernel L2 weight");
        cmd->add_option("--wiener-c", wiener_c, "Wiener constant C");
        cmd->add_option("--ssim-switch", ssim_switch,
                        "Iteration at which the data term switches to SSIM");
        cmd->add_option("--mode", mode, "wdip | selfdeblur");
        cmd->add_option("--profile", profile, "Network profile: full | desk | mini");
        cmd->add_option("--seed", seed, "Run seed");
        cmd->add_option("--snapshot-stride", snapshot_stride,
                        "Store intermediate snapshots every N iterations");
        cmd->add_option("--aux-kernel", aux_kernel_path,
                        "Auxiliary kernel init from a kernel text file");
        cmd->add_option("--aux-init", aux_init,
                        "Auxiliary kernel init when no file given: psd | uniform");
        cmd->add_option("--psd-threshold", psd_threshold,
                        "PSD mass fraction T for the Gaussian init");
        cmd->add_flag("--no-aux-projection", no_aux_projection,
                      "Skip the nonnegativity projection of the aux kernel");
        cmd->add_flag("--renormalize-aux", renormalize_aux,
                      "Renormalize the aux kernel to unit sum after each step");
    }

    solver::SolveConfig to_config(const ImageField& blurred_y) const {
        solver::SolveConfig cfg;
        cfg.iterations = iterations;
        cfg.kernel_size = kernel_size;
        cfg.weights.alpha = alpha;
        cfg.weights.beta = beta;
        cfg.weights.lambda = lambda;
        cfg.weights.wiener_c = wiener_c;
        cfg.weights.ssim_switch_iter = ssim_switch;
        cfg.seed = seed;
        cfg.snapshot_stride = snapshot_stride;
        cfg.project_aux_nonneg = !no_aux_projection;
        cfg.renormalize_aux = renormalize_aux;
        cfg.profile = profile_by_name(profile);
        if (mode == "wdip")
            cfg.mode = solver::SolveMode::Wdip;
        else if (mode == "selfdeblur")
            cfg.mode = solver::SolveMode::SelfDeblur;
        else
            throw ConfigError("unknown mode: " + mode);

        if (cfg.mode == solver::SolveMode::Wdip) {
            if (!aux_kernel_path.empty()) {
                cfg.aux_init = io::load_kernel_text(aux_kernel_path);
                if (kernel_size == 0) cfg.kernel_size = cfg.aux_init.size();
            } else if (aux_init == "uniform") {
                cfg.aux_init = Kernel::uniform(cfg.kernel_size);
            } else if (aux_init == "psd") {
                const auto spec = kernel_init::dataset_sigma(
                    {blurred_y}, {cfg.kernel_size}, psd_threshold);
                cfg.aux_init = kernel_init::init_kernel(spec, cfg.kernel_size);
            } else {
                throw ConfigError("unknown aux-init: " + aux_init);
            }
        }
        if (cfg.kernel_size == 0)
            throw ConfigError("--kernel-size required (or derivable from a kernel file)");
        return cfg;
    }
};

// ---------------------------------------------------------------------------

int cmd_deblur(const CLI::App& app, const SolveFlags& flags,
               const std::string& input, const std::string& truth_path,
               std::string out_dir, int bit_depth, bool edge_taper_flag) {
    if (out_dir.empty()) out_dir = default_out_root() + "/deblur";
    fs::create_directories(out_dir);
    const fs::path dir(out_dir);

    const ImageField loaded = load_image_any(input);
    std::optional<color::YSplit> split;
    ImageField blurred_y =
        loaded.channels() == 3 ? (split = color::to_y_channel(loaded))->y : loaded;

    solver::SolveConfig cfg = flags.to_config(blurred_y);
    if (edge_taper_flag)
        blurred_y = imagefreq::edge_taper(blurred_y, cfg.aux_init.size()
                                                         ? cfg.aux_init
                                                         : Kernel::gaussian(
                                                               cfg.kernel_size, 1.0));
    write_config_echo(app, dir);

    solver::SolveResult result;
    try {
        result = solver::run(cfg, blurred_y);
    } catch (const solver::AbortedRunError& e) {
        std::cerr << "error: " << e.what() << "\n";
        std::ofstream tf(dir / "trace.csv");
        e.trace.write_csv(tf);
        return kExitAborted;
    }

    ImageField sharp_out = result.sharp;
    if (split) sharp_out = color::from_y_channel(result.sharp, split->cb, split->cr);
    io::save_png((dir / "sharp.png").string(), sharp_out, bit_depth);
    io::save_fgrid((dir / "sharp.fgrid").string(), result.sharp);
    io::save_kernel_png((dir / "kernel.png").string(), result.kernel);
    io::save_kernel_text((dir / "kernel.txt").string(), result.kernel);
    if (cfg.mode == solver::SolveMode::Wdip)
        io::save_kernel_text((dir / "aux_kernel.txt").string(), result.aux_kernel);
    {
        std::ofstream tf(dir / "trace.csv");
        result.trace.write_csv(tf);
    }
    for (const auto& snap : result.trace.snapshots) {
        ImageField img = snap.gen_image;
        img.clamp01();
        io::save_png((dir / ("snapshot_" + std::to_string(snap.iter) + ".png")).string(),
                     img, 8);
    }

    if (!truth_path.empty()) {
        const ImageField truth = color::luma(load_image_any(truth_path));
        const double p = metrics::psnr(result.sharp, truth);
        const double s = metrics::ssim(result.sharp, truth);
        nlohmann::json j;
        j["psnr"] = p;
        j["ssim"] = s;
        j["seed"] = cfg.seed;
        std::ofstream mf(dir / "metrics.json");
        mf << j.dump(2) << '\n';
        std::printf("final PSNR %.4f dB, SSIM %.6f\n", p, s);
    }
    std::printf("outputs written to %s\n", out_dir.c_str());
    return kExitOk;
}

int cmd_init_kernel(const std::string& image_dir, const std::string& sizes_csv,
                    int kernel_size, double t, std::string out_dir) {
    if (out_dir.empty()) out_dir = default_out_root() + "/init_kernel";
    fs::create_directories(out_dir);
    const fs::path dir(out_dir);

    std::vector<ImageField> images;
    std::vector<int> sizes;
    std::vector<std::string> names;
    std::ifstream csv(sizes_csv);
    if (!csv) throw IoError("cannot open sizes csv " + sizes_csv);
    std::string line;
    while (std::getline(csv, line)) {
        if (line.empty()) continue;
        const auto comma = line.find(',');
        if (comma == std::string::npos)
            throw IoError("sizes csv rows are: filename,kernel_size");
        const std::string name = line.substr(0, comma);
        if (name == "filename" || name == "id") continue;
        names.push_back(name);
        sizes.push_back(std::stoi(line.substr(comma + 1)));
        images.push_back(color::luma(load_image_any(
            (fs::path(image_dir) / name).string())));
    }
    if (images.empty()) throw ConfigError("sizes csv listed no images");

    const auto spec = kernel_init::dataset_sigma(images, sizes, t);
    if (kernel_size == 0) kernel_size = sizes.front();
    const Kernel k = kernel_init::init_kernel(spec, kernel_size);
    io::save_kernel_text((dir / "init_kernel.txt").string(), k);
    io::save_kernel_png((dir / "init_kernel.png").string(), k);

    std::ofstream report(dir / "report.txt");
    report.precision(17);
    report << "sigma_k=" << spec.sigma_k << '\n';
    report << "mass_fraction_t=" << t << '\n';
    report << "kernel_size=" << kernel_size << '\n';
    for (std::size_t i = 0; i < names.size(); ++i)
        report << "sigma_over_n[" << names[i] << "]=" << spec.per_image_sigmas[i]
               << '\n';
    std::printf("sigma_k = %.6f; kernel written to %s\n", spec.sigma_k,
                (dir / "init_kernel.txt").c_str());
    return kExitOk;
}

int cmd_simulate(const std::string& sharp_path, const std::string& scene, int size,
                 int count, const std::string& kernel_spec, int kernel_size,
                 double noise_sigma, std::uint64_t seed, std::string out_dir) {
    if (out_dir.empty()) out_dir = default_out_root() + "/dataset";
    fs::create_directories(out_dir);
    const fs::path dir(out_dir);

    std::vector<bench::ManifestEntry> manifest;
    for (int i = 0; i < count; ++i) {
        const std::uint64_t entry_seed = seed + static_cast<std::uint64_t>(i);
        ImageField sharp;
        bool microscopy = false;
        if (!sharp_path.empty()) {
            sharp = load_image_any(sharp_path);
        } else if (scene == "cartoon") {
            sharp = bench::cartoon_scene(size, size, entry_seed);
        } else if (scene == "vessel") {
            sharp = bench::vessel_tree_scene(size, entry_seed);
            microscopy = true;
        } else {
            throw ConfigError("need --sharp or --scene cartoon|vessel");
        }
        const Kernel kernel = parse_kernel_spec(kernel_spec, kernel_size, entry_seed);
        const bench::DatasetEntry entry =
            bench::synthesize_blur(sharp, kernel, noise_sigma, entry_seed);

        const std::string id = "entry" + std::to_string(i);
        io::save_png((dir / (id + "_sharp.png")).string(), sharp, 16);
        io::save_fgrid((dir / (id + "_sharp.fgrid")).string(), sharp);
        io::save_png((dir / (id + "_blurred.png")).string(), entry.blurred, 16);
        io::save_fgrid((dir / (id + "_blurred.fgrid")).string(), entry.blurred);
        io::save_kernel_text((dir / (id + "_kernel.txt")).string(), kernel);
        io::save_kernel_png((dir / (id + "_kernel.png")).string(), kernel);

        bench::ManifestEntry m;
        m.id = id;
        m.blurred_path = id + "_blurred.fgrid";
        m.sharp_path = id + "_sharp.fgrid";
        m.kernel_path = id + "_kernel.txt";
        m.noise_sigma = noise_sigma;
        m.kernel_size = kernel.size();
        m.microscopy = microscopy;
        manifest.push_back(std::move(m));
    }
    bench::save_manifest((dir / "manifest.csv").string(), manifest);
    std::printf("wrote %d entr%s and manifest to %s\n", count,
                count == 1 ? "y" : "ies", out_dir.c_str());
    return kExitOk;
}

int cmd_bench(const CLI::App& app, const SolveFlags& flags,
              const std::string& manifest_path, bool ablation,
              const std::string& modes_csv, const std::string& seeds_csv,
              const std::string& sensitivity_csv, int workers,
              std::string out_dir) {
    if (out_dir.empty()) out_dir = default_out_root() + "/bench";
    fs::create_directories(out_dir);
    const fs::path dir(out_dir);
    write_config_echo(app, dir);

    const auto manifest = bench::load_manifest(manifest_path);
    if (manifest.empty()) {
        std::cerr << "error: manifest is empty\n";
        return kExitUsage;
    }
    const std::string base_dir = fs::path(manifest_path).parent_path().string();
    std::vector<bench::DatasetEntry> entries;
    for (const auto& m : manifest) entries.push_back(bench::load_entry(m, base_dir));

    std::vector<std::uint64_t> seeds;
    {
        std::stringstream ss(seeds_csv);
        std::string tok;
        while (std::getline(ss, tok, ',')) seeds.push_back(std::stoull(tok));
    }

    // kernel-size sensitivity study
    if (!sensitivity_csv.empty()) {
        std::vector<int> sizes;
        std::stringstream ss(sensitivity_csv);
        std::string tok;
        while (std::getline(ss, tok, ',')) sizes.push_back(std::stoi(tok));
        std::ofstream csv(dir / "sensitivity.csv");
        csv << "entry,mode,kernel_size,psnr_mean,delta_vs_first\n";
        csv.precision(17);
        for (const auto& entry : entries) {
            SolveFlags f = flags;
            f.kernel_size = sizes.front();
            const solver::SolveConfig base = f.to_config(color::luma(entry.blurred));
            const auto rows =
                bench::kernel_size_sensitivity(entry, sizes, base, seeds);
            for (const auto& r : rows) {
                csv << entry.id << ',' << r.mode << ',' << r.kernel_size << ','
                    << r.psnr_mean << ',' << r.delta_vs_first << '\n';
                std::printf("%s %-10s n=%-3d PSNR %.3f (Δ %.3f)\n", entry.id.c_str(),
                            r.mode.c_str(), r.kernel_size, r.psnr_mean,
                            r.delta_vs_first);
            }
        }
        return kExitOk;
    }

    // experiment plan
    bench::ExperimentPlan plan;
    plan.seeds = seeds;
    for (const auto& entry : entries) {
        SolveFlags f = flags;
        if (f.kernel_size == 0) f.kernel_size = entry.kernel_size_estimate;
        const ImageField blurred_y = color::luma(entry.blurred);
        if (ablation) {
            const solver::SolveConfig base = f.to_config(blurred_y);
            for (auto& [name, cfg] : bench::ablation_variants(base))
                plan.cases.push_back({entry.id, name, cfg});
        } else {
            std::stringstream ss(modes_csv);
            std::string mode;
            while (std::getline(ss, mode, ',')) {
                SolveFlags fm = f;
                fm.mode = mode;
                plan.cases.push_back({entry.id, mode, fm.to_config(blurred_y)});
            }
        }
    }

    const auto report =
        bench::run_experiment(entries, plan, workers, (dir / "traces").string());
    {
        std::ofstream csv(dir / "report.csv");
        report.write_csv(csv);
        std::ofstream jl(dir / "report.jsonl");
        report.write_jsonl(jl);
    }
    std::cout << report.format_table();
    for (const auto& r : report.runs)
        if (r.failed)
            std::cerr << "failed: " << r.entry_id << " " << r.config_name << " seed "
                      << r.seed << ": " << r.error << '\n';
    return report.any_failed() ? 2 : kExitOk;
}

int cmd_demo_lag(const CLI::App& app, const std::string& input,
                 const std::string& kernel_spec, int kernel_size, int iterations,
                 std::uint64_t seed, double wiener_c, double threshold,
                 const std::string& profile_name, std::string out_dir) {
    if (out_dir.empty()) out_dir = default_out_root() + "/demo_lag";
    fs::create_directories(out_dir);
    const fs::path dir(out_dir);
    write_config_echo(app, dir);

    const ImageField blurred = color::luma(load_image_any(input));
    Kernel kernel;
    if (kernel_spec.empty()) {
        const auto spec =
            kernel_init::dataset_sigma({blurred}, {kernel_size});
        kernel = kernel_init::init_kernel(spec, kernel_size);
    } else {
        kernel = parse_kernel_spec(kernel_spec, kernel_size, seed);
    }
    const ImageField wiener_target =
        imagefreq::wiener_deconvolve(blurred, kernel.normalized(), wiener_c);

    const nets::NetProfile profile = profile_by_name(profile_name);
    const auto fit_blur = solver::dip_fit_demo(blurred, iterations, seed, profile);
    const auto fit_wiener =
        solver::dip_fit_demo(wiener_target, iterations, seed, profile);

    {
        std::ofstream csv(dir / "demo_lag.csv");
        csv << "iter,mse_blur_target,mse_wiener_target,low_band,high_band\n";
        csv.precision(17);
        for (std::size_t i = 0; i < fit_blur.records.size(); ++i)
            csv << fit_blur.records[i].iter << ',' << fit_blur.records[i].mse_full
                << ',' << fit_wiener.records[i].mse_full << ','
                << fit_wiener.records[i].mse_low << ','
                << fit_wiener.records[i].mse_high << '\n';
        std::ofstream bands(dir / "bands.csv");
        bands << "iter,blur_low,blur_high,wiener_low,wiener_high\n";
        bands.precision(17);
        for (std::size_t i = 0; i < fit_blur.records.size(); ++i)
            bands << fit_blur.records[i].iter << ',' << fit_blur.records[i].mse_low
                  << ',' << fit_blur.records[i].mse_high << ','
                  << fit_wiener.records[i].mse_low << ','
                  << fit_wiener.records[i].mse_high << '\n';
    }

    std::vector<plot::Series> series(2);
    series[0].label = "fit to I_B";
    series[0].rgb = {0.85, 0.2, 0.15};
    series[1].label = "fit to W(I_B,k)";
    series[1].rgb = {0.1, 0.35, 0.8};
    for (std::size_t i = 0; i < fit_blur.records.size(); ++i) {
        series[0].x.push_back(fit_blur.records[i].iter);
        series[0].y.push_back(fit_blur.records[i].mse_full);
        series[1].x.push_back(fit_wiener.records[i].iter);
        series[1].y.push_back(fit_wiener.records[i].mse_full);
    }
    io::save_png((dir / "curves.png").string(),
                 plot::render_lines(series, 640, 420, true), 8);

    const int cb = fit_blur.first_below_full(threshold);
    const int cw = fit_wiener.first_below_full(threshold);
    std::printf("MSE < %g: fit-to-blur at iteration %d, fit-to-wiener at %d\n",
                threshold, cb, cw);
    std::printf("low/high crossings (20%% of initial): blur %d/%d, wiener %d/%d\n",
                fit_blur.first_below_low(0.2 * fit_blur.records[0].mse_low),
                fit_blur.first_below_high(0.2 * fit_blur.records[0].mse_high),
                fit_wiener.first_below_low(0.2 * fit_wiener.records[0].mse_low),
                fit_wiener.first_below_high(0.2 * fit_wiener.records[0].mse_high));
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"W-DIP: unsupervised blind image deconvolution toolkit"};
    app.require_subcommand(1);
    app.set_config("--config", "", "Read defaults from an INI config file");

    // deblur
    auto* deblur = app.add_subcommand("deblur", "Deblur a single image");
    SolveFlags deblur_flags;
    deblur_flags.attach(deblur);
    std::string deblur_input, deblur_truth, deblur_out;
    int bit_depth = 8;
    bool edge_taper_flag = false;
    deblur->add_option("--input", deblur_input, "Blurred image (png or fgrid)")
        ->required();
    deblur->add_option("--truth", deblur_truth, "Ground-truth image for metrics");
    deblur->add_option("--out-dir", deblur_out, "Output directory");
    deblur->add_option("--bit-depth", bit_depth, "PNG output depth (8 or 16)");
    deblur->add_flag("--edge-taper", edge_taper_flag,
                     "Soften wraparound seams before optimizing");

    // init-kernel
    auto* initk = app.add_subcommand("init-kernel",
                                     "Estimate the Gaussian kernel init from PSDs");
    std::string ik_dir, ik_csv, ik_out;
    int ik_n = 0;
    double ik_t = kernel_init::kDefaultMassFraction;
    initk->add_option("--image-dir", ik_dir, "Directory holding the images")
        ->required();
    initk->add_option("--sizes", ik_csv, "CSV of filename,kernel_size rows")
        ->required();
    initk->add_option("--kernel-size", ik_n,
                      "Size of the emitted kernel (default: first row's size)");
    initk->add_option("--psd-threshold", ik_t, "PSD mass fraction T");
    initk->add_option("--out-dir", ik_out, "Output directory");

    // simulate
    auto* sim = app.add_subcommand("simulate", "Synthesize blurred datasets");
    std::string sim_sharp, sim_scene = "cartoon", sim_kernel = "gauss:1.5", sim_out;
    int sim_size = 128, sim_count = 1, sim_n = 13;
    double sim_sigma = 0.01;
    std::uint64_t sim_seed = 0;
    sim->add_option("--sharp", sim_sharp, "Sharp source image (png or fgrid)");
    sim->add_option("--scene", sim_scene, "Generated scene: cartoon | vessel");
    sim->add_option("--size", sim_size, "Generated scene size");
    sim->add_option("--count", sim_count, "Number of entries");
    sim->add_option("--kernel", sim_kernel,
                    "Kernel: gauss:S | motion:LEN | aniso:A,B,ANG | uniform | "
                    "delta | path");
    sim->add_option("--kernel-size", sim_n, "Kernel size n");
    sim->add_option("--noise-sigma", sim_sigma, "Gaussian noise level");
    sim->add_option("--seed", sim_seed, "Base seed");
    sim->add_option("--out-dir", sim_out, "Output directory");

    // bench
    auto* bench_cmd = app.add_subcommand("bench", "Run experiment plans");
    SolveFlags bench_flags;
    bench_flags.attach(bench_cmd);
    std::string bench_manifest, bench_modes = "wdip,selfdeblur";
    std::string bench_seeds = "0,1,2", bench_sens, bench_out;
    bool bench_ablation = false;
    int bench_workers = 1;
    bench_cmd->add_option("--manifest", bench_manifest, "Dataset manifest CSV")
        ->required();
    bench_cmd->add_flag("--ablation", bench_ablation,
                        "Run the ablation preset (full, alpha=0, beta=0, lambda=0, "
                        "k0=Uni)");
    bench_cmd->add_option("--modes", bench_modes, "Comma list of modes to run");
    bench_cmd->add_option("--seeds", bench_seeds, "Comma list of seeds");
    bench_cmd->add_option("--sensitivity-sizes", bench_sens,
                          "Comma list of kernel sizes: run the size study instead");
    bench_cmd->add_option("--workers", bench_workers, "Concurrent runs");
    bench_cmd->add_option("--out-dir", bench_out, "Output directory");

    // demo-lag
    auto* demo = app.add_subcommand("demo-lag",
                                    "Spectral-lag study: DIP fit to I_B vs W(I_B,k)");
    std::string demo_input, demo_kernel, demo_profile = "mini", demo_out;
    int demo_iters = 800, demo_n = 13;
    std::uint64_t demo_seed = 0;
    double demo_c = 0.025, demo_threshold = 3e-3;
    demo->add_option("--input", demo_input, "Blurred image")->required();
    demo->add_option("--kernel", demo_kernel,
                     "Kernel spec or file (default: PSD-based Gaussian init)");
    demo->add_option("--kernel-size", demo_n, "Kernel size for the auto init");
    demo->add_option("--iterations", demo_iters, "Fit iterations");
    demo->add_option("--seed", demo_seed, "Seed");
    demo->add_option("--wiener-c", demo_c, "Wiener constant C");
    demo->add_option("--threshold", demo_threshold, "Crossing threshold");
    demo->add_option("--profile", demo_profile, "Network profile");
    demo->add_option("--out-dir", demo_out, "Output directory");

    CLI11_PARSE(app, argc, argv);

    try {
        if (app.got_subcommand(deblur))
            return cmd_deblur(app, deblur_flags, deblur_input, deblur_truth,
                              deblur_out, bit_depth, edge_taper_flag);
        if (app.got_subcommand(initk))
            return cmd_init_kernel(ik_dir, ik_csv, ik_n, ik_t, ik_out);
        if (app.got_subcommand(sim))
            return cmd_simulate(sim_sharp, sim_scene, sim_size, sim_count, sim_kernel,
                                sim_n, sim_sigma, sim_seed, sim_out);
        if (app.got_subcommand(bench_cmd))
            return cmd_bench(app, bench_flags, bench_manifest, bench_ablation,
                             bench_modes, bench_seeds, bench_sens, bench_workers,
                             bench_out);
        if (app.got_subcommand(demo))
            return cmd_demo_lag(app, demo_input, demo_kernel, demo_n, demo_iters,
                                demo_seed, demo_c, demo_threshold, demo_profile,
                                demo_out);
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const IoError& e) {
        std::cerr << "io error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
    return kExitUsage;
}
