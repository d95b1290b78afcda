/* SPDX-FileCopyrightText: 2026 The wdip authors
 * SPDX-License-Identifier: Apache-2.0 */
#include "wdip/bench.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "wdip/color.hpp"
#include "wdip/imagefreq.hpp"
#include "wdip/io.hpp"
#include "wdip/kernel_init.hpp"
#include "wdip/metrics.hpp"
#include "wdip/rng.hpp"

namespace fs = std::filesystem;

namespace wdip::bench {

ImageField convolve_field(const ImageField& image, const Kernel& kernel) {
    ImageField out(image.height(), image.width(), image.channels(),
                   image.color_space());
    for (int c = 0; c < image.channels(); ++c) {
        const ImageField conv =
            imagefreq::circular_convolve(image.extract_channel(c), kernel);
        std::copy(conv.data(), conv.data() + conv.size(), out.channel(c));
    }
    return out;
}

ImageField add_gaussian_noise(const ImageField& image, double sigma,
                              std::uint64_t seed) {
    ImageField out = image;
    if (sigma <= 0.0) return out;
    Rng rng(Rng::derive(seed, 0x6e6f6973));
    for (std::size_t i = 0; i < out.size(); ++i)
        out.data()[i] += sigma * rng.normal();
    return out;
}

DatasetEntry synthesize_blur(const ImageField& sharp, const Kernel& kernel,
                             double noise_sigma, std::uint64_t seed) {
    if (!kernel.is_normalized())
        throw DegenerateInputError("synthesize_blur: kernel must be normalized");
    DatasetEntry e;
    e.sharp = sharp;
    e.true_kernel = kernel;
    e.noise_sigma = noise_sigma;
    e.kernel_size_estimate = kernel.size();
    e.blurred = add_gaussian_noise(convolve_field(sharp, kernel), noise_sigma, seed);
    e.blurred.clamp01();
    return e;
}

// ---------------------------------------------------------------------------
// Scene generators

ImageField cartoon_scene(int height, int width, std::uint64_t seed) {
    Rng rng(Rng::derive(seed, 0x7363656e));
    ImageField img(height, width, 1);
    // smooth background ramp
    const double gx = rng.uniform(-0.25, 0.25), gy = rng.uniform(-0.25, 0.25);
    const double base = rng.uniform(0.3, 0.6);
    for (int y = 0; y < height; ++y)
        for (int x = 0; x < width; ++x)
            img.at(y, x) = base + gx * (static_cast<double>(x) / width - 0.5) +
                           gy * (static_cast<double>(y) / height - 0.5);

    const int shapes = 10 + static_cast<int>(rng.index(6));
    for (int s = 0; s < shapes; ++s) {
        const double cy = rng.uniform(0.1, 0.9) * height;
        const double cx = rng.uniform(0.1, 0.9) * width;
        const double ry = rng.uniform(0.05, 0.22) * height;
        const double rx = rng.uniform(0.05, 0.22) * width;
        const double v = rng.uniform(0.05, 0.95);
        const bool rect = rng.uniform() < 0.5;
        const double soft = 1.2;  // soft edge, in pixels
        for (int y = 0; y < height; ++y) {
            for (int x = 0; x < width; ++x) {
                double d;
                if (rect) {
                    const double dy = std::abs(y - cy) - ry;
                    const double dx = std::abs(x - cx) - rx;
                    d = std::max(dy, dx);
                } else {
                    const double dy = (y - cy) / ry, dx = (x - cx) / rx;
                    d = (std::sqrt(dy * dy + dx * dx) - 1.0) * std::min(rx, ry);
                }
                const double a = std::clamp(0.5 - d / soft, 0.0, 1.0);
                img.at(y, x) = (1.0 - a) * img.at(y, x) + a * v;
            }
        }
    }
    img.clamp01();
    return img;
}

ImageField vessel_tree_scene(int size, std::uint64_t seed) {
    Rng rng(Rng::derive(seed, 0x76657373));
    ImageField img(size, size, 1, ColorSpace::Gray, 0.06);

    struct Walker {
        double y, x, dir, radius;
        int steps_left;
    };
    std::vector<Walker> walkers;
    const int roots = 3 + static_cast<int>(rng.index(3));
    for (int i = 0; i < roots; ++i)
        walkers.push_back({rng.uniform(0.15, 0.85) * size,
                           rng.uniform(0.15, 0.85) * size,
                           rng.uniform(0.0, 2.0 * M_PI), rng.uniform(1.8, 2.8),
                           size * 2});

    auto stamp = [&](double cy, double cx, double radius) {
        const int r = static_cast<int>(std::ceil(radius)) + 1;
        for (int y = std::max(0, static_cast<int>(cy) - r);
             y <= std::min(size - 1, static_cast<int>(cy) + r); ++y)
            for (int x = std::max(0, static_cast<int>(cx) - r);
                 x <= std::min(size - 1, static_cast<int>(cx) + r); ++x) {
                const double d = std::hypot(y - cy, x - cx);
                if (d <= radius) img.at(y, x) = 0.88;
            }
    };

    while (!walkers.empty()) {
        Walker w = walkers.back();
        walkers.pop_back();
        while (w.steps_left-- > 0 && w.radius > 0.7) {
            stamp(w.y, w.x, w.radius);
            w.dir += rng.uniform(-0.35, 0.35);
            w.y += std::sin(w.dir);
            w.x += std::cos(w.dir);
            if (w.y < 2 || w.x < 2 || w.y > size - 3 || w.x > size - 3) break;
            if (rng.uniform() < 0.015 && walkers.size() < 24) {
                Walker b = w;
                b.dir += rng.uniform(0.6, 1.2) * (rng.uniform() < 0.5 ? 1.0 : -1.0);
                b.radius *= 0.75;
                walkers.push_back(b);
                w.radius *= 0.85;
            }
            w.radius *= 0.9995;
        }
    }
    // soften edges slightly so the blur model has sub-pixel structure
    return imagefreq::circular_convolve(img, Kernel::gaussian(5, 0.7));
}

Kernel motion_kernel(int n, double length, std::uint64_t seed) {
    if (length <= 0.0) throw ConfigError("motion_kernel: length must be > 0");
    Rng rng(Rng::derive(seed, 0x6d6f7431));
    Kernel k(n, 0.0);
    const double c = (n - 1) / 2.0;

    // smooth random trajectory, bilinear splat
    double dir = rng.uniform(0.0, 2.0 * M_PI);
    double y = 0.0, x = 0.0;
    std::vector<std::pair<double, double>> points{{y, x}};
    const int steps = std::max(2, static_cast<int>(std::ceil(length * 4.0)));
    const double step = length / steps;
    for (int i = 0; i < steps; ++i) {
        dir += rng.uniform(-0.25, 0.25);
        y += step * std::sin(dir);
        x += step * std::cos(dir);
        points.emplace_back(y, x);
    }
    // center the trajectory
    double my = 0.0, mx = 0.0;
    for (auto& p : points) {
        my += p.first;
        mx += p.second;
    }
    my /= points.size();
    mx /= points.size();
    const double half = (n - 1) / 2.0 - 0.5;
    for (auto& p : points) {
        const double py = std::clamp(p.first - my, -half, half) + c;
        const double px = std::clamp(p.second - mx, -half, half) + c;
        const int y0 = static_cast<int>(std::floor(py));
        const int x0 = static_cast<int>(std::floor(px));
        const double fy = py - y0, fx = px - x0;
        k.at(y0, x0) += (1 - fy) * (1 - fx);
        k.at(y0, x0 + 1) += (1 - fy) * fx;
        k.at(y0 + 1, x0) += fy * (1 - fx);
        k.at(y0 + 1, x0 + 1) += fy * fx;
    }
    // slight soften, then normalize
    Kernel soft(n);
    for (int yy = 0; yy < n; ++yy)
        for (int xx = 0; xx < n; ++xx) {
            double acc = 0.0;
            for (int dy = -1; dy <= 1; ++dy)
                for (int dx = -1; dx <= 1; ++dx) {
                    const int sy = yy + dy, sx = xx + dx;
                    if (sy < 0 || sx < 0 || sy >= n || sx >= n) continue;
                    const double w = (dy == 0 && dx == 0)   ? 0.4
                                     : (dy == 0 || dx == 0) ? 0.1
                                                            : 0.05;
                    acc += w * k.at(sy, sx);
                }
            soft.at(yy, xx) = acc;
        }
    return soft.normalized();
}

// ---------------------------------------------------------------------------
// Manifests

namespace {

std::vector<std::string> split_csv(const std::string& line) {
    std::vector<std::string> out;
    std::stringstream ss(line);
    std::string field;
    while (std::getline(ss, field, ',')) out.push_back(field);
    if (!line.empty() && line.back() == ',') out.push_back("");
    return out;
}

}  // namespace

std::vector<ManifestEntry> load_manifest(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open manifest " + path);
    std::vector<ManifestEntry> entries;
    std::string line;
    bool header = true;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        if (header) {
            header = false;
            if (line.rfind("id,", 0) == 0) continue;  // skip header row
        }
        const auto f = split_csv(line);
        if (f.size() < 6)
            throw IoError("manifest row needs >= 6 fields: " + line);
        ManifestEntry e;
        e.id = f[0];
        e.blurred_path = f[1];
        e.sharp_path = f[2];
        e.kernel_path = f[3];
        e.noise_sigma = std::stod(f[4]);
        e.kernel_size = std::stoi(f[5]);
        e.microscopy = f.size() > 6 && f[6] == "1";
        entries.push_back(std::move(e));
    }
    return entries;
}

void save_manifest(const std::string& path, const std::vector<ManifestEntry>& entries) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot open " + path);
    out << "id,blurred,sharp,kernel,noise_sigma,kernel_size,microscopy\n";
    out.precision(17);
    for (const auto& e : entries)
        out << e.id << ',' << e.blurred_path << ',' << e.sharp_path << ','
            << e.kernel_path << ',' << e.noise_sigma << ',' << e.kernel_size << ','
            << (e.microscopy ? 1 : 0) << '\n';
}

namespace {

ImageField load_image_any(const std::string& path) {
    if (path.size() > 6 && path.substr(path.size() - 6) == ".fgrid")
        return io::load_fgrid(path);
    return io::load_png(path);
}

std::string resolve(const std::string& base, const std::string& rel) {
    fs::path p(rel);
    if (p.is_absolute() || base.empty()) return rel;
    return (fs::path(base) / p).string();
}

}  // namespace

DatasetEntry load_entry(const ManifestEntry& m, const std::string& base_dir) {
    DatasetEntry e;
    e.id = m.id;
    e.blurred = load_image_any(resolve(base_dir, m.blurred_path));
    if (!m.sharp_path.empty())
        e.sharp = load_image_any(resolve(base_dir, m.sharp_path));
    if (!m.kernel_path.empty())
        e.true_kernel = io::load_kernel_text(resolve(base_dir, m.kernel_path));
    e.noise_sigma = m.noise_sigma;
    e.kernel_size_estimate = m.kernel_size;
    e.microscopy = m.microscopy;
    return e;
}

// ---------------------------------------------------------------------------
// Experiments

std::vector<std::pair<std::string, solver::SolveConfig>> ablation_variants(
    const solver::SolveConfig& base) {
    std::vector<std::pair<std::string, solver::SolveConfig>> out;
    out.emplace_back("full", base);
    solver::SolveConfig a0 = base;
    a0.weights.alpha = 0.0;
    out.emplace_back("alpha=0", a0);
    solver::SolveConfig b0 = base;
    b0.weights.beta = 0.0;
    out.emplace_back("beta=0", b0);
    solver::SolveConfig l0 = base;
    l0.weights.lambda = 0.0;
    out.emplace_back("lambda=0", l0);
    solver::SolveConfig uni = base;
    uni.aux_init = Kernel::uniform(base.kernel_size);
    out.emplace_back("k0=Uni", uni);
    return out;
}

RunScore score_run(const DatasetEntry& entry, const solver::SolveResult& result,
                   const solver::SolveConfig& config) {
    RunScore s;
    s.seed = config.seed;
    if (!entry.sharp) return s;
    const ImageField truth = color::luma(*entry.sharp);
    s.psnr = metrics::psnr(result.sharp, truth);
    s.ssim = metrics::ssim(result.sharp, truth);
    if (entry.true_kernel && result.kernel.size() == entry.true_kernel->size()) {
        const ImageField blurred_y = color::luma(entry.blurred);
        s.error_ratio =
            metrics::error_ratio(blurred_y, truth, result.kernel.normalized(),
                                 entry.true_kernel->normalized(),
                                 config.weights.wiener_c);
    }
    if (entry.microscopy) s.dice = metrics::microscopy_dice(result.sharp, truth);
    return s;
}

ExperimentReport run_experiment(const std::vector<DatasetEntry>& entries,
                                const ExperimentPlan& plan, int workers,
                                const std::string& trace_dir) {
    std::map<std::string, const DatasetEntry*> by_id;
    for (const auto& e : entries) by_id[e.id] = &e;
    for (const auto& c : plan.cases)
        if (!by_id.count(c.entry_id))
            throw ConfigError("plan references unknown entry " + c.entry_id);

    struct Job {
        const PlanCase* pcase;
        const DatasetEntry* entry;
        std::uint64_t seed;
    };
    std::vector<Job> jobs;
    for (const auto& c : plan.cases)
        for (std::uint64_t seed : plan.seeds)
            jobs.push_back({&c, by_id.at(c.entry_id), seed});

    ExperimentReport report;
    report.runs.resize(jobs.size());
    if (!trace_dir.empty()) fs::create_directories(trace_dir);

    std::atomic<std::size_t> next{0};
    auto work = [&]() {
        for (;;) {
            const std::size_t i = next.fetch_add(1);
            if (i >= jobs.size()) return;
            const Job& job = jobs[i];
            RunScore& score = report.runs[i];
            score.config_name = job.pcase->config_name;
            score.entry_id = job.pcase->entry_id;
            score.seed = job.seed;
            try {
                solver::SolveConfig cfg = job.pcase->config;
                cfg.seed = job.seed;
                const ImageField blurred_y = color::luma(job.entry->blurred);
                solver::SolveResult result = solver::run(cfg, blurred_y);
                RunScore s = score_run(*job.entry, result, cfg);
                score.psnr = s.psnr;
                score.ssim = s.ssim;
                score.error_ratio = s.error_ratio;
                score.dice = s.dice;
                if (!trace_dir.empty()) {
                    const std::string name = job.pcase->entry_id + "_" +
                                             job.pcase->config_name + "_s" +
                                             std::to_string(job.seed);
                    std::ofstream tf(fs::path(trace_dir) / (name + "_trace.csv"));
                    result.trace.write_csv(tf);
                }
            } catch (const std::exception& e) {
                score.failed = true;
                score.error = e.what();
            }
        }
    };

    workers = std::max(1, workers);
    if (workers == 1) {
        work();
    } else {
        std::vector<std::thread> pool;
        for (int t = 0; t < workers; ++t) pool.emplace_back(work);
        for (auto& t : pool) t.join();
    }

    // aggregation: means pool runs; variances are per-entry seed variances,
    // averaged over entries
    std::map<std::string, std::vector<const RunScore*>> by_config;
    for (const auto& r : report.runs)
        if (!r.failed) by_config[r.config_name].push_back(&r);
    for (const auto& [name, runs] : by_config) {
        AggregateRow row;
        row.config_name = name;
        row.runs = static_cast<int>(runs.size());
        for (const auto* r : runs) {
            row.psnr_mean += r->psnr;
            row.ssim_mean += r->ssim;
        }
        row.psnr_mean /= row.runs;
        row.ssim_mean /= row.runs;

        std::map<std::string, std::vector<const RunScore*>> by_entry;
        for (const auto* r : runs) by_entry[r->entry_id].push_back(r);
        int entries_with_var = 0;
        for (const auto& [eid, ers] : by_entry) {
            if (ers.size() < 2) continue;
            double pm = 0.0, sm = 0.0;
            for (const auto* r : ers) {
                pm += r->psnr;
                sm += r->ssim;
            }
            pm /= ers.size();
            sm /= ers.size();
            double pv = 0.0, sv = 0.0;
            for (const auto* r : ers) {
                pv += (r->psnr - pm) * (r->psnr - pm);
                sv += (r->ssim - sm) * (r->ssim - sm);
            }
            row.psnr_var += pv / (ers.size() - 1);
            row.ssim_var += sv / (ers.size() - 1);
            ++entries_with_var;
        }
        if (entries_with_var > 0) {
            row.psnr_var /= entries_with_var;
            row.ssim_var /= entries_with_var;
        }
        report.aggregates.push_back(row);
    }
    return report;
}

void ExperimentReport::write_csv(std::ostream& out) const {
    out << "config,entry,seed,psnr,ssim,error_ratio,dice,failed,error\n";
    out.precision(17);
    for (const auto& r : runs) {
        out << r.config_name << ',' << r.entry_id << ',' << r.seed << ',' << r.psnr
            << ',' << r.ssim << ',';
        if (r.error_ratio) out << *r.error_ratio;
        out << ',';
        if (r.dice) out << *r.dice;
        out << ',' << (r.failed ? 1 : 0) << ',' << r.error << '\n';
    }
}

void ExperimentReport::write_jsonl(std::ostream& out) const {
    for (const auto& r : runs) {
        nlohmann::json j;
        j["config"] = r.config_name;
        j["entry"] = r.entry_id;
        j["seed"] = r.seed;
        j["psnr"] = r.psnr;
        j["ssim"] = r.ssim;
        if (r.error_ratio) j["error_ratio"] = *r.error_ratio;
        if (r.dice) j["dice"] = *r.dice;
        j["failed"] = r.failed;
        if (r.failed) j["error"] = r.error;
        out << j.dump() << '\n';
    }
}

std::string ExperimentReport::format_table() const {
    std::ostringstream out;
    char line[256];
    std::snprintf(line, sizeof(line), "%-14s %6s %18s %20s\n", "config", "runs",
                  "PSNR mean±var", "SSIM mean±var");
    out << line;
    for (const auto& a : aggregates) {
        std::snprintf(line, sizeof(line), "%-14s %6d %10.2f±%-7.2f %12.4f±%-8.2e\n",
                      a.config_name.c_str(), a.runs, a.psnr_mean, a.psnr_var,
                      a.ssim_mean, a.ssim_var);
        out << line;
    }
    return out.str();
}

bool ExperimentReport::any_failed() const {
    return std::any_of(runs.begin(), runs.end(),
                       [](const RunScore& r) { return r.failed; });
}

// ---------------------------------------------------------------------------
// Kernel-size sensitivity

std::vector<SensitivityRow> kernel_size_sensitivity(
    const DatasetEntry& entry, const std::vector<int>& sizes,
    const solver::SolveConfig& base, const std::vector<std::uint64_t>& seeds) {
    if (!entry.sharp)
        throw ConfigError("kernel_size_sensitivity: entry needs ground truth");
    if (sizes.empty()) throw ConfigError("kernel_size_sensitivity: no sizes");

    const ImageField blurred_y = color::luma(entry.blurred);
    const ImageField truth = color::luma(*entry.sharp);

    std::vector<SensitivityRow> rows;
    const std::vector<std::pair<std::string, solver::SolveMode>> modes = {
        {"wdip", solver::SolveMode::Wdip},
        {"selfdeblur", solver::SolveMode::SelfDeblur}};
    for (const auto& [mode_name, mode] : modes) {
        double first_psnr = 0.0;
        for (std::size_t si = 0; si < sizes.size(); ++si) {
            const int n = sizes[si];
            solver::SolveConfig cfg = base;
            cfg.mode = mode;
            cfg.kernel_size = n;
            if (mode == solver::SolveMode::Wdip) {
                const auto spec =
                    kernel_init::dataset_sigma({blurred_y}, {n});
                cfg.aux_init = kernel_init::init_kernel(spec, n);
            }
            double mean = 0.0;
            for (std::uint64_t seed : seeds) {
                cfg.seed = seed;
                const solver::SolveResult res = solver::run(cfg, blurred_y);
                mean += metrics::psnr(res.sharp, truth);
            }
            mean /= static_cast<double>(seeds.size());
            if (si == 0) first_psnr = mean;
            rows.push_back({mode_name, n, mean, mean - first_psnr});
        }
    }
    return rows;
}

}  // namespace wdip::bench
