/* SPDX-FileCopyrightText: 2026 The wdip authors
 * SPDX-License-Identifier: Apache-2.0 */
#include "wdip/solver.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>
#include <ostream>

#include "wdip/fft.hpp"
#include "wdip/imagefreq.hpp"

namespace wdip::solver {

double lr_schedule_networks(int iter) {
    if (iter < 2000) return 1e-4;
    if (iter < 3000) return 5e-5;
    if (iter < 4000) return 2.5e-5;
    return 1.25e-5;
}

double lr_schedule_kernel(int iter, int kernel_size) {
    const auto scaled = [kernel_size](int base) {
        return static_cast<int>(
            std::ceil(base * static_cast<double>(kernel_size) / 10.0));
    };
    const int t1 = scaled(70);
    const int t2 = t1 + scaled(50);
    const int t3 = t2 + scaled(50);
    if (iter < t1) return 1e-6;
    if (iter < t2) return 1e-5;
    if (iter < t3) return 1e-4;
    return 1e-3;
}

// ---------------------------------------------------------------------------
// Trace

const char* RunTrace::csv_header() {
    return "iter,data,image_match,kernel_match,kernel_l2,total,shift_y,shift_x,"
           "lr_net,lr_k";
}

void RunTrace::write_csv(std::ostream& out) const {
    out << csv_header() << '\n';
    char line[512];
    for (const IterationRecord& r : records) {
        std::snprintf(line, sizeof(line),
                      "%d,%.17g,%.17g,%.17g,%.17g,%.17g,%d,%d,%.17g,%.17g\n", r.iter,
                      r.loss.data, r.loss.image_match, r.loss.kernel_match,
                      r.loss.kernel_l2, r.loss.total, r.loss.alignment_shift[0],
                      r.loss.alignment_shift[1], r.lr_net, r.lr_kernel);
        out << line;
    }
}

// ---------------------------------------------------------------------------
// Adam

Adam::Adam(const std::vector<Tensor>& params, AdamConfig cfg) : cfg_(cfg) {
    m_.reserve(params.size());
    v_.reserve(params.size());
    for (const Tensor& p : params) {
        m_.emplace_back(p.shape(), 0.0);
        v_.emplace_back(p.shape(), 0.0);
    }
}

void Adam::step(std::vector<Tensor>& params, const std::vector<Tensor>& grads,
                double lr) {
    if (params.size() != m_.size() || grads.size() != m_.size())
        throw Error("Adam: parameter list mismatch");
    ++t_;
    const double bc1 = 1.0 - std::pow(cfg_.beta1, static_cast<double>(t_));
    const double bc2 = 1.0 - std::pow(cfg_.beta2, static_cast<double>(t_));
    for (std::size_t i = 0; i < params.size(); ++i) {
        Tensor& p = params[i];
        const Tensor& g = grads[i];
        Tensor& m = m_[i];
        Tensor& v = v_[i];
        for (std::size_t j = 0; j < p.size(); ++j) {
            m[j] = cfg_.beta1 * m[j] + (1.0 - cfg_.beta1) * g[j];
            v[j] = cfg_.beta2 * v[j] + (1.0 - cfg_.beta2) * g[j] * g[j];
            const double mhat = m[j] / bc1;
            const double vhat = v[j] / bc2;
            p[j] -= lr * mhat / (std::sqrt(vhat) + cfg_.eps);
        }
    }
}

void Adam::serialize(std::ostream& out) const {
    const std::int64_t t = t_;
    out.write(reinterpret_cast<const char*>(&t), sizeof(t));
    for (const auto* vec : {&m_, &v_})
        for (const Tensor& tns : *vec)
            out.write(reinterpret_cast<const char*>(tns.data()),
                      static_cast<std::streamsize>(tns.size() * sizeof(double)));
}

void Adam::deserialize(std::istream& in) {
    std::int64_t t = 0;
    in.read(reinterpret_cast<char*>(&t), sizeof(t));
    t_ = t;
    for (auto* vec : {&m_, &v_})
        for (Tensor& tns : *vec)
            in.read(reinterpret_cast<char*>(tns.data()),
                    static_cast<std::streamsize>(tns.size() * sizeof(double)));
    if (!in) throw IoError("truncated optimizer state");
}

// ---------------------------------------------------------------------------
// HqsOptimizer

namespace {

SolveConfig validate_config(SolveConfig config) {
    if (config.iterations < 1) throw ConfigError("iterations must be >= 1");
    if (config.kernel_size < 1 || config.kernel_size % 2 == 0)
        throw ConfigError("kernel size must be odd and >= 1");
    if (config.mode == SolveMode::SelfDeblur) {
        config.weights.alpha = 0.0;
        config.weights.beta = 0.0;
        config.weights.lambda = 0.0;
    } else if (config.aux_init.size() == 0) {
        throw ConfigError("wdip mode needs an auxiliary kernel initialization");
    } else if (config.aux_init.size() != config.kernel_size) {
        throw ConfigError("aux kernel initialization size != kernel size");
    }
    return config;
}

}  // namespace

HqsOptimizer::HqsOptimizer(const SolveConfig& config, const ImageField& blurred)
    : config_(validate_config(config)) {
    if (blurred.channels() != 1)
        throw DimensionError("solver: single-channel input (use the Y channel)");
    blurred_ = nets::image_to_tensor(blurred);
    gen_ = nets::GeneratorState::create(config_.profile, config_.kernel_size,
                                        blurred.height(), blurred.width(),
                                        config_.seed);
    adam_nets_ = Adam(collect_params());
    if (config_.mode == SolveMode::Wdip) {
        aux_ = nets::kernel_to_tensor(config_.aux_init);
        have_aux_ = true;
        adam_aux_ = Adam({aux_});
    }
}

IterationRecord HqsOptimizer::step_networks() {
    const objective::HQSWeights& wts = config_.weights;
    ad::Graph g;
    std::vector<ad::Var> param_vars;
    ad::Var f = gen_.image_net.build(g, gen_.latents.z_image, true, &param_vars);
    ad::Var gk = gen_.kernel_net.build(g, gen_.latents.z_kernel, true, &param_vars);

    IterationRecord rec;
    rec.iter = iter_;
    rec.lr_net = lr_schedule_networks(iter_) * (config_.lr_net_base / 1e-4);
    rec.lr_kernel =
        lr_schedule_kernel(iter_, config_.kernel_size) * (config_.lr_kernel_base / 1e-6);

    ad::Var data = objective::data_term_graph(f, gk, blurred_, iter_, wts);
    ad::Var step_objective = data;
    rec.loss.data = data.value()[0];
    rec.loss.total = rec.loss.data;

    if (have_aux_) {
        ad::Var aux = g.constant(aux_);
        if (wts.alpha != 0.0) {
            ad::Var im = objective::image_match_graph(f, blurred_, aux, wts);
            rec.loss.image_match = im.value()[0];
            step_objective = ad::add(step_objective, ad::mul_scalar(im, wts.alpha));
        }
        if (wts.beta != 0.0) {
            ad::Var km =
                objective::kernel_match_graph(gk, aux, &rec.loss.alignment_shift);
            rec.loss.kernel_match = km.value()[0];
            step_objective = ad::add(step_objective, ad::mul_scalar(km, wts.beta));
        }
        if (wts.lambda != 0.0)
            rec.loss.kernel_l2 = objective::kernel_l2_graph(aux).value()[0];
        rec.loss.total = rec.loss.data + wts.alpha * rec.loss.image_match +
                         wts.beta * rec.loss.kernel_match +
                         wts.lambda * rec.loss.kernel_l2;
    }

    if (!std::isfinite(rec.loss.total))
        throw Error("non-finite loss in networks step");

    g.backward(step_objective);

    std::vector<Tensor> grads;
    grads.reserve(param_vars.size());
    for (const ad::Var& v : param_vars) grads.push_back(v.grad());

    std::vector<Tensor> params = collect_params();
    adam_nets_.step(params, grads, rec.lr_net);
    scatter_params(params);
    return rec;
}

void HqsOptimizer::step_kernel() {
    if (!have_aux_) return;  // SelfDeblur skips the auxiliary update
    const objective::HQSWeights& wts = config_.weights;

    ad::Graph g;
    ad::Var aux = g.leaf(aux_, true);
    ad::Var total;
    {
        // (theta, phi) enter as constants; only k is free here.
        ad::Var f = gen_.image_net.build(g, gen_.latents.z_image, false);
        ad::Var gk = gen_.kernel_net.build(g, gen_.latents.z_kernel, false);
        ad::Var im = objective::image_match_graph(f, blurred_, aux, wts);
        ad::Var km = objective::kernel_match_graph(gk, aux);
        ad::Var l2 = objective::kernel_l2_graph(aux);
        total = ad::add(ad::mul_scalar(im, wts.alpha),
                        ad::add(ad::mul_scalar(km, wts.beta),
                                ad::mul_scalar(l2, wts.lambda)));
    }
    if (!std::isfinite(total.value()[0]))
        throw Error("non-finite loss in kernel step");

    g.backward(total);

    const double lr =
        lr_schedule_kernel(iter_, config_.kernel_size) * (config_.lr_kernel_base / 1e-6);
    std::vector<Tensor> params{aux_};
    std::vector<Tensor> grads{aux.grad()};
    adam_aux_.step(params, grads, lr);
    aux_ = std::move(params[0]);

    if (config_.project_aux_nonneg)
        for (std::size_t i = 0; i < aux_.size(); ++i)
            aux_[i] = std::max(aux_[i], 0.0);
    if (config_.renormalize_aux) {
        const double s = kernels::reduce_sum(aux_.data(), aux_.size());
        if (std::abs(s) > 1e-300)
            for (std::size_t i = 0; i < aux_.size(); ++i) aux_[i] /= s;
    }
}

Kernel HqsOptimizer::aux_kernel_raw() const {
    if (!have_aux_) throw Error("no auxiliary kernel in this mode");
    return nets::tensor_to_kernel(aux_);
}

Kernel HqsOptimizer::aux_kernel_readout() const {
    Kernel k = aux_kernel_raw();
    k.clip_nonnegative();
    return k;
}

ImageField HqsOptimizer::current_image() const {
    return nets::image_generator_forward(gen_, gen_.latents);
}

Kernel HqsOptimizer::current_kernel() const {
    return nets::kernel_generator_forward(gen_, gen_.latents);
}

std::vector<Tensor> HqsOptimizer::collect_params() const {
    std::vector<Tensor> params;
    params.reserve(gen_.image_net.params().count() + gen_.kernel_net.params().count());
    for (const Tensor& t : gen_.image_net.params().tensors) params.push_back(t);
    for (const Tensor& t : gen_.kernel_net.params().tensors) params.push_back(t);
    return params;
}

void HqsOptimizer::scatter_params(const std::vector<Tensor>& params) {
    std::size_t i = 0;
    for (Tensor& t : gen_.image_net.params().tensors) t = params[i++];
    for (Tensor& t : gen_.kernel_net.params().tensors) t = params[i++];
}

// ---------------------------------------------------------------------------
// Checkpoints

namespace {
constexpr char kCkptMagic[8] = {'W', 'D', 'I', 'P', 'C', 'K', 'P', '1'};

void write_pod(std::ostream& out, const void* p, std::size_t n) {
    out.write(reinterpret_cast<const char*>(p), static_cast<std::streamsize>(n));
}
void read_pod(std::istream& in, void* p, std::size_t n) {
    in.read(reinterpret_cast<char*>(p), static_cast<std::streamsize>(n));
}
}  // namespace

void HqsOptimizer::save_checkpoint(const std::string& path) const {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open " + path);
    out.write(kCkptMagic, sizeof(kCkptMagic));
    const nets::NetProfile& p = config_.profile;
    const std::int32_t arch[6] = {p.scales, p.channels,      p.skip_channels,
                                  p.z_channels, p.kernel_hidden, p.z_dim};
    write_pod(out, arch, sizeof(arch));
    const std::int32_t dims[3] = {config_.kernel_size, gen_.out_h, gen_.out_w};
    write_pod(out, dims, sizeof(dims));
    write_pod(out, &config_.seed, sizeof(config_.seed));
    const std::int32_t iter = iter_;
    write_pod(out, &iter, sizeof(iter));
    const std::int32_t mode = config_.mode == SolveMode::Wdip ? 1 : 0;
    write_pod(out, &mode, sizeof(mode));

    gen_.image_net.params().serialize(out);
    gen_.kernel_net.params().serialize(out);
    adam_nets_.serialize(out);
    const std::int32_t has_aux = have_aux_ ? 1 : 0;
    write_pod(out, &has_aux, sizeof(has_aux));
    if (have_aux_) {
        write_pod(out, aux_.data(), aux_.size() * sizeof(double));
        adam_aux_.serialize(out);
    }
    if (!out) throw IoError("failed writing checkpoint " + path);
}

void HqsOptimizer::load_checkpoint(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path);
    char magic[8];
    read_pod(in, magic, sizeof(magic));
    if (std::memcmp(magic, kCkptMagic, sizeof(magic)) != 0)
        throw IoError("not a checkpoint file: " + path);
    std::int32_t arch[6];
    read_pod(in, arch, sizeof(arch));
    const nets::NetProfile& p = config_.profile;
    const std::int32_t expect[6] = {p.scales, p.channels,      p.skip_channels,
                                    p.z_channels, p.kernel_hidden, p.z_dim};
    if (std::memcmp(arch, expect, sizeof(arch)) != 0)
        throw IoError("checkpoint architecture mismatch");
    std::int32_t dims[3];
    read_pod(in, dims, sizeof(dims));
    if (dims[0] != config_.kernel_size || dims[1] != gen_.out_h ||
        dims[2] != gen_.out_w)
        throw IoError("checkpoint dimension mismatch");
    std::uint64_t seed = 0;
    read_pod(in, &seed, sizeof(seed));
    if (seed != config_.seed) throw IoError("checkpoint seed mismatch");
    std::int32_t iter = 0;
    read_pod(in, &iter, sizeof(iter));
    iter_ = iter;
    std::int32_t mode = 0;
    read_pod(in, &mode, sizeof(mode));
    if ((mode == 1) != (config_.mode == SolveMode::Wdip))
        throw IoError("checkpoint mode mismatch");

    gen_.image_net.params().deserialize(in);
    gen_.kernel_net.params().deserialize(in);
    adam_nets_.deserialize(in);
    std::int32_t has_aux = 0;
    read_pod(in, &has_aux, sizeof(has_aux));
    if ((has_aux == 1) != have_aux_) throw IoError("checkpoint aux mismatch");
    if (have_aux_) {
        read_pod(in, aux_.data(), aux_.size() * sizeof(double));
        adam_aux_.deserialize(in);
    }
    if (!in) throw IoError("truncated checkpoint " + path);
}

// ---------------------------------------------------------------------------
// run

SolveResult run(const SolveConfig& config, const ImageField& blurred) {
    HqsOptimizer opt(config, blurred);
    RunTrace trace;
    trace.records.reserve(static_cast<std::size_t>(config.iterations));

    auto snapshot = [&](int iter) {
        if (config.snapshot_stride <= 0 || iter % config.snapshot_stride != 0) return;
        Snapshot s;
        s.iter = iter;
        s.gen_image = opt.current_image();
        s.gen_kernel = opt.current_kernel();
        if (config.mode == SolveMode::Wdip) s.aux_kernel = opt.aux_kernel_readout();
        trace.snapshots.push_back(std::move(s));
    };

    try {
        for (int iter = 0; iter < config.iterations; ++iter) {
            trace.records.push_back(opt.step_networks());
            if (config.mode == SolveMode::Wdip) opt.step_kernel();
            snapshot(iter);
            opt.next_iteration();
        }
    } catch (const Error& e) {
        throw AbortedRunError(std::string("run aborted at iteration ") +
                                  std::to_string(opt.iteration()) + ": " + e.what(),
                              std::move(trace), opt.iteration());
    }

    SolveResult result;
    result.sharp = opt.current_image();
    result.sharp.clamp01();
    result.kernel = opt.current_kernel();
    if (config.mode == SolveMode::Wdip) result.aux_kernel = opt.aux_kernel_readout();
    result.trace = std::move(trace);
    return result;
}

// ---------------------------------------------------------------------------
// DIP fit demo

namespace {

struct BandMasks {
    std::vector<bool> low, high;
    std::size_t n_low = 0, n_high = 0;
};

BandMasks make_bands(int h, int w) {
    BandMasks bm;
    bm.low.resize(static_cast<std::size_t>(h) * w);
    bm.high.resize(bm.low.size());
    for (int y = 0; y < h; ++y) {
        const int fy = std::min(y, h - y);
        const double ny = static_cast<double>(fy) / (h / 2.0);
        for (int x = 0; x < w; ++x) {
            const int fx = std::min(x, w - x);
            const double nx = static_cast<double>(fx) / (w / 2.0);
            const double rho = std::sqrt((ny * ny + nx * nx) / 2.0);
            const std::size_t i = static_cast<std::size_t>(y) * w + x;
            bm.low[i] = rho <= 0.125;
            bm.high[i] = rho >= 0.5;
            bm.n_low += bm.low[i];
            bm.n_high += bm.high[i];
        }
    }
    return bm;
}

DipFitRecord band_record(int iter, const Tensor& output, const Tensor& target,
                         const BandMasks& bm) {
    DipFitRecord r;
    r.iter = iter;
    Tensor residual = output;
    for (std::size_t i = 0; i < residual.size(); ++i) residual[i] -= target[i];
    double full = 0.0;
    for (std::size_t i = 0; i < residual.size(); ++i) full += residual[i] * residual[i];
    const double n = static_cast<double>(residual.size());
    r.mse_full = full / n;

    const SpectralField spec =
        fft::forward(residual.data(), residual.dim(0), residual.dim(1));
    double low = 0.0, high = 0.0;
    for (std::size_t i = 0; i < spec.size(); ++i) {
        const double p = std::norm(spec.bins[i]);
        if (bm.low[i]) low += p;
        if (bm.high[i]) high += p;
    }
    // Parseval: sum|R_u|^2 / N^2 over a band is that band's share of the MSE.
    r.mse_low = low / (n * n);
    r.mse_high = high / (n * n);
    return r;
}

}  // namespace

int DipFitTrace::first_below_full(double threshold) const {
    for (const auto& r : records)
        if (r.mse_full < threshold) return r.iter;
    return -1;
}
int DipFitTrace::first_below_low(double threshold) const {
    for (const auto& r : records)
        if (r.mse_low < threshold) return r.iter;
    return -1;
}
int DipFitTrace::first_below_high(double threshold) const {
    for (const auto& r : records)
        if (r.mse_high < threshold) return r.iter;
    return -1;
}

DipFitTrace dip_fit_demo(const ImageField& target, int iterations, std::uint64_t seed,
                         const nets::NetProfile& profile) {
    if (target.channels() != 1)
        throw DimensionError("dip_fit_demo: single channel only");
    if (iterations < 0) throw ConfigError("dip_fit_demo: iterations must be >= 0");
    const Tensor target_t = nets::image_to_tensor(target);
    nets::GeneratorState gen = nets::GeneratorState::create(
        profile, 3, target.height(), target.width(), seed);
    Adam adam(gen.image_net.params().tensors);
    const BandMasks bm = make_bands(target.height(), target.width());

    DipFitTrace trace;
    trace.records.reserve(static_cast<std::size_t>(iterations) + 1);
    trace.records.push_back(
        band_record(0, gen.image_net.forward(gen.latents.z_image), target_t, bm));

    for (int iter = 0; iter < iterations; ++iter) {
        ad::Graph g;
        std::vector<ad::Var> params;
        ad::Var f = gen.image_net.build(g, gen.latents.z_image, true, &params);
        ad::Var loss = ad::mse(f, g.constant(target_t));
        g.backward(loss);
        std::vector<Tensor> grads;
        grads.reserve(params.size());
        for (const ad::Var& v : params) grads.push_back(v.grad());
        adam.step(gen.image_net.params().tensors, grads, lr_schedule_networks(iter));
        trace.records.push_back(band_record(
            iter + 1, gen.image_net.forward(gen.latents.z_image), target_t, bm));
    }
    return trace;
}

}  // namespace wdip::solver
