/* SPDX-FileCopyrightText: 2026 The wdip authors
 * SPDX-License-Identifier: Apache-2.0 */
#include "wdip/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "wdip/autodiff.hpp"
#include "wdip/fft.hpp"
#include "wdip/imagefreq.hpp"
#include "wdip/nets.hpp"

namespace wdip::metrics {

namespace {

double mse_of(const ImageField& a, const ImageField& b) {
    double acc = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double d = a.data()[i] - b.data()[i];
        acc += d * d;
    }
    return acc / static_cast<double>(a.size());
}

void check_same_shape(const ImageField& a, const ImageField& b, const char* what) {
    if (!a.same_shape(b))
        throw DimensionError(std::string(what) + ": shape mismatch");
}

/// SSD against truth after removing the best circular translation.
double shift_invariant_ssd(const ImageField& estimate, const ImageField& truth) {
    const int h = truth.height(), w = truth.width();
    SpectralField fe = imagefreq::transform(estimate);
    const SpectralField ft = imagefreq::transform(truth);
    // peak of IFFT(conj(F{truth}) F{est}) at s maximizes sum truth(t) est(t+s)
    for (std::size_t i = 0; i < fe.size(); ++i)
        fe.bins[i] = std::conj(ft.bins[i]) * fe.bins[i];
    std::vector<double> corr(fe.size());
    fft::inverse_real(fe, corr.data());
    std::size_t best = 0;
    for (std::size_t i = 1; i < corr.size(); ++i)
        if (corr[i] > corr[best]) best = i;
    const int dy = static_cast<int>(best) / w;
    const int dx = static_cast<int>(best) % w;

    double ssd = 0.0;
    for (int y = 0; y < h; ++y) {
        const int sy = (y + dy) % h;
        for (int x = 0; x < w; ++x) {
            const int sx = (x + dx) % w;
            const double d = estimate.at(sy, sx) - truth.at(y, x);
            ssd += d * d;
        }
    }
    return ssd;
}

}  // namespace

double psnr(const ImageField& estimate, const ImageField& truth) {
    check_same_shape(estimate, truth, "psnr");
    const double mse = mse_of(estimate, truth);
    if (mse == 0.0) return std::numeric_limits<double>::infinity();
    return 10.0 * std::log10(1.0 / mse);
}

double ssim(const ImageField& estimate, const ImageField& truth) {
    check_same_shape(estimate, truth, "ssim");
    if (estimate.channels() != 1) throw DimensionError("ssim: single channel only");
    ad::Graph g;
    ad::Var a = g.constant(nets::image_to_tensor(estimate));
    ad::Var b = g.constant(nets::image_to_tensor(truth));
    return ad::ssim_mean(a, b).value()[0];
}

double error_ratio(const ImageField& blurred, const ImageField& truth,
                   const Kernel& estimated_kernel, const Kernel& true_kernel,
                   double c) {
    check_same_shape(blurred, truth, "error_ratio");
    if (blurred.channels() != 1)
        throw DimensionError("error_ratio: single channel only");
    if (!estimated_kernel.is_normalized() || !true_kernel.is_normalized())
        throw DegenerateInputError("error_ratio: kernels must be normalized");
    const ImageField est = imagefreq::wiener_deconvolve(blurred, estimated_kernel, c);
    const ImageField ref = imagefreq::wiener_deconvolve(blurred, true_kernel, c);
    const double num = shift_invariant_ssd(est, truth);
    const double den = shift_invariant_ssd(ref, truth);
    return num / (den + 1e-12);
}

ImageField percentile_clip(const ImageField& image, double lo_pct, double hi_pct) {
    if (!(lo_pct >= 0.0 && hi_pct <= 100.0 && lo_pct < hi_pct))
        throw ConfigError("percentile_clip: need 0 <= lo < hi <= 100");
    std::vector<double> sorted(image.data(), image.data() + image.size());
    std::sort(sorted.begin(), sorted.end());
    auto pick = [&](double pct) {
        const double pos = pct / 100.0 * static_cast<double>(sorted.size() - 1);
        const std::size_t i = static_cast<std::size_t>(pos);
        const double f = pos - static_cast<double>(i);
        return i + 1 < sorted.size() ? sorted[i] * (1.0 - f) + sorted[i + 1] * f
                                     : sorted[i];
    };
    const double lo = pick(lo_pct), hi = pick(hi_pct);
    ImageField out = image;
    for (std::size_t i = 0; i < out.size(); ++i)
        out.data()[i] = std::clamp(out.data()[i], lo, hi);
    return out;
}

double otsu_threshold(const ImageField& image) {
    double lo = image.data()[0], hi = lo;
    for (std::size_t i = 0; i < image.size(); ++i) {
        lo = std::min(lo, image.data()[i]);
        hi = std::max(hi, image.data()[i]);
    }
    if (hi <= lo) throw DegenerateInputError("otsu_threshold: constant image");

    constexpr int kBins = 256;
    std::vector<double> hist(kBins, 0.0);
    const double scale = kBins / (hi - lo);
    for (std::size_t i = 0; i < image.size(); ++i) {
        int b = static_cast<int>((image.data()[i] - lo) * scale);
        b = std::clamp(b, 0, kBins - 1);
        hist[b] += 1.0;
    }
    const double total = static_cast<double>(image.size());

    double sum_all = 0.0;
    for (int b = 0; b < kBins; ++b) sum_all += b * hist[b];

    // between-class variance sweep; ties averaged
    double w0 = 0.0, sum0 = 0.0, best = -1.0;
    std::vector<int> best_ks;
    for (int k = 0; k < kBins - 1; ++k) {
        w0 += hist[k];
        sum0 += k * hist[k];
        const double w1 = total - w0;
        if (w0 == 0.0 || w1 == 0.0) continue;
        const double mu0 = sum0 / w0;
        const double mu1 = (sum_all - sum0) / w1;
        const double sigma_b = w0 * w1 * (mu0 - mu1) * (mu0 - mu1);
        if (sigma_b > best) {
            best = sigma_b;
            best_ks.assign(1, k);
        } else if (sigma_b == best) {
            best_ks.push_back(k);
        }
    }
    double k_mean = 0.0;
    for (int k : best_ks) k_mean += k;
    k_mean /= static_cast<double>(best_ks.size());
    // threshold sits at the upper edge of bin k
    return lo + (k_mean + 1.0) / scale;
}

ImageField threshold_mask(const ImageField& image, double threshold) {
    ImageField mask(image.height(), image.width(), image.channels());
    for (std::size_t i = 0; i < image.size(); ++i)
        mask.data()[i] = image.data()[i] > threshold ? 1.0 : 0.0;
    return mask;
}

double dice(const ImageField& mask_a, const ImageField& mask_b) {
    check_same_shape(mask_a, mask_b, "dice");
    std::size_t na = 0, nb = 0, inter = 0;
    for (std::size_t i = 0; i < mask_a.size(); ++i) {
        const bool a = mask_a.data()[i] > 0.5;
        const bool b = mask_b.data()[i] > 0.5;
        na += a;
        nb += b;
        inter += a && b;
    }
    if (na + nb == 0) return 1.0;
    return 2.0 * static_cast<double>(inter) / static_cast<double>(na + nb);
}

double microscopy_dice(const ImageField& estimate, const ImageField& truth,
                       double lo_pct, double hi_pct) {
    const ImageField ce = percentile_clip(estimate, lo_pct, hi_pct);
    const ImageField ct = percentile_clip(truth, lo_pct, hi_pct);
    const ImageField me = threshold_mask(ce, otsu_threshold(ce));
    const ImageField mt = threshold_mask(ct, otsu_threshold(ct));
    return dice(me, mt);
}

}  // namespace wdip::metrics
