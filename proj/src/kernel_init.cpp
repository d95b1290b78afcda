/* SPDX-FileCopyrightText: 2026 The wdip authors
 * SPDX-License-Identifier: Apache-2.0 */
#include "wdip/kernel_init.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>

#include "wdip/fft.hpp"
#include "wdip/imagefreq.hpp"

namespace wdip::kernel_init {

PSDEstimate psd_radius(const ImageField& image, double t) {
    if (image.channels() != 1)
        throw DimensionError("psd_radius: single channel only");
    if (!(t > 0.0 && t < 1.0)) throw ConfigError("psd_radius: t must be in (0,1)");

    const int h = image.height(), w = image.width();
    const SpectralField spec = imagefreq::transform(image);
    const int cy = h / 2, cx = w / 2;
    const int q_max = std::min(h, w) / 2;

    // Chebyshev rings around the shifted DC bin; ring r is exactly the
    // boundary of the half-width-r square.
    std::vector<double> ring(std::max(h, w) + 1, 0.0);
    for (int y = 0; y < h; ++y) {
        // distance of original bin y from the shifted center
        const int dy = std::abs(((y + cy) % h) - cy);
        for (int x = 0; x < w; ++x) {
            const int dx = std::abs(((x + cx) % w) - cx);
            const double p = std::norm(spec.at(y, x));
            ring[std::max(dy, dx)] += p;
        }
    }
    ring[0] -= std::norm(spec.at(0, 0));  // exclude DC

    double total = 0.0;
    for (double v : ring) total += v;
    if (total <= 1e-20)
        throw DegenerateInputError("psd_radius: zero spectral power outside DC");

    double mass = ring[0];
    int q = q_max;
    for (int r = 1; r <= q_max; ++r) {
        mass += ring[r];
        if (mass >= t * total) {
            q = r;
            break;
        }
    }
    return PSDEstimate{q, t, total};
}

ImageField spatial_gaussian_from_radius(int q, int height, int width) {
    if (q < 1) throw ConfigError("spatial_gaussian_from_radius: q >= 1");
    const int h = height, w = width;
    const int cy = h / 2, cx = w / 2;

    SpectralField spec;
    spec.height = h;
    spec.width = w;
    spec.bins.resize(static_cast<std::size_t>(h) * w);
    const double s2 = 2.0 * static_cast<double>(q) * q;
    for (int y = 0; y < h; ++y) {
        const int dy = std::abs(((y + cy) % h) - cy);
        for (int x = 0; x < w; ++x) {
            const int dx = std::abs(((x + cx) % w) - cx);
            spec.at(y, x) = std::exp(-(static_cast<double>(dy) * dy + dx * dx) / s2);
        }
    }

    std::vector<double> spatial(spec.size());
    fft::inverse_real(spec, spatial.data());

    // center the peak, clip fft noise, renormalize
    ImageField out(h, w, 1);
    for (int y = 0; y < h; ++y) {
        const int sy = ((y - cy) % h + h) % h;
        for (int x = 0; x < w; ++x) {
            const int sx = ((x - cx) % w + w) % w;
            out.at(y, x) = std::max(spatial[static_cast<std::size_t>(sy) * w + sx], 0.0);
        }
    }
    double total = 0.0;
    for (std::size_t i = 0; i < out.size(); ++i) total += out.data()[i];
    if (total <= 0.0)
        throw DegenerateInputError("spatial_gaussian_from_radius: vanished field");
    for (std::size_t i = 0; i < out.size(); ++i) out.data()[i] /= total;
    return out;
}

double cropped_sigma(const ImageField& field, int crop_n) {
    if (field.channels() != 1)
        throw DimensionError("cropped_sigma: single channel only");
    if (crop_n < 1 || crop_n % 2 == 0)
        throw DimensionError("cropped_sigma: crop size must be odd");
    if (crop_n > std::min(field.height(), field.width()))
        throw DimensionError("cropped_sigma: crop larger than field");

    const int cy = field.height() / 2, cx = field.width() / 2;
    const int half = (crop_n - 1) / 2;
    double total = 0.0;
    for (int y = -half; y <= half; ++y)
        for (int x = -half; x <= half; ++x) total += field.at(cy + y, cx + x);
    if (total <= 0.0) throw DegenerateInputError("cropped_sigma: empty crop");

    double my = 0.0, mx = 0.0;
    for (int y = -half; y <= half; ++y)
        for (int x = -half; x <= half; ++x) {
            const double v = field.at(cy + y, cx + x) / total;
            my += v * y;
            mx += v * x;
        }
    double m2y = 0.0, m2x = 0.0;
    for (int y = -half; y <= half; ++y)
        for (int x = -half; x <= half; ++x) {
            const double v = field.at(cy + y, cx + x) / total;
            m2y += v * (y - my) * (y - my);
            m2x += v * (x - mx) * (x - mx);
        }
    return std::sqrt(0.5 * (m2y + m2x));
}

KernelInitSpec dataset_sigma(const std::vector<ImageField>& images,
                             const std::vector<int>& kernel_sizes, double t) {
    if (images.empty() || images.size() != kernel_sizes.size())
        throw ConfigError("dataset_sigma: need equal-length non-empty lists");
    KernelInitSpec spec;
    spec.per_image_sigmas.reserve(images.size());
    for (std::size_t i = 0; i < images.size(); ++i) {
        try {
            const PSDEstimate psd = psd_radius(images[i], t);
            const ImageField g = spatial_gaussian_from_radius(
                psd.q, images[i].height(), images[i].width());
            const double sigma = cropped_sigma(g, kernel_sizes[i]);
            spec.per_image_sigmas.push_back(sigma / kernel_sizes[i]);
        } catch (const Error& e) {
            throw DegenerateInputError("dataset_sigma: image " + std::to_string(i) +
                                       ": " + e.what());
        }
    }
    double mean = 0.0;
    for (double s : spec.per_image_sigmas) mean += s;
    spec.sigma_k = mean / static_cast<double>(spec.per_image_sigmas.size());
    return spec;
}

Kernel init_kernel(const KernelInitSpec& spec, int kernel_size) {
    if (kernel_size < 1 || kernel_size % 2 == 0)
        throw DimensionError("init_kernel: kernel size must be odd");
    if (spec.sigma_k <= 0.0) throw ConfigError("init_kernel: sigma_k must be > 0");
    double std_px = spec.sigma_k * kernel_size;
    if (std_px < 0.5) {
        std::cerr << "init_kernel: std " << std_px
                  << " px is numerically a delta; clamping to 0.5 px\n";
        std_px = 0.5;
    }
    return Kernel::gaussian(kernel_size, std_px);
}

}  // namespace wdip::kernel_init
