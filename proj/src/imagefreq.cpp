/* SPDX-FileCopyrightText: 2026 The wdip authors
 * SPDX-License-Identifier: Apache-2.0 */
#include "wdip/imagefreq.hpp"

#include <algorithm>
#include <cmath>

namespace wdip::imagefreq {

namespace {

constexpr int kMinFreqDim = 8;

void check_freq_dims(const ImageField& image) {
    if (image.height() < kMinFreqDim || image.width() < kMinFreqDim)
        throw DimensionError("frequency ops need H,W >= 8");
}

void check_kernel_fits(const Kernel& kernel, int h, int w) {
    if (kernel.size() > std::min(h, w))
        throw DimensionError("kernel larger than image");
}

}  // namespace

SpectralField transform(const ImageField& image) {
    if (image.channels() != 1) throw DimensionError("transform: single channel only");
    return fft::forward(image.data(), image.height(), image.width());
}

ImageField inverse_transform(const SpectralField& spectrum) {
    ImageField out(spectrum.height, spectrum.width, 1);
    fft::inverse_real(spectrum, out.data());
    return out;
}

ImageField embed_kernel(const Kernel& kernel, int height, int width) {
    check_kernel_fits(kernel, height, width);
    ImageField field(height, width, 1);
    const int n = kernel.size();
    const int c = (n - 1) / 2;
    for (int y = 0; y < n; ++y) {
        for (int x = 0; x < n; ++x) {
            const int fy = ((y - c) % height + height) % height;
            const int fx = ((x - c) % width + width) % width;
            field.at(fy, fx) += kernel.at(y, x);
        }
    }
    return field;
}

SpectralField kernel_spectrum(const Kernel& kernel, int height, int width) {
    const ImageField embedded = embed_kernel(kernel, height, width);
    return fft::forward(embedded.data(), height, width);
}

ImageField circular_convolve(const ImageField& image, const Kernel& kernel) {
    if (image.channels() != 1)
        throw DimensionError("circular_convolve: single channel only");
    check_freq_dims(image);
    check_kernel_fits(kernel, image.height(), image.width());

    SpectralField xs = transform(image);
    const SpectralField ks = kernel_spectrum(kernel, image.height(), image.width());
    for (std::size_t i = 0; i < xs.size(); ++i) xs.bins[i] *= ks.bins[i];
    ImageField out(image.height(), image.width(), 1, image.color_space());
    fft::inverse_real(xs, out.data());
    return out;
}

void wiener_apply(const SpectralField& kernel_spectrum,
                  const SpectralField& blurred_spectrum, double c, double* out) {
    SpectralField w;
    w.height = blurred_spectrum.height;
    w.width = blurred_spectrum.width;
    w.bins.resize(blurred_spectrum.size());
    for (std::size_t i = 0; i < w.bins.size(); ++i) {
        const std::complex<double> k = kernel_spectrum.bins[i];
        const double denom = std::norm(k) + c;
        w.bins[i] = std::conj(k) * blurred_spectrum.bins[i] / denom;
    }
    fft::inverse_real(w, out);
}

ImageField wiener_deconvolve(const ImageField& blurred, const Kernel& kernel, double c,
                             double* imag_residue) {
    check_freq_dims(blurred);
    check_kernel_fits(kernel, blurred.height(), blurred.width());
    if (c < 0.0) throw ConfigError("wiener_deconvolve: c must be >= 0");
    if (!kernel.is_normalized())
        throw DegenerateInputError("wiener_deconvolve: kernel must be normalized");

    const SpectralField ks = kernel_spectrum(kernel, blurred.height(), blurred.width());
    if (c == 0.0) {
        double min_power = std::norm(ks.bins[0]);
        for (const auto& b : ks.bins) min_power = std::min(min_power, std::norm(b));
        if (min_power <= 1e-24)
            throw SingularSpectrumError(
                "wiener_deconvolve: c = 0 with singular kernel spectrum");
    }

    ImageField out(blurred.height(), blurred.width(), blurred.channels(),
                   blurred.color_space());
    double residue = 0.0;
    for (int ch = 0; ch < blurred.channels(); ++ch) {
        SpectralField bs = fft::forward(blurred.channel(ch), blurred.height(),
                                        blurred.width());
        SpectralField w;
        w.height = bs.height;
        w.width = bs.width;
        w.bins.resize(bs.size());
        for (std::size_t i = 0; i < w.bins.size(); ++i) {
            const std::complex<double> k = ks.bins[i];
            w.bins[i] = std::conj(k) * bs.bins[i] / (std::norm(k) + c);
        }
        residue = std::max(residue, fft::inverse_real(w, out.channel(ch)));
    }
    if (imag_residue) *imag_residue = residue;
    return out;
}

ImageField edge_taper(const ImageField& image, const Kernel& kernel) {
    check_freq_dims(image);
    const int band = kernel.size();
    const int h = image.height(), w = image.width();
    auto ramp = [band](int i, int n) {
        const double d = std::min(i, n - 1 - i) + 0.5;
        return std::clamp(d / band, 0.0, 1.0);
    };
    ImageField out(h, w, image.channels(), image.color_space());
    for (int ch = 0; ch < image.channels(); ++ch) {
        const ImageField blurred = circular_convolve(image.extract_channel(ch), kernel);
        for (int y = 0; y < h; ++y) {
            for (int x = 0; x < w; ++x) {
                const double a = ramp(y, h) * ramp(x, w);
                out.at(y, x, ch) = a * image.at(y, x, ch) + (1.0 - a) * blurred.at(y, x);
            }
        }
    }
    return out;
}

}  // namespace wdip::imagefreq
