/* SPDX-FileCopyrightText: 2026 The wdip authors
 * SPDX-License-Identifier: Apache-2.0 */
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "wdip/imagefreq.hpp"
#include "wdip/metrics.hpp"
#include "wdip/rng.hpp"

using namespace wdip;

namespace {

ImageField random_image(int h, int w, Rng& rng) {
    ImageField img(h, w, 1);
    for (std::size_t i = 0; i < img.size(); ++i) img.data()[i] = rng.uniform();
    return img;
}

Kernel random_normalized_kernel(int n, Rng& rng) {
    Kernel k(n);
    for (std::size_t i = 0; i < k.count(); ++i) k.data()[i] = rng.uniform();
    return k.normalized();
}

// Independent oracle: direct double-loop wraparound convolution with the
// kernel anchored at its geometric center.
ImageField brute_circular_convolve(const ImageField& img, const Kernel& k) {
    const int h = img.height(), w = img.width(), n = k.size();
    const int c = (n - 1) / 2;
    ImageField out(h, w, 1);
    for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x) {
            double acc = 0.0;
            for (int ky = 0; ky < n; ++ky)
                for (int kx = 0; kx < n; ++kx) {
                    const int sy = ((y - (ky - c)) % h + h) % h;
                    const int sx = ((x - (kx - c)) % w + w) % w;
                    acc += k.at(ky, kx) * img.at(sy, sx);
                }
            out.at(y, x) = acc;
        }
    return out;
}

double max_abs_diff(const ImageField& a, const ImageField& b) {
    double m = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i)
        m = std::max(m, std::abs(a.data()[i] - b.data()[i]));
    return m;
}

}  // namespace

TEST_CASE("spectral round trip is lossless") {
    Rng rng(1);
    const ImageField img = random_image(24, 17, rng);
    const SpectralField spec = imagefreq::transform(img);
    const ImageField back = imagefreq::inverse_transform(spec);
    for (std::size_t i = 0; i < img.size(); ++i)
        CHECK(back.data()[i] ==
              doctest::Approx(img.data()[i]).epsilon(1e-10).scale(1.0));
}

TEST_CASE("circular_convolve: identity kernel") {
    Rng rng(2);
    const ImageField img = random_image(16, 16, rng);
    const ImageField out = imagefreq::circular_convolve(img, Kernel::delta(1));
    CHECK(max_abs_diff(out, img) < 1e-12);
}

TEST_CASE("circular_convolve: constant image is preserved by normalized kernels") {
    Rng rng(3);
    const ImageField img(12, 14, 1, ColorSpace::Gray, 0.37);
    const Kernel k = random_normalized_kernel(5, rng);
    const ImageField out = imagefreq::circular_convolve(img, k);
    CHECK(max_abs_diff(out, img) < 1e-12);
}

TEST_CASE("circular_convolve matches the brute-force spatial oracle") {
    Rng rng(4);
    const ImageField img = random_image(8, 8, rng);
    const Kernel k = random_normalized_kernel(3, rng);
    const ImageField fft_path = imagefreq::circular_convolve(img, k);
    const ImageField spatial = brute_circular_convolve(img, k);
    CHECK(max_abs_diff(fft_path, spatial) < 1e-8);
}

TEST_CASE("fft path equals brute force on all small sizes and kernels") {
    Rng rng(5);
    for (int h : {8, 9, 12, 16}) {
        for (int w : {8, 11, 16}) {
            for (int n : {1, 3, 5}) {
                const ImageField img = random_image(h, w, rng);
                const Kernel k = random_normalized_kernel(n, rng);
                const ImageField a = imagefreq::circular_convolve(img, k);
                const ImageField b = brute_circular_convolve(img, k);
                CAPTURE(h);
                CAPTURE(w);
                CAPTURE(n);
                CHECK(max_abs_diff(a, b) < 1e-8);
            }
        }
    }
}

TEST_CASE("circular_convolve is linear") {
    Rng rng(6);
    const ImageField x = random_image(16, 16, rng);
    const ImageField y = random_image(16, 16, rng);
    const Kernel k = random_normalized_kernel(5, rng);
    const double a = 0.7, b = -1.3;
    ImageField combo(16, 16, 1);
    for (std::size_t i = 0; i < combo.size(); ++i)
        combo.data()[i] = a * x.data()[i] + b * y.data()[i];
    const ImageField lhs = imagefreq::circular_convolve(combo, k);
    const ImageField cx = imagefreq::circular_convolve(x, k);
    const ImageField cy = imagefreq::circular_convolve(y, k);
    for (std::size_t i = 0; i < lhs.size(); ++i)
        CHECK(lhs.data()[i] ==
              doctest::Approx(a * cx.data()[i] + b * cy.data()[i]).epsilon(1e-8));
}

TEST_CASE("circular_convolve rejects oversized kernels and multi-channel input") {
    Rng rng(7);
    const ImageField img = random_image(8, 8, rng);
    CHECK_THROWS_AS(imagefreq::circular_convolve(img, Kernel::delta(9)),
                    DimensionError);
    const ImageField rgb(16, 16, 3, ColorSpace::Rgb, 0.5);
    CHECK_THROWS_AS(imagefreq::circular_convolve(rgb, Kernel::delta(3)),
                    DimensionError);
    const ImageField tiny(4, 4, 1);
    CHECK_THROWS_AS(imagefreq::circular_convolve(tiny, Kernel::delta(3)),
                    DimensionError);
}

TEST_CASE("embed_kernel: delta spectrum is flat") {
    const ImageField e = imagefreq::embed_kernel(Kernel::delta(3), 16, 16);
    const SpectralField spec = imagefreq::transform(e);
    for (const auto& bin : spec.bins)
        CHECK(std::abs(bin) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("embed_kernel: full-size embedding keeps the mass") {
    Rng rng(8);
    const Kernel k = random_normalized_kernel(9, rng);
    const ImageField e = imagefreq::embed_kernel(k, 9, 9);
    double total = 0.0;
    for (std::size_t i = 0; i < e.size(); ++i) total += e.data()[i];
    CHECK(total == doctest::Approx(k.sum()).epsilon(1e-12));
    // center value of the kernel lands on (0,0)
    CHECK(e.at(0, 0) == doctest::Approx(k.at(4, 4)));
    CHECK_THROWS_AS(imagefreq::embed_kernel(k, 8, 9), DimensionError);
}

TEST_CASE("wiener_deconvolve: delta kernel identities") {
    Rng rng(9);
    const ImageField img = random_image(16, 16, rng);

    double residue = 0.0;
    const ImageField exact =
        imagefreq::wiener_deconvolve(img, Kernel::delta(3), 0.0, &residue);
    CHECK(max_abs_diff(exact, img) < 1e-10);
    CHECK(residue < 1e-9);

    const ImageField scaled = imagefreq::wiener_deconvolve(img, Kernel::delta(3), 0.025);
    for (std::size_t i = 0; i < img.size(); ++i)
        CHECK(scaled.data()[i] ==
              doctest::Approx(img.data()[i] / 1.025).epsilon(1e-9));
}

TEST_CASE("wiener_deconvolve: noiseless gaussian round trip reaches 40 dB") {
    const ImageField sharp = bench::cartoon_scene(64, 64, 10);
    const Kernel g = Kernel::gaussian(9, 1.0);
    const ImageField blurred = imagefreq::circular_convolve(sharp, g);
    const ImageField restored = imagefreq::wiener_deconvolve(blurred, g, 1e-6);
    CHECK(metrics::psnr(restored, sharp) >= 40.0);
}

TEST_CASE("wiener_deconvolve error improves monotonically as c shrinks") {
    Rng rng(11);
    const ImageField sharp = random_image(32, 32, rng);
    const Kernel g = Kernel::gaussian(7, 1.2);
    const ImageField blurred = imagefreq::circular_convolve(sharp, g);
    double prev = std::numeric_limits<double>::max();
    for (double c : {1e-1, 1e-2, 1e-3, 1e-4}) {
        const ImageField restored = imagefreq::wiener_deconvolve(blurred, g, c);
        double err = 0.0;
        for (std::size_t i = 0; i < sharp.size(); ++i) {
            const double d = restored.data()[i] - sharp.data()[i];
            err += d * d;
        }
        err = std::sqrt(err);
        CHECK(err < prev);
        prev = err;
    }
}

TEST_CASE("wiener_deconvolve guards its preconditions") {
    Rng rng(12);
    const ImageField img = random_image(16, 16, rng);
    // unnormalized kernel rejected
    Kernel bad(3, 0.2);
    CHECK_THROWS_AS(imagefreq::wiener_deconvolve(img, bad, 0.025),
                    DegenerateInputError);
    // c = 0 with a singular spectrum (uniform kernel has exact nulls)
    const Kernel uni = Kernel::uniform(3);
    ImageField img15 = random_image(15, 15, rng);
    CHECK_THROWS_AS(imagefreq::wiener_deconvolve(img15, uni, 0.0),
                    SingularSpectrumError);
    CHECK_THROWS_AS(imagefreq::wiener_deconvolve(img, Kernel::delta(3), -1.0),
                    ConfigError);
}

TEST_CASE("wiener output is not clamped") {
    // sharpening overshoot must survive
    ImageField img(16, 16, 1, ColorSpace::Gray, 0.0);
    for (int y = 0; y < 16; ++y)
        for (int x = 8; x < 16; ++x) img.at(y, x) = 1.0;
    const Kernel g = Kernel::gaussian(5, 1.0);
    const ImageField blurred = imagefreq::circular_convolve(img, g);
    const ImageField w = imagefreq::wiener_deconvolve(blurred, g, 1e-3);
    double lo = 1e9, hi = -1e9;
    for (std::size_t i = 0; i < w.size(); ++i) {
        lo = std::min(lo, w.data()[i]);
        hi = std::max(hi, w.data()[i]);
    }
    CHECK(lo < -1e-4);
    CHECK(hi > 1.0 + 1e-4);
}
