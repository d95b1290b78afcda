/* SPDX-FileCopyrightText: 2026 The wdip authors
 * SPDX-License-Identifier: Apache-2.0 */
#include "wdip/image.hpp"

#include <algorithm>
#include <cmath>

namespace wdip {

ImageField::ImageField(int height, int width, int channels, ColorSpace cs, double fill)
    : height_(height), width_(width), channels_(channels), color_space_(cs) {
    if (height < 1 || width < 1 || (channels != 1 && channels != 3))
        throw DimensionError("ImageField: bad dimensions");
    data_.assign(static_cast<std::size_t>(height) * width * channels, fill);
}

void ImageField::clamp01() {
    for (double& v : data_) v = std::clamp(v, 0.0, 1.0);
}

bool ImageField::all_finite() const {
    return std::all_of(data_.begin(), data_.end(),
                       [](double v) { return std::isfinite(v); });
}

ImageField ImageField::extract_channel(int c) const {
    ImageField out(height_, width_, 1, ColorSpace::Gray);
    std::copy(channel(c), channel(c) + plane_size(), out.data());
    return out;
}

Kernel::Kernel(int n, double fill) : n_(n) {
    if (n < 1 || n % 2 == 0) throw DimensionError("Kernel: size must be odd and >= 1");
    data_.assign(static_cast<std::size_t>(n) * n, fill);
}

double Kernel::sum() const {
    double s = 0.0;
    for (double v : data_) s += v;
    return s;
}

double Kernel::min() const { return *std::min_element(data_.begin(), data_.end()); }
double Kernel::max() const { return *std::max_element(data_.begin(), data_.end()); }

bool Kernel::is_normalized(double tol) const {
    return min() >= 0.0 && std::abs(sum() - 1.0) <= tol;
}

bool Kernel::all_finite() const {
    return std::all_of(data_.begin(), data_.end(),
                       [](double v) { return std::isfinite(v); });
}

Kernel Kernel::normalized() const {
    const double s = sum();
    if (std::abs(s) < 1e-300) throw DegenerateInputError("Kernel: zero sum");
    Kernel out = *this;
    for (double& v : out.data_) v /= s;
    return out;
}

void Kernel::clip_nonnegative() {
    for (double& v : data_) v = std::max(v, 0.0);
}

Kernel Kernel::delta(int n) {
    Kernel k(n);
    k.at((n - 1) / 2, (n - 1) / 2) = 1.0;
    return k;
}

Kernel Kernel::uniform(int n) {
    return Kernel(n, 1.0 / (static_cast<double>(n) * n));
}

Kernel Kernel::gaussian(int n, double sigma) {
    return gaussian_aniso(n, sigma, sigma, 0.0);
}

Kernel Kernel::gaussian_aniso(int n, double sigma_major, double sigma_minor,
                              double angle_rad) {
    if (sigma_major <= 0.0 || sigma_minor <= 0.0)
        throw DegenerateInputError("Kernel: sigma must be positive");
    Kernel k(n);
    const double c = (n - 1) / 2.0;
    const double ca = std::cos(angle_rad), sa = std::sin(angle_rad);
    for (int y = 0; y < n; ++y) {
        for (int x = 0; x < n; ++x) {
            const double dy = y - c, dx = x - c;
            const double u = ca * dx + sa * dy;   // along major axis
            const double v = -sa * dx + ca * dy;  // along minor axis
            k.at(y, x) = std::exp(-0.5 * (u * u / (sigma_major * sigma_major) +
                                          v * v / (sigma_minor * sigma_minor)));
        }
    }
    return k.normalized();
}

}  // namespace wdip
