/* SPDX-FileCopyrightText: 2026 The wdip authors
 * SPDX-License-Identifier: Apache-2.0 */
#pragma once

#include <cstddef>
#include <vector>

#include "wdip/errors.hpp"

namespace wdip {

enum class ColorSpace { Gray, Rgb, Ycbcr };

/// H×W (or H×W×3) intensity grid, planar channel layout, nominal range [0,1].
class ImageField {
  public:
    ImageField() = default;
    ImageField(int height, int width, int channels = 1,
               ColorSpace cs = ColorSpace::Gray, double fill = 0.0);

    int height() const { return height_; }
    int width() const { return width_; }
    int channels() const { return channels_; }
    ColorSpace color_space() const { return color_space_; }
    void set_color_space(ColorSpace cs) { color_space_ = cs; }

    double& at(int y, int x, int c = 0) {
        return data_[(static_cast<std::size_t>(c) * height_ + y) * width_ + x];
    }
    double at(int y, int x, int c = 0) const {
        return data_[(static_cast<std::size_t>(c) * height_ + y) * width_ + x];
    }

    double* channel(int c) {
        return data_.data() + static_cast<std::size_t>(c) * height_ * width_;
    }
    const double* channel(int c) const {
        return data_.data() + static_cast<std::size_t>(c) * height_ * width_;
    }

    double* data() { return data_.data(); }
    const double* data() const { return data_.data(); }
    std::size_t size() const { return data_.size(); }
    std::size_t plane_size() const {
        return static_cast<std::size_t>(height_) * width_;
    }

    bool same_shape(const ImageField& o) const {
        return height_ == o.height_ && width_ == o.width_ && channels_ == o.channels_;
    }

    void clamp01();
    bool all_finite() const;

    /// Single-channel view copy of channel c.
    ImageField extract_channel(int c) const;

  private:
    int height_ = 0, width_ = 0, channels_ = 0;
    ColorSpace color_space_ = ColorSpace::Gray;
    std::vector<double> data_;
};

/// n×n blur kernel, n odd, geometric center at ((n-1)/2, (n-1)/2).
/// Values may be free (unnormalized, even negative) while a kernel is being
/// optimized; use normalized()/is_normalized() where the simplex matters.
class Kernel {
  public:
    Kernel() = default;
    explicit Kernel(int n, double fill = 0.0);

    int size() const { return n_; }
    double& at(int y, int x) { return data_[static_cast<std::size_t>(y) * n_ + x]; }
    double at(int y, int x) const {
        return data_[static_cast<std::size_t>(y) * n_ + x];
    }
    double* data() { return data_.data(); }
    const double* data() const { return data_.data(); }
    std::size_t count() const { return data_.size(); }

    double sum() const;
    double min() const;
    double max() const;
    bool is_normalized(double tol = 1e-6) const;
    bool all_finite() const;

    /// Copy scaled to unit sum. Degenerate (|sum| ~ 0) input throws.
    Kernel normalized() const;

    /// Entrywise max(value, 0).
    void clip_nonnegative();

    static Kernel delta(int n);
    static Kernel uniform(int n);
    /// Isotropic Gaussian with std sigma (pixels), normalized to unit sum.
    static Kernel gaussian(int n, double sigma);
    /// Oriented anisotropic Gaussian, normalized to unit sum.
    static Kernel gaussian_aniso(int n, double sigma_major, double sigma_minor,
                                 double angle_rad);

  private:
    int n_ = 0;
    std::vector<double> data_;
};

}  // namespace wdip
