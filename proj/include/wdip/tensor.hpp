/* SPDX-FileCopyrightText: 2026 The wdip authors
 * SPDX-License-Identifier: Apache-2.0 */
#pragma once

#include <cstddef>
#include <initializer_list>
#include <numeric>
#include <vector>

#include "wdip/errors.hpp"

namespace wdip {

/// Dense row-major double tensor. Rank is small (<= 4 in practice); shape
/// {C,H,W} for feature maps, {N} for vectors, {} disallowed.
class Tensor {
  public:
    Tensor() = default;
    explicit Tensor(std::vector<int> shape, double fill = 0.0)
        : shape_(std::move(shape)), data_(checked_size(shape_), fill) {}
    Tensor(std::initializer_list<int> shape, double fill = 0.0)
        : Tensor(std::vector<int>(shape), fill) {}

    static Tensor scalar(double v) {
        Tensor t({1});
        t.data_[0] = v;
        return t;
    }

    const std::vector<int>& shape() const { return shape_; }
    int rank() const { return static_cast<int>(shape_.size()); }
    int dim(int i) const { return shape_[static_cast<std::size_t>(i)]; }
    std::size_t size() const { return data_.size(); }

    double* data() { return data_.data(); }
    const double* data() const { return data_.data(); }
    double& operator[](std::size_t i) { return data_[i]; }
    double operator[](std::size_t i) const { return data_[i]; }

    /// (c,y,x) accessor for rank-3 tensors.
    double& at(int c, int y, int x) {
        return data_[(static_cast<std::size_t>(c) * shape_[1] + y) * shape_[2] + x];
    }
    double at(int c, int y, int x) const {
        return data_[(static_cast<std::size_t>(c) * shape_[1] + y) * shape_[2] + x];
    }

    bool same_shape(const Tensor& other) const { return shape_ == other.shape_; }

    void fill(double v) { std::fill(data_.begin(), data_.end(), v); }

    Tensor reshaped(std::vector<int> shape) const {
        Tensor t;
        t.shape_ = std::move(shape);
        if (checked_size(t.shape_) != data_.size())
            throw DimensionError("reshape changes element count");
        t.data_ = data_;
        return t;
    }

  private:
    static std::size_t checked_size(const std::vector<int>& shape) {
        if (shape.empty()) throw DimensionError("tensor rank must be >= 1");
        std::size_t n = 1;
        for (int d : shape) {
            if (d <= 0) throw DimensionError("tensor dims must be positive");
            n *= static_cast<std::size_t>(d);
        }
        return n;
    }

    std::vector<int> shape_;
    std::vector<double> data_;
};

}  // namespace wdip
