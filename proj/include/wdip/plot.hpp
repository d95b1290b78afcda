/* SPDX-FileCopyrightText: 2026 The wdip authors
 * SPDX-License-Identifier: Apache-2.0 */
#pragma once

#include <array>
#include <string>
#include <vector>

#include "wdip/image.hpp"

namespace wdip::plot {

struct Series {
    std::string label;
    std::vector<double> x;
    std::vector<double> y;
    std::array<double, 3> rgb{0.0, 0.0, 0.0};
};

/// Minimal line chart (linear x, optional log10 y), for loss-curve exports.
ImageField render_lines(const std::vector<Series>& series, int width, int height,
                        bool log_y);

}  // namespace wdip::plot
