/* SPDX-FileCopyrightText: 2026 The wdip authors
 * SPDX-License-Identifier: Apache-2.0 */
#include "wdip/plot.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace wdip::plot {

namespace {

void draw_line(ImageField& img, double x0, double y0, double x1, double y1,
               const std::array<double, 3>& rgb) {
    const double dx = x1 - x0, dy = y1 - y0;
    const int steps = std::max(2, static_cast<int>(std::ceil(
                                      std::max(std::abs(dx), std::abs(dy)) * 2)));
    for (int i = 0; i <= steps; ++i) {
        const double t = static_cast<double>(i) / steps;
        const int x = static_cast<int>(std::lround(x0 + t * dx));
        const int y = static_cast<int>(std::lround(y0 + t * dy));
        if (x < 0 || y < 0 || x >= img.width() || y >= img.height()) continue;
        for (int c = 0; c < 3; ++c) img.at(y, x, c) = rgb[c];
    }
}

}  // namespace

ImageField render_lines(const std::vector<Series>& series, int width, int height,
                        bool log_y) {
    ImageField img(height, width, 3, ColorSpace::Rgb, 1.0);

    const int ml = 48, mr = 12, mt = 12, mb = 32;  // margins
    const double px0 = ml, px1 = width - mr;
    const double py0 = height - mb, py1 = mt;  // y grows upward on screen

    double xmin = std::numeric_limits<double>::max(), xmax = -xmin;
    double ymin = xmin, ymax = -xmin;
    for (const auto& s : series) {
        for (std::size_t i = 0; i < s.x.size(); ++i) {
            double y = s.y[i];
            if (log_y) {
                if (y <= 0) continue;
                y = std::log10(y);
            }
            xmin = std::min(xmin, s.x[i]);
            xmax = std::max(xmax, s.x[i]);
            ymin = std::min(ymin, y);
            ymax = std::max(ymax, y);
        }
    }
    if (!(xmax > xmin)) xmax = xmin + 1;
    if (!(ymax > ymin)) ymax = ymin + 1;

    auto sx = [&](double x) { return px0 + (x - xmin) / (xmax - xmin) * (px1 - px0); };
    auto sy = [&](double y) {
        if (log_y) y = std::log10(std::max(y, 1e-300));
        return py0 + (y - ymin) / (ymax - ymin) * (py1 - py0);
    };

    const std::array<double, 3> axis{0.25, 0.25, 0.25};
    draw_line(img, px0, py0, px1, py0, axis);
    draw_line(img, px0, py0, px0, py1, axis);

    for (const auto& s : series) {
        bool have_prev = false;
        double lx = 0, ly = 0;
        for (std::size_t i = 0; i < s.x.size(); ++i) {
            if (log_y && s.y[i] <= 0) {
                have_prev = false;
                continue;
            }
            const double cx = sx(s.x[i]), cy = sy(s.y[i]);
            if (have_prev) draw_line(img, lx, ly, cx, cy, s.rgb);
            lx = cx;
            ly = cy;
            have_prev = true;
        }
    }
    return img;
}

}  // namespace wdip::plot
