/* SPDX-FileCopyrightText: 2026 The wdip authors
 * SPDX-License-Identifier: Apache-2.0 */
#include "wdip/color.hpp"

#include <algorithm>

namespace wdip::color {

namespace {
// BT.601 luma coefficients
constexpr double kKr = 0.299;
constexpr double kKb = 0.114;
constexpr double kKg = 1.0 - kKr - kKb;
}  // namespace

YSplit to_y_channel(const ImageField& rgb) {
    if (rgb.channels() != 3)
        throw DimensionError("to_y_channel: 3-channel input required");
    const int h = rgb.height(), w = rgb.width();
    YSplit out{ImageField(h, w, 1, ColorSpace::Ycbcr),
               ImageField(h, w, 1, ColorSpace::Ycbcr),
               ImageField(h, w, 1, ColorSpace::Ycbcr)};
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            const double r = rgb.at(y, x, 0), g = rgb.at(y, x, 1), b = rgb.at(y, x, 2);
            const double luma = kKr * r + kKg * g + kKb * b;
            out.y.at(y, x) = luma;
            out.cb.at(y, x) = (b - luma) / (2.0 * (1.0 - kKb)) + 0.5;
            out.cr.at(y, x) = (r - luma) / (2.0 * (1.0 - kKr)) + 0.5;
        }
    }
    return out;
}

ImageField from_y_channel(const ImageField& y, const ImageField& cb,
                          const ImageField& cr) {
    if (!y.same_shape(cb) || !y.same_shape(cr) || y.channels() != 1)
        throw DimensionError("from_y_channel: incompatible planes");
    const int h = y.height(), w = y.width();
    ImageField rgb(h, w, 3, ColorSpace::Rgb);
    for (int yy = 0; yy < h; ++yy) {
        for (int x = 0; x < w; ++x) {
            const double luma = y.at(yy, x);
            const double db = (cb.at(yy, x) - 0.5) * 2.0 * (1.0 - kKb);
            const double dr = (cr.at(yy, x) - 0.5) * 2.0 * (1.0 - kKr);
            const double r = luma + dr;
            const double b = luma + db;
            const double g = (luma - kKr * r - kKb * b) / kKg;
            rgb.at(yy, x, 0) = std::clamp(r, 0.0, 1.0);
            rgb.at(yy, x, 1) = std::clamp(g, 0.0, 1.0);
            rgb.at(yy, x, 2) = std::clamp(b, 0.0, 1.0);
        }
    }
    return rgb;
}

ImageField luma(const ImageField& image) {
    if (image.channels() == 1) return image;
    return to_y_channel(image).y;
}

}  // namespace wdip::color
