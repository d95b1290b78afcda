/* SPDX-FileCopyrightText: 2026 The wdip authors
 * SPDX-License-Identifier: Apache-2.0 */
#pragma once

#include "wdip/image.hpp"

namespace wdip::color {

struct YSplit {
    ImageField y;   // luma, optimized
    ImageField cb;  // chroma residuals, carried through untouched
    ImageField cr;
};

/// BT.601 full-range split; recombine(split(x)) restores x.
YSplit to_y_channel(const ImageField& rgb);
ImageField from_y_channel(const ImageField& y, const ImageField& cb,
                          const ImageField& cr);

/// Y channel of anything: gray passes through, RGB converts.
ImageField luma(const ImageField& image);

}  // namespace wdip::color
