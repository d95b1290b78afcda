/* SPDX-FileCopyrightText: 2026 The wdip authors
 * SPDX-License-Identifier: Apache-2.0 */
#include "wdip/io.hpp"

#include <png.h>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <memory>
#include <sstream>
#include <vector>

namespace wdip::io {

namespace {

struct FileCloser {
    void operator()(std::FILE* f) const {
        if (f) std::fclose(f);
    }
};
using FilePtr = std::unique_ptr<std::FILE, FileCloser>;

FilePtr open_file(const std::string& path, const char* mode) {
    FilePtr f(std::fopen(path.c_str(), mode));
    if (!f) throw IoError("cannot open " + path);
    return f;
}

}  // namespace

ImageField load_png(const std::string& path) {
    FilePtr file = open_file(path, "rb");
    png_structp png =
        png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
    if (!png) throw IoError("png_create_read_struct failed");
    png_infop info = png_create_info_struct(png);
    if (!info) {
        png_destroy_read_struct(&png, nullptr, nullptr);
        throw IoError("png_create_info_struct failed");
    }
    if (setjmp(png_jmpbuf(png))) {
        png_destroy_read_struct(&png, &info, nullptr);
        throw IoError("failed to decode " + path);
    }
    png_init_io(png, file.get());
    // Expand palettes / low-bit gray, drop alpha; 16-bit stays big-endian
    // and is assembled by hand below.
    png_read_png(png, info,
                 PNG_TRANSFORM_EXPAND | PNG_TRANSFORM_STRIP_ALPHA |
                     PNG_TRANSFORM_GRAY_TO_RGB,
                 nullptr);

    const int h = static_cast<int>(png_get_image_height(png, info));
    const int w = static_cast<int>(png_get_image_width(png, info));
    const int depth = png_get_bit_depth(png, info);
    const int color = png_get_color_type(png, info);
    png_bytepp rows = png_get_rows(png, info);

    if (color != PNG_COLOR_TYPE_RGB || (depth != 8 && depth != 16)) {
        png_destroy_read_struct(&png, &info, nullptr);
        throw IoError("unsupported png layout in " + path);
    }

    // Collapse to gray when all channels agree.
    ImageField rgb(h, w, 3, ColorSpace::Rgb);
    const double scale = depth == 8 ? 1.0 / 255.0 : 1.0 / 65535.0;
    for (int y = 0; y < h; ++y) {
        const png_bytep row = rows[y];
        for (int x = 0; x < w; ++x) {
            for (int c = 0; c < 3; ++c) {
                double v;
                if (depth == 8) {
                    v = row[3 * x + c] * scale;
                } else {
                    const int o = 2 * (3 * x + c);
                    v = ((row[o] << 8) | row[o + 1]) * scale;
                }
                rgb.at(y, x, c) = std::clamp(v, 0.0, 1.0);
            }
        }
    }
    png_destroy_read_struct(&png, &info, nullptr);

    bool gray = true;
    for (std::size_t i = 0; i < rgb.plane_size() && gray; ++i)
        gray = rgb.data()[i] == rgb.channel(1)[i] && rgb.data()[i] == rgb.channel(2)[i];
    if (!gray) return rgb;
    ImageField g = rgb.extract_channel(0);
    return g;
}

void save_png(const std::string& path, const ImageField& image, int bit_depth) {
    if (bit_depth != 8 && bit_depth != 16) throw ConfigError("png bit depth: 8 or 16");
    FilePtr file = open_file(path, "wb");
    png_structp png =
        png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
    if (!png) throw IoError("png_create_write_struct failed");
    png_infop info = png_create_info_struct(png);
    if (!info) {
        png_destroy_write_struct(&png, nullptr);
        throw IoError("png_create_info_struct failed");
    }
    if (setjmp(png_jmpbuf(png))) {
        png_destroy_write_struct(&png, &info);
        throw IoError("failed to encode " + path);
    }
    png_init_io(png, file.get());

    const int h = image.height(), w = image.width(), ch = image.channels();
    const int color = ch == 1 ? PNG_COLOR_TYPE_GRAY : PNG_COLOR_TYPE_RGB;
    png_set_IHDR(png, info, w, h, bit_depth, color, PNG_INTERLACE_NONE,
                 PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
    png_write_info(png, info);

    const double maxval = bit_depth == 8 ? 255.0 : 65535.0;
    const int bytes = bit_depth / 8;
    std::vector<png_byte> row(static_cast<std::size_t>(w) * ch * bytes);
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            for (int c = 0; c < ch; ++c) {
                const double v = std::clamp(image.at(y, x, c), 0.0, 1.0);
                const auto q = static_cast<std::uint16_t>(std::lround(v * maxval));
                if (bit_depth == 8) {
                    row[static_cast<std::size_t>(x) * ch + c] =
                        static_cast<png_byte>(q);
                } else {
                    const std::size_t o = 2 * (static_cast<std::size_t>(x) * ch + c);
                    row[o] = static_cast<png_byte>(q >> 8);
                    row[o + 1] = static_cast<png_byte>(q & 0xff);
                }
            }
        }
        png_write_row(png, row.data());
    }
    png_write_end(png, info);
    png_destroy_write_struct(&png, &info);
}

namespace {
constexpr char kFgridMagic[4] = {'W', 'F', 'G', '1'};
}

void save_fgrid(const std::string& path, const ImageField& image) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open " + path);
    std::int32_t hdr[4] = {image.height(), image.width(), image.channels(),
                           static_cast<std::int32_t>(image.color_space())};
    out.write(kFgridMagic, 4);
    out.write(reinterpret_cast<const char*>(hdr), sizeof(hdr));
    out.write(reinterpret_cast<const char*>(image.data()),
              static_cast<std::streamsize>(image.size() * sizeof(double)));
    if (!out) throw IoError("failed writing " + path);
}

ImageField load_fgrid(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path);
    char magic[4];
    std::int32_t hdr[4];
    in.read(magic, 4);
    in.read(reinterpret_cast<char*>(hdr), sizeof(hdr));
    if (!in || std::memcmp(magic, kFgridMagic, 4) != 0)
        throw IoError("not a float grid file: " + path);
    ImageField image(hdr[0], hdr[1], hdr[2], static_cast<ColorSpace>(hdr[3]));
    in.read(reinterpret_cast<char*>(image.data()),
            static_cast<std::streamsize>(image.size() * sizeof(double)));
    if (!in) throw IoError("truncated float grid file: " + path);
    return image;
}

Kernel load_kernel_text(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open " + path);
    std::vector<std::vector<double>> rows;
    std::string line;
    while (std::getline(in, line)) {
        std::istringstream ls(line);
        std::vector<double> row;
        double v;
        while (ls >> v) row.push_back(v);
        if (!row.empty()) rows.push_back(std::move(row));
    }
    const int n = static_cast<int>(rows.size());
    if (n == 0) throw IoError("empty kernel file: " + path);
    for (const auto& r : rows)
        if (static_cast<int>(r.size()) != n)
            throw IoError("kernel file is not a square matrix: " + path);
    Kernel k(n);
    for (int y = 0; y < n; ++y)
        for (int x = 0; x < n; ++x) k.at(y, x) = rows[y][x];
    return k;
}

void save_kernel_text(const std::string& path, const Kernel& kernel) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot open " + path);
    out.precision(17);
    for (int y = 0; y < kernel.size(); ++y) {
        for (int x = 0; x < kernel.size(); ++x) {
            if (x) out << ' ';
            out << kernel.at(y, x);
        }
        out << '\n';
    }
    if (!out) throw IoError("failed writing " + path);
}

void save_kernel_png(const std::string& path, const Kernel& kernel) {
    const double peak = kernel.max();
    ImageField img(kernel.size(), kernel.size(), 1);
    if (peak > 0.0)
        for (int y = 0; y < kernel.size(); ++y)
            for (int x = 0; x < kernel.size(); ++x)
                img.at(y, x) = std::max(kernel.at(y, x), 0.0) / peak;
    save_png(path, img, 8);
}

}  // namespace wdip::io
