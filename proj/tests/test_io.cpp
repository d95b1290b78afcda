/* SPDX-FileCopyrightText: 2026 The wdip authors
 * SPDX-License-Identifier: Apache-2.0 */
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <filesystem>

#include "wdip/io.hpp"
#include "wdip/rng.hpp"

using namespace wdip;
namespace fs = std::filesystem;

namespace {

struct TempDir {
    fs::path path;
    TempDir() {
        path = fs::temp_directory_path() / "wdip_io_test";
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
    std::string file(const std::string& name) const { return (path / name).string(); }
};

}  // namespace

TEST_CASE("png round trip, 8 and 16 bit, gray and rgb") {
    TempDir tmp;
    Rng rng(1);

    ImageField gray(9, 13, 1);
    for (std::size_t i = 0; i < gray.size(); ++i) gray.data()[i] = rng.uniform();

    io::save_png(tmp.file("g8.png"), gray, 8);
    const ImageField g8 = io::load_png(tmp.file("g8.png"));
    REQUIRE(g8.channels() == 1);
    REQUIRE(g8.height() == 9);
    for (std::size_t i = 0; i < gray.size(); ++i)
        CHECK(g8.data()[i] == doctest::Approx(gray.data()[i]).epsilon(1.0 / 255));

    io::save_png(tmp.file("g16.png"), gray, 16);
    const ImageField g16 = io::load_png(tmp.file("g16.png"));
    for (std::size_t i = 0; i < gray.size(); ++i)
        CHECK(g16.data()[i] == doctest::Approx(gray.data()[i]).epsilon(1.0 / 65535));

    ImageField rgb(7, 5, 3, ColorSpace::Rgb);
    for (std::size_t i = 0; i < rgb.size(); ++i) rgb.data()[i] = rng.uniform();
    io::save_png(tmp.file("c16.png"), rgb, 16);
    const ImageField c16 = io::load_png(tmp.file("c16.png"));
    REQUIRE(c16.channels() == 3);
    for (std::size_t i = 0; i < rgb.size(); ++i)
        CHECK(c16.data()[i] == doctest::Approx(rgb.data()[i]).epsilon(1.0 / 65535));
}

TEST_CASE("png save clamps out-of-range values") {
    TempDir tmp;
    ImageField img(8, 8, 1);
    img.at(0, 0) = -0.5;
    img.at(0, 1) = 1.5;
    io::save_png(tmp.file("clamp.png"), img, 8);
    const ImageField back = io::load_png(tmp.file("clamp.png"));
    CHECK(back.at(0, 0) == 0.0);
    CHECK(back.at(0, 1) == 1.0);
}

TEST_CASE("float grid round trip is exact") {
    TempDir tmp;
    Rng rng(2);
    ImageField img(11, 6, 3, ColorSpace::Rgb);
    for (std::size_t i = 0; i < img.size(); ++i) img.data()[i] = rng.uniform(-3, 3);
    io::save_fgrid(tmp.file("a.fgrid"), img);
    const ImageField back = io::load_fgrid(tmp.file("a.fgrid"));
    REQUIRE(back.same_shape(img));
    CHECK(back.color_space() == ColorSpace::Rgb);
    for (std::size_t i = 0; i < img.size(); ++i)
        CHECK(back.data()[i] == img.data()[i]);
}

TEST_CASE("kernel text round trip is exact") {
    TempDir tmp;
    Rng rng(3);
    Kernel k(5);
    for (std::size_t i = 0; i < k.count(); ++i) k.data()[i] = rng.uniform(-1, 1);
    io::save_kernel_text(tmp.file("k.txt"), k);
    const Kernel back = io::load_kernel_text(tmp.file("k.txt"));
    REQUIRE(back.size() == 5);
    for (std::size_t i = 0; i < k.count(); ++i) CHECK(back.data()[i] == k.data()[i]);
}

TEST_CASE("io errors") {
    TempDir tmp;
    CHECK_THROWS_AS(io::load_png(tmp.file("missing.png")), IoError);
    CHECK_THROWS_AS(io::load_fgrid(tmp.file("missing.fgrid")), IoError);
    CHECK_THROWS_AS(io::load_kernel_text(tmp.file("missing.txt")), IoError);

    std::FILE* f = std::fopen(tmp.file("ragged.txt").c_str(), "w");
    std::fputs("1 2 3\n4 5\n", f);
    std::fclose(f);
    CHECK_THROWS_AS(io::load_kernel_text(tmp.file("ragged.txt")), IoError);
}
