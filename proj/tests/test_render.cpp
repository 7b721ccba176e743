#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iterator>

#include "helpers.hpp"
#include "tileregu/fixtures.hpp"
#include "tileregu/render.hpp"

using namespace tileregu;

namespace {

std::string slurp(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    return {std::istreambuf_iterator<char>(f), std::istreambuf_iterator<char>()};
}

std::string temp_path(const std::string& name) {
    return (std::filesystem::temp_directory_path() / ("tileregu_" + name)).string();
}

RasterSet strip(std::vector<std::uint8_t> bits) {
    RasterSet r;
    r.n = 1;
    r.origin = {0.0};
    r.cell = 1;
    r.dims = {bits.size()};
    r.bitmap = std::move(bits);
    return r;
}

std::array<std::uint8_t, 3> pixel(const ImageBuffer& img, std::size_t x, std::size_t y) {
    const std::uint8_t* p = &img.pixels[(y * img.width + x) * 3];
    return {p[0], p[1], p[2]};
}

} // namespace

TEST_SUITE("render") {

TEST_CASE("one-dimensional strip") {
    ImageBuffer img = render_raster(strip({1, 0, 1, 0}));
    CHECK(img.width == 4);
    CHECK(img.height == 64);
    for (std::size_t y = 0; y < img.height; ++y) {
        CHECK(img.pixels[y * 4 + 0] == 0);
        CHECK(img.pixels[y * 4 + 1] == 255);
        CHECK(img.pixels[y * 4 + 2] == 0);
        CHECK(img.pixels[y * 4 + 3] == 255);
    }
}

TEST_CASE("empty raster renders white") {
    ImageBuffer img = render_raster(strip({0, 0, 0}));
    CHECK(count_value(img, 255) == img.pixels.size());
}

TEST_CASE("black pixels equal occupied cells, per strip row in 1-D") {
    for (auto& name : tile_fixture_names()) {
        DilationSystem sys = system_fixture(name);
        RasterSet r = rasterize_attractor(sys, sys.m() == 2 ? 16 : 10, std::ldexp(1.0, -7), 0.1);
        ImageBuffer img = render_raster(r);
        CHECK(count_value(img, 0) == r.occupied() * (r.n == 2 ? 1 : img.height));
        CHECK(count_value(img, 0) + count_value(img, 255) == img.pixels.size());
    }
}

TEST_CASE("higher y is drawn at the top") {
    RasterSet r;
    r.n = 2;
    r.origin = {0, 0};
    r.cell = 1;
    r.dims = {2, 2};
    r.bitmap = {0, 0, 1, 0}; // cell (0, 1)
    ImageBuffer img = render_raster(r);
    CHECK(img.pixels == std::vector<std::uint8_t>{0, 255, 255, 255});
}

TEST_CASE("antialiasing averages 2x2 blocks") {
    RasterSet r;
    r.n = 2;
    r.origin = {0, 0};
    r.cell = 1;
    r.dims = {2, 2};
    r.bitmap = {1, 1, 1, 0};
    ImageBuffer img = render_raster(r, RenderStyle::Antialiased);
    REQUIRE(img.pixels.size() == 1);
    CHECK(img.pixels[0] == 64);
}

TEST_CASE("rendering is a pure function of the raster") {
    RasterSet r = rasterize_attractor(system_fixture("bear"), 14, std::ldexp(1.0, -6), 0.1);
    CHECK(encode_pnm(render_raster(r)) == encode_pnm(render_raster(r)));
}

TEST_CASE("palette hash") {
    auto c = neighbor_color(1, 0);
    CHECK(c == neighbor_color(1, 0));
    // indices (73856093 mod 12) = 5 and (19349663 mod 12) = 11
    CHECK(neighbor_color(1, 0) == neighbor_color(13, 0));
    CHECK(neighbor_color(1, 0) != neighbor_color(0, 1));
    CHECK(neighbor_color(0, 0) == neighbor_color(12, 0));
}

TEST_CASE("square with four neighbours") {
    RasterSet r = rasterize_attractor(system_fixture("square4"), 8, 1.0 / 16, 0);
    LatticeSet nb({{1, 0}, {-1, 0}, {0, 1}, {0, -1}});
    ImageBuffer img = render_tiling(r, nb);
    REQUIRE(img.width == 48);
    REQUIRE(img.height == 48);
    // block centres; image row 0 is the top, i.e. shift y = +1
    CHECK(pixel(img, 24, 24) == std::array<std::uint8_t, 3>{0, 0, 0});
    CHECK(pixel(img, 40, 24) == neighbor_color(1, 0));
    CHECK(pixel(img, 8, 24) == neighbor_color(-1, 0));
    CHECK(pixel(img, 24, 8) == neighbor_color(0, 1));
    CHECK(pixel(img, 24, 40) == neighbor_color(0, -1));
    CHECK(pixel(img, 8, 8) == std::array<std::uint8_t, 3>{255, 255, 255});
    std::size_t white = 0;
    for (std::size_t i = 0; i < img.pixels.size(); i += 3) white += img.pixels[i] == 255 && img.pixels[i + 1] == 255 && img.pixels[i + 2] == 255;
    CHECK(white == 4 * 256);
}

TEST_CASE("empty neighbour set draws the base only") {
    RasterSet r = rasterize_attractor(system_fixture("square4"), 8, 1.0 / 16, 0);
    ImageBuffer img = render_tiling(r, LatticeSet());
    CHECK(img.width == 16);
    CHECK(count_value(img, 0) == 3 * 256);
}

TEST_CASE("dragon tiling patch has no holes in the middle") {
    DilationSystem dragon = system_fixture("dragon");
    const double h = std::ldexp(1.0, -8);
    RasterSet r = rasterize_attractor(dragon, 20, h, 0);
    ImageBuffer img = render_tiling(r, admissible_set(dragon));
    std::size_t covered = 0, total = 0;
    for (std::size_t y = img.height / 4; y < img.height * 3 / 4; ++y)
        for (std::size_t x = img.width / 4; x < img.width * 3 / 4; ++x) {
            auto p = pixel(img, x, y);
            ++total;
            covered += !(p[0] == 255 && p[1] == 255 && p[2] == 255);
        }
    const double frac = double(covered) / double(total);
    CHECK_MESSAGE(frac >= 0.995, "coverage " << frac);
}

TEST_CASE("PGM and PPM bytes") {
    const std::string a = temp_path("black.pgm"), b = temp_path("white.ppm");
    write_pgm(ImageBuffer{1, 1, 1, {0}}, a);
    CHECK(slurp(a) == std::string("P5\n1 1\n255\n\0", 12));
    write_ppm(ImageBuffer{2, 1, 3, std::vector<std::uint8_t>(6, 255)}, b);
    CHECK(slurp(b) == "P6\n2 1\n255\n" + std::string(6, '\xff'));
    std::remove(a.c_str());
    std::remove(b.c_str());
}

TEST_CASE("write errors") {
    CHECK(kind_of([] { write_pgm(ImageBuffer{1, 1, 1, {0}}, "/nonexistent-dir/x.pgm"); }) == ErrorKind::IoError);
    CHECK(kind_of([] { write_pgm(ImageBuffer{1, 1, 3, {0, 0, 0}}, temp_path("x.pgm")); }) == ErrorKind::InvalidInput);
}

TEST_CASE("image size cap") {
    RasterSet r;
    r.n = 2;
    r.origin = {0, 0};
    r.cell = 1;
    r.dims = {9000, 8000};
    r.bitmap.assign(9000 * 8000, 0);
    CHECK(kind_of([&] { render_raster(r); }) == ErrorKind::TooLarge);
}

TEST_CASE("dragon thumbnail matches the golden file") {
    RasterSet r = rasterize_attractor(system_fixture("dragon"), 16, std::ldexp(1.0, -5), 0);
    const std::string golden = slurp(std::string(TILEREGU_GOLDEN_DIR) + "/dragon_thumb.pgm");
    REQUIRE_FALSE(golden.empty());
    CHECK(encode_pnm(render_raster(r)) == golden);
}

}
