#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "tileregu/attractor.hpp"
#include "tileregu/oracle.hpp"

namespace tileregu {

struct ImageBuffer {
    std::size_t width = 0, height = 0;
    int channels = 1; // 1 = gray, 3 = RGB
    std::vector<std::uint8_t> pixels; // row-major, top row first
};

enum class RenderStyle { Binary, Antialiased };

constexpr std::size_t kMaxPixels = std::size_t{64} << 20;
constexpr int kStripHeight = 64;
constexpr int kAntialiasFactor = 2;

// Binary: occupied cells black, empty white. Antialiased: each output pixel
// averages a 2x2 (or 2x1) block, gray = 255 * (1 - occupied fraction).
// 1-D rasters become a strip 64 pixels tall. Higher y is drawn nearer the top.
ImageBuffer render_raster(const RasterSet& r, RenderStyle style = RenderStyle::Binary);

// 12-entry palette indexed by ((k1 * 73856093) ^ (k2 * 19349663)) mod 12 in
// unsigned 64-bit arithmetic.
std::array<std::uint8_t, 3> neighbor_color(std::int64_t k1, std::int64_t k2);

// Base tile black, every other shift k + G in its palette colour; later
// shifts in lattice order overwrite earlier ones.
ImageBuffer render_tiling(const RasterSet& r, const LatticeSet& neighbors);

std::size_t count_value(const ImageBuffer& img, std::uint8_t v);

void write_pgm(const ImageBuffer& img, const std::string& path);
void write_ppm(const ImageBuffer& img, const std::string& path);
std::string encode_pnm(const ImageBuffer& img);

} // namespace tileregu
