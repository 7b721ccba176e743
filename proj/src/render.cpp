#include "tileregu/render.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>

#include "tileregu/error.hpp"

namespace tileregu {

namespace {

constexpr std::array<std::array<std::uint8_t, 3>, 12> kPalette{{
    {230, 25, 75},  {60, 180, 75},  {255, 225, 25}, {0, 130, 200},  {245, 130, 48},  {145, 30, 180},
    {70, 240, 240}, {240, 50, 230}, {210, 245, 60}, {250, 190, 190}, {0, 128, 128}, {170, 110, 40},
}};

void check_size(std::size_t w, std::size_t h) {
    if (w == 0 || h == 0) fail(ErrorKind::InvalidInput, "image dimensions must be positive");
    if (w * h > kMaxPixels) fail(ErrorKind::TooLarge, "image exceeds 64 megapixels");
}

} // namespace

ImageBuffer render_raster(const RasterSet& r, RenderStyle style) {
    const std::size_t W = r.dims[0];
    const std::size_t H = r.n == 2 ? r.dims[1] : 1;
    const std::size_t f = style == RenderStyle::Antialiased ? kAntialiasFactor : 1;
    const std::size_t fy = r.n == 2 ? f : 1;
    const std::size_t ow = (W + f - 1) / f;
    const std::size_t oh_raster = (H + fy - 1) / fy;
    const std::size_t oh = r.n == 2 ? oh_raster : kStripHeight;
    check_size(ow, oh);
    ImageBuffer img{ow, oh, 1, std::vector<std::uint8_t>(ow * oh, 255)};
    std::vector<std::uint8_t> row(ow);
    for (std::size_t oy = 0; oy < oh_raster; ++oy) {
        for (std::size_t ox = 0; ox < ow; ++ox) {
            std::size_t hit = 0, total = 0;
            for (std::size_t dy = 0; dy < fy; ++dy)
                for (std::size_t dx = 0; dx < f; ++dx) {
                    const std::size_t x = ox * f + dx, y = oy * fy + dy;
                    if (x >= W || y >= H) continue;
                    ++total;
                    hit += r.bitmap[y * W + x] ? 1 : 0;
                }
            if (style == RenderStyle::Binary)
                row[ox] = hit ? 0 : 255;
            else
                row[ox] = static_cast<std::uint8_t>(255 - (255 * hit + total / 2) / total);
        }
        if (r.n == 2) {
            std::copy(row.begin(), row.end(), img.pixels.begin() + static_cast<std::ptrdiff_t>((oh - 1 - oy) * ow));
        } else {
            for (std::size_t y = 0; y < oh; ++y)
                std::copy(row.begin(), row.end(), img.pixels.begin() + static_cast<std::ptrdiff_t>(y * ow));
        }
    }
    return img;
}

std::array<std::uint8_t, 3> neighbor_color(std::int64_t k1, std::int64_t k2) {
    const std::uint64_t h =
        (static_cast<std::uint64_t>(k1) * 73856093ULL) ^ (static_cast<std::uint64_t>(k2) * 19349663ULL);
    return kPalette[h % 12];
}

ImageBuffer render_tiling(const RasterSet& r, const LatticeSet& neighbors) {
    if (r.n != 2) fail(ErrorKind::InvalidInput, "tiling render needs a 2-D raster");
    const double inv = 1.0 / r.cell;
    if (std::abs(inv - std::round(inv)) > 1e-9) fail(ErrorKind::InvalidInput, "cell size must divide 1");
    const auto step = static_cast<std::int64_t>(std::round(inv));
    std::vector<IVec> shifts = neighbors.points();
    shifts.push_back({0, 0});
    LatticeSet all(shifts);

    // occupied-cell bounding box of the base tile
    const std::int64_t W = static_cast<std::int64_t>(r.dims[0]), H = static_cast<std::int64_t>(r.dims[1]);
    std::int64_t x0 = W, x1 = -1, y0 = H, y1 = -1;
    for (std::int64_t y = 0; y < H; ++y)
        for (std::int64_t x = 0; x < W; ++x)
            if (r.bitmap[y * W + x]) {
                x0 = std::min(x0, x), x1 = std::max(x1, x);
                y0 = std::min(y0, y), y1 = std::max(y1, y);
            }
    if (x1 < 0) {
        x0 = y0 = 0;
        x1 = y1 = 0;
    }
    std::int64_t gx0 = INT64_MAX, gx1 = INT64_MIN, gy0 = INT64_MAX, gy1 = INT64_MIN;
    for (auto& k : all.points()) {
        gx0 = std::min(gx0, x0 + k[0] * step), gx1 = std::max(gx1, x1 + k[0] * step);
        gy0 = std::min(gy0, y0 + k[1] * step), gy1 = std::max(gy1, y1 + k[1] * step);
    }
    const auto ow = static_cast<std::size_t>(gx1 - gx0 + 1), oh = static_cast<std::size_t>(gy1 - gy0 + 1);
    check_size(ow, oh);
    ImageBuffer img{ow, oh, 3, std::vector<std::uint8_t>(ow * oh * 3, 255)};
    for (auto& k : all.points()) {
        const bool base = k[0] == 0 && k[1] == 0;
        const auto col = base ? std::array<std::uint8_t, 3>{0, 0, 0} : neighbor_color(k[0], k[1]);
        for (std::int64_t y = y0; y <= y1; ++y)
            for (std::int64_t x = x0; x <= x1; ++x) {
                if (!r.bitmap[y * W + x]) continue;
                const std::int64_t gx = x + k[0] * step - gx0;
                const std::int64_t gy = y + k[1] * step - gy0;
                const std::size_t py = oh - 1 - static_cast<std::size_t>(gy);
                std::uint8_t* p = &img.pixels[(py * ow + static_cast<std::size_t>(gx)) * 3];
                std::copy(col.begin(), col.end(), p);
            }
    }
    return img;
}

std::size_t count_value(const ImageBuffer& img, std::uint8_t v) {
    return static_cast<std::size_t>(std::count(img.pixels.begin(), img.pixels.end(), v));
}

std::string encode_pnm(const ImageBuffer& img) {
    std::string out = (img.channels == 3 ? "P6\n" : "P5\n") + std::to_string(img.width) + " " +
                      std::to_string(img.height) + "\n255\n";
    out.append(reinterpret_cast<const char*>(img.pixels.data()), img.pixels.size());
    return out;
}

namespace {

void write_file(const ImageBuffer& img, const std::string& path, int channels) {
    if (img.channels != channels)
        fail(ErrorKind::InvalidInput, channels == 1 ? "PGM needs a gray image" : "PPM needs a colour image");
    std::ofstream f(path, std::ios::binary);
    if (!f) fail(ErrorKind::IoError, "cannot open " + path + " for writing");
    const std::string data = encode_pnm(img);
    f.write(data.data(), static_cast<std::streamsize>(data.size()));
    if (!f) fail(ErrorKind::IoError, "write failed for " + path);
}

} // namespace

void write_pgm(const ImageBuffer& img, const std::string& path) { write_file(img, path, 1); }
void write_ppm(const ImageBuffer& img, const std::string& path) { write_file(img, path, 3); }

} // namespace tileregu
