#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace osagent {

struct Color {
    std::uint8_t r = 0, g = 0, b = 0;

    bool operator==(const Color& o) const { return r == o.r && g == o.g && b == o.b; }
};

// 8-bit RGB raster. Row-major, no padding. All drawing clips to bounds,
// so callers never need to pre-clamp geometry.
struct Image {
    int width = 0;
    int height = 0;
    std::vector<std::uint8_t> pixels; // width * height * 3

    Image() = default;
    Image(int w, int h, Color fill = {0, 0, 0});

    bool in_bounds(int x, int y) const { return x >= 0 && y >= 0 && x < width && y < height; }
    void set(int x, int y, Color c);
    Color get(int x, int y) const;

    void fill_rect(int x1, int y1, int x2, int y2, Color c);       // [x1,x2) x [y1,y2)
    void draw_rect_outline(int x1, int y1, int x2, int y2, Color c); // 1px, inclusive corners
    // 2px-thick ring with outer rectangle (x1,y1)-(x2,y2) inclusive. Pixels
    // strictly inside the inner rectangle are untouched.
    void draw_ring2(int x1, int y1, int x2, int y2, Color c);
    void draw_text(int x, int y, const std::string& text, Color c);

    bool operator==(const Image& o) const {
        return width == o.width && height == o.height && pixels == o.pixels;
    }
};

// Binary PPM (P6, maxval 255). Deterministic byte-for-byte output.
std::string encode_ppm(const Image& img);
Image decode_ppm(const std::string& bytes);
void write_ppm(const std::string& path, const Image& img);
Image read_ppm(const std::string& path);

} // namespace osagent
