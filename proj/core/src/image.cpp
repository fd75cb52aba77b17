#include "osagent/image.hpp"

#include <cstdio>
#include <stdexcept>

#include "osagent/font5x7.hpp"
#include "osagent/util.hpp"

namespace osagent {

Image::Image(int w, int h, Color fill) : width(w), height(h) {
    if (w < 0 || h < 0) throw std::invalid_argument("negative image size");
    pixels.resize(static_cast<size_t>(w) * h * 3);
    for (size_t i = 0; i < pixels.size(); i += 3) {
        pixels[i] = fill.r;
        pixels[i + 1] = fill.g;
        pixels[i + 2] = fill.b;
    }
}

void Image::set(int x, int y, Color c) {
    if (!in_bounds(x, y)) return;
    size_t i = (static_cast<size_t>(y) * width + x) * 3;
    pixels[i] = c.r;
    pixels[i + 1] = c.g;
    pixels[i + 2] = c.b;
}

Color Image::get(int x, int y) const {
    if (!in_bounds(x, y)) return {};
    size_t i = (static_cast<size_t>(y) * width + x) * 3;
    return {pixels[i], pixels[i + 1], pixels[i + 2]};
}

void Image::fill_rect(int x1, int y1, int x2, int y2, Color c) {
    for (int y = y1; y < y2; y++)
        for (int x = x1; x < x2; x++) set(x, y, c);
}

void Image::draw_rect_outline(int x1, int y1, int x2, int y2, Color c) {
    for (int x = x1; x <= x2; x++) {
        set(x, y1, c);
        set(x, y2, c);
    }
    for (int y = y1; y <= y2; y++) {
        set(x1, y, c);
        set(x2, y, c);
    }
}

void Image::draw_ring2(int x1, int y1, int x2, int y2, Color c) {
    for (int y = y1; y <= y2; y++) {
        for (int x = x1; x <= x2; x++) {
            bool interior = x > x1 + 1 && x < x2 - 1 && y > y1 + 1 && y < y2 - 1;
            if (!interior) set(x, y, c);
        }
    }
}

void Image::draw_text(int x, int y, const std::string& text, Color c) {
    int cx = x;
    for (char ch : text) {
        const std::uint8_t* cols = glyph_columns(ch);
        if (cols) {
            for (int col = 0; col < kGlyphWidth; col++)
                for (int row = 0; row < kGlyphHeight; row++)
                    if ((cols[col] >> row) & 1) set(cx + col, y + row, c);
        }
        cx += kGlyphAdvance;
    }
}

std::string encode_ppm(const Image& img) {
    char header[64];
    std::snprintf(header, sizeof(header), "P6\n%d %d\n255\n", img.width, img.height);
    std::string out = header;
    out.append(reinterpret_cast<const char*>(img.pixels.data()), img.pixels.size());
    return out;
}

Image decode_ppm(const std::string& bytes) {
    size_t pos = 0;
    auto token = [&]() -> std::string {
        while (pos < bytes.size() && std::isspace(static_cast<unsigned char>(bytes[pos]))) pos++;
        if (pos < bytes.size() && bytes[pos] == '#') { // comment to end of line
            while (pos < bytes.size() && bytes[pos] != '\n') pos++;
            while (pos < bytes.size() && std::isspace(static_cast<unsigned char>(bytes[pos]))) pos++;
        }
        size_t start = pos;
        while (pos < bytes.size() && !std::isspace(static_cast<unsigned char>(bytes[pos]))) pos++;
        return bytes.substr(start, pos - start);
    };
    if (token() != "P6") throw std::runtime_error("not a P6 ppm");
    int w = std::stoi(token());
    int h = std::stoi(token());
    int maxval = std::stoi(token());
    if (maxval != 255) throw std::runtime_error("unsupported ppm maxval");
    pos++; // single whitespace after maxval
    size_t need = static_cast<size_t>(w) * h * 3;
    if (bytes.size() - pos < need) throw std::runtime_error("truncated ppm");
    Image img(w, h);
    std::copy(bytes.begin() + pos, bytes.begin() + pos + need, img.pixels.begin());
    return img;
}

void write_ppm(const std::string& path, const Image& img) {
    write_file(path, encode_ppm(img));
}

Image read_ppm(const std::string& path) {
    return decode_ppm(read_file(path));
}

} // namespace osagent
