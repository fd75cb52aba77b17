#include "osagent/detector.hpp"

#include <algorithm>

#include "osagent/errors.hpp"
#include "osagent/font5x7.hpp"

namespace osagent {

std::string read_label(const Image& img, int x, int y, int max_x) {
    std::string out;
    int blanks = 0;
    for (int cx = x; cx + kGlyphWidth <= max_x; cx += kGlyphAdvance) {
        std::uint8_t cols[5] = {0, 0, 0, 0, 0};
        for (int c = 0; c < kGlyphWidth; c++) {
            for (int r = 0; r < kGlyphHeight; r++) {
                if (img.get(cx + c, y + r) == kLabelInk) cols[c] |= (1 << r);
            }
        }
        auto ch = glyph_from_columns(cols);
        if (!ch) break;
        if (*ch == ' ') {
            if (++blanks >= 2) break;
        } else {
            blanks = 0;
        }
        out.push_back(*ch);
    }
    while (!out.empty() && out.back() == ' ') out.pop_back();
    return out;
}

static bool is_border(const Image& img, int x, int y) {
    return img.in_bounds(x, y) && img.get(x, y) == kControlBorder;
}

std::vector<GroundedElement> detect_elements(const Image& img) {
    if (img.width <= 0 || img.height <= 0)
        throw DegenerateScreenError("empty frame");

    std::vector<PixelRect> rects;
    for (int y = 0; y < img.height; y++) {
        for (int x = 0; x < img.width; x++) {
            // Top-left corner: border pixel with no border above or to the left.
            if (!is_border(img, x, y)) continue;
            if (is_border(img, x - 1, y) || is_border(img, x, y - 1)) continue;
            if (!is_border(img, x + 1, y) || !is_border(img, x, y + 1)) continue;

            int x2 = x;
            while (is_border(img, x2 + 1, y)) x2++;
            int y2 = y;
            while (is_border(img, x, y2 + 1)) y2++;
            if (x2 - x < 4 || y2 - y < 4) continue;

            // Full perimeter must be stroked, otherwise it is a stray line.
            bool ok = true;
            for (int cx = x; cx <= x2 && ok; cx++)
                ok = is_border(img, cx, y) && is_border(img, cx, y2);
            for (int cy = y; cy <= y2 && ok; cy++)
                ok = is_border(img, x, cy) && is_border(img, x2, cy);
            if (!ok) continue;

            // Reject outer rectangles that merely enclose already-found ones
            // sharing the corner column (nested strokes are not controls).
            rects.push_back({x, y, x2 + 1, y2 + 1}); // exclusive box
        }
    }

    std::sort(rects.begin(), rects.end(), [](const PixelRect& a, const PixelRect& b) {
        if (a.y1 != b.y1) return a.y1 < b.y1;
        return a.x1 < b.x1;
    });

    std::vector<GroundedElement> out;
    int next_id = 1;
    for (const PixelRect& r : rects) {
        GroundedElement e;
        e.id = next_id++;
        e.role = "control";
        e.label = read_label(img, r.x1 + kLabelInsetX, r.y1 + kLabelInsetY, r.x2 - 1);
        e.box = normalize_bounds(r, img.width, img.height);
        e.source_path = "det:" + std::to_string(e.id);
        out.push_back(std::move(e));
    }
    return out;
}

} // namespace osagent
