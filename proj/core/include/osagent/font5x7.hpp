#pragma once

#include <cstdint>
#include <optional>

namespace osagent {

// Fixed 5x7 bitmap font covering printable ASCII 32..126. Each glyph is five
// column bytes; bit r of column c is the pixel at (c, r) with r = 0 the top
// row. Glyph cells advance kGlyphAdvance pixels; one blank column separates
// adjacent glyphs.
inline constexpr int kGlyphWidth = 5;
inline constexpr int kGlyphHeight = 7;
inline constexpr int kGlyphAdvance = 6;

// Returns the five column bytes for `c`, or nullptr if out of range.
const std::uint8_t* glyph_columns(char c);

// Reverse lookup used by the pixel detector: exact match of five column
// bytes against the table. Empty if no glyph has this pattern.
std::optional<char> glyph_from_columns(const std::uint8_t cols[5]);

// Pixel width of `text` rendered in this font (no trailing gap).
int text_width(const char* text);

} // namespace osagent
