#pragma once

#include <vector>

#include "osagent/grounding.hpp"
#include "osagent/image.hpp"

namespace osagent {

// Colors the simulated renderer uses for detectable controls. The pixel
// detector searches for rectangles stroked in kControlBorder and reads the
// kLabelInk glyph row at the fixed label inset. Keeping renderer and
// detector on one contract is what lets the two grounding providers agree.
inline constexpr Color kControlBorder{60, 60, 200};
inline constexpr Color kLabelInk{0, 0, 0};
inline constexpr int kLabelInsetX = 3;
inline constexpr int kLabelInsetY = 3;

// Finds control rectangles in a rendered frame and reads their labels by
// glyph template match. Elements are ordered top-to-bottom, left-to-right
// and given mark ids 1..n; roles come back as "control" since pixels do
// not carry semantics.
std::vector<GroundedElement> detect_elements(const Image& screen);

// Label reader used by detect_elements; exposed for tests. Reads glyph
// cells starting at (x, y) until `max_x` or two consecutive blank cells,
// trimming trailing spaces. Cells that match no glyph end the read.
std::string read_label(const Image& img, int x, int y, int max_x);

} // namespace osagent
