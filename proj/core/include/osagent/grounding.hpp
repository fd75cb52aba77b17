#pragma once

#include <string>
#include <utility>
#include <vector>

#include "osagent/a11y.hpp"
#include "osagent/image.hpp"

namespace osagent {

class Environment;

// Box in normalized screen coordinates, each value in [0,1] quantized to
// four decimal places. Display formatting rounds further to two places.
struct NormBox {
    double x1 = 0, y1 = 0, x2 = 0, y2 = 0;

    bool operator==(const NormBox& o) const {
        return x1 == o.x1 && y1 == o.y1 && x2 == o.x2 && y2 == o.y2;
    }
};

// One on-screen control the agent may address by mark id.
struct GroundedElement {
    int id = 0;              // mark id, contiguous from 1 in discovery order
    std::string role;
    std::string label;
    NormBox box;
    std::string source_path; // a11y node id, positional path, or detector index
};

// Roles the agent can act on. Everything else is scenery.
bool is_interactable_role(const std::string& role);

// Pixel rect -> normalized box. Throws DegenerateScreenError when the screen
// has no extent.
NormBox normalize_bounds(const PixelRect& r, int screen_w, int screen_h);

PixelRect denormalize(const NormBox& box, int screen_w, int screen_h);

// Center of a box; where clicks aimed at the element land.
std::pair<double, double> resolve_target(const NormBox& box);

// Normalized point -> pixel, rounded then clamped into the screen.
std::pair<int, int> to_pixels(double nx, double ny, int screen_w, int screen_h);

// Walks the tree in pre-order and collects enabled nodes with interactable
// roles, assigning mark ids 1..n. The root's extent defines the screen.
std::vector<GroundedElement> extract_interactables(const A11yNode& root);

// `(ID: 14, Label: Start, X1: 0.35, Y1: 0.95, X2: 0.38, Y2: 1.00)`
std::string semantic_line(const GroundedElement& e);

// One semantic line per element, newline-terminated.
std::string textualize(const std::vector<GroundedElement>& elems);

// Draws a 2px red ring on the inclusive outer rectangle of each element's
// denormalized box, plus a red id tag with white digits anchored at the
// box's top-left corner. Pixels strictly inside a box are untouched except
// under the tag.
Image render_som(const Image& screen, const std::vector<GroundedElement>& elems);

enum class GroundingProvider { A11yTree, DetectionOcr };

const char* provider_name(GroundingProvider p);

// Everything the planner sees about one screen state.
struct Observation {
    int screen_w = 0;
    int screen_h = 0;
    Image screen;
    Image annotated;
    std::vector<GroundedElement> elements;
    std::string semantics;
    std::string window_title;
    std::vector<std::string> open_windows; // frontmost first
    std::string provider;

    const GroundedElement* find(int id) const;
    const GroundedElement* find_label(const std::string& label) const;
};

// Captures one observation using `primary`, falling back to the other
// provider on failure. Throws ObservationFailedError when both fail.
Observation observe(Environment& env, GroundingProvider primary);

} // namespace osagent
