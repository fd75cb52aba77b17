#pragma once

#include <string>
#include <vector>

namespace osagent {

// Pixel-space rectangle, origin top-left. x2/y2 are exclusive, so a node
// covering the full width of a 1920px screen has x1=0, x2=1920.
struct PixelRect {
    int x1 = 0, y1 = 0, x2 = 0, y2 = 0;

    int width() const { return x2 - x1; }
    int height() const { return y2 - y1; }
    bool contains(int x, int y) const { return x >= x1 && x < x2 && y >= y1 && y < y2; }
    bool operator==(const PixelRect& o) const {
        return x1 == o.x1 && y1 == o.y1 && x2 == o.x2 && y2 == o.y2;
    }
};

struct A11yNode {
    std::string role;
    std::string name;
    PixelRect bounds;
    std::vector<std::string> states;
    std::string node_id; // optional stable identity, unique per snapshot
    std::vector<A11yNode> children;

    bool has_state(const std::string& s) const;
};

// Text snapshot grammar, one node per line:
//
//   a11y/1
//   # comment
//   desktop | Desktop | 0,0,200,100 | enabled
//     button | Start | 70,95,76,100 | enabled,focused | @n42
//
// Two spaces of indentation per tree level, exactly one root. The optional
// trailing `@id` field gives the node a stable identity; a snapshot that
// mentions the same identity twice describes a graph, not a tree, and is
// rejected with CycleError. Structural violations raise A11yParseError
// carrying the offending line number.
A11yNode parse_a11y(const std::string& text);

std::string serialize_a11y(const A11yNode& root);

// Pre-order depth-first walk; `fn` is called with (node, depth).
template <typename Fn>
void walk_preorder(const A11yNode& node, Fn&& fn, int depth = 0) {
    fn(node, depth);
    for (const A11yNode& c : node.children) walk_preorder(c, fn, depth + 1);
}

} // namespace osagent
