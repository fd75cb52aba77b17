#include "osagent/grounding.hpp"

#include <algorithm>
#include <cmath>

#include "osagent/detector.hpp"
#include "osagent/env.hpp"
#include "osagent/errors.hpp"
#include "osagent/font5x7.hpp"
#include "osagent/util.hpp"

namespace osagent {

static const char* kInteractableRoles[] = {
    "button", "textfield", "menuitem", "checkbox", "link", "icon", "listitem", "tab",
};

bool is_interactable_role(const std::string& role) {
    for (const char* r : kInteractableRoles)
        if (role == r) return true;
    return false;
}

NormBox normalize_bounds(const PixelRect& r, int screen_w, int screen_h) {
    if (screen_w <= 0 || screen_h <= 0)
        throw DegenerateScreenError("screen is " + std::to_string(screen_w) + "x" +
                                    std::to_string(screen_h));
    NormBox b;
    b.x1 = round4(static_cast<double>(r.x1) / screen_w);
    b.y1 = round4(static_cast<double>(r.y1) / screen_h);
    b.x2 = round4(static_cast<double>(r.x2) / screen_w);
    b.y2 = round4(static_cast<double>(r.y2) / screen_h);
    return b;
}

PixelRect denormalize(const NormBox& box, int screen_w, int screen_h) {
    PixelRect r;
    r.x1 = static_cast<int>(std::lround(box.x1 * screen_w));
    r.y1 = static_cast<int>(std::lround(box.y1 * screen_h));
    r.x2 = static_cast<int>(std::lround(box.x2 * screen_w));
    r.y2 = static_cast<int>(std::lround(box.y2 * screen_h));
    return r;
}

std::pair<double, double> resolve_target(const NormBox& box) {
    return {(box.x1 + box.x2) / 2.0, (box.y1 + box.y2) / 2.0};
}

std::pair<int, int> to_pixels(double nx, double ny, int screen_w, int screen_h) {
    int x = static_cast<int>(std::lround(nx * screen_w));
    int y = static_cast<int>(std::lround(ny * screen_h));
    x = std::clamp(x, 0, screen_w > 0 ? screen_w - 1 : 0);
    y = std::clamp(y, 0, screen_h > 0 ? screen_h - 1 : 0);
    return {x, y};
}

std::vector<GroundedElement> extract_interactables(const A11yNode& root) {
    int w = root.bounds.width();
    int h = root.bounds.height();
    if (w <= 0 || h <= 0)
        throw DegenerateScreenError("root node has no extent");

    std::vector<GroundedElement> out;
    // Positional path doubles as identity when a node carries no @id.
    std::vector<int> path;
    int next_id = 1;

    struct Frame {
        const A11yNode* node;
        int index;
    };

    auto visit = [&](const A11yNode& node, const std::string& pos_path, auto&& self) -> void {
        if (is_interactable_role(node.role) && node.has_state("enabled")) {
            GroundedElement e;
            e.id = next_id++;
            e.role = node.role;
            e.label = node.name;
            e.box = normalize_bounds(node.bounds, w, h);
            e.source_path = node.node_id.empty() ? pos_path : node.node_id;
            out.push_back(std::move(e));
        }
        for (size_t i = 0; i < node.children.size(); i++)
            self(node.children[i], pos_path + "/" + std::to_string(i), self);
    };
    visit(root, "0", visit);
    return out;
}

std::string semantic_line(const GroundedElement& e) {
    std::string s = "(ID: " + std::to_string(e.id) + ", Label: " + e.label;
    s += ", X1: " + fmt2(e.box.x1);
    s += ", Y1: " + fmt2(e.box.y1);
    s += ", X2: " + fmt2(e.box.x2);
    s += ", Y2: " + fmt2(e.box.y2) + ")";
    return s;
}

std::string textualize(const std::vector<GroundedElement>& elems) {
    std::string out;
    for (const GroundedElement& e : elems) {
        out += semantic_line(e);
        out += "\n";
    }
    return out;
}

static const Color kMarkRed{255, 0, 0};
static const Color kMarkText{255, 255, 255};

Image render_som(const Image& screen, const std::vector<GroundedElement>& elems) {
    Image out = screen;
    for (const GroundedElement& e : elems) {
        PixelRect r = denormalize(e.box, screen.width, screen.height);
        out.draw_ring2(r.x1, r.y1, r.x2, r.y2, kMarkRed);
    }
    // Tags go on top of rings so they stay legible where boxes touch.
    for (const GroundedElement& e : elems) {
        PixelRect r = denormalize(e.box, screen.width, screen.height);
        std::string tag = std::to_string(e.id);
        int tw = text_width(tag.c_str()) + 4;
        int th = kGlyphHeight + 4;
        out.fill_rect(r.x1, r.y1, r.x1 + tw, r.y1 + th, kMarkRed);
        out.draw_text(r.x1 + 2, r.y1 + 2, tag, kMarkText);
    }
    return out;
}

const char* provider_name(GroundingProvider p) {
    return p == GroundingProvider::A11yTree ? "a11y" : "detect";
}

const GroundedElement* Observation::find(int id) const {
    for (const GroundedElement& e : elements)
        if (e.id == id) return &e;
    return nullptr;
}

const GroundedElement* Observation::find_label(const std::string& label) const {
    for (const GroundedElement& e : elements)
        if (e.label == label) return &e;
    return nullptr;
}

static std::vector<GroundedElement> ground_with(Environment& env, GroundingProvider p,
                                                const Image& screen) {
    if (p == GroundingProvider::A11yTree) {
        A11yNode tree = env.observation_tree();
        return extract_interactables(tree);
    }
    return detect_elements(screen);
}

Observation observe(Environment& env, GroundingProvider primary) {
    Observation obs;
    obs.screen_w = env.screen_width();
    obs.screen_h = env.screen_height();
    obs.screen = env.render();

    GroundingProvider other = primary == GroundingProvider::A11yTree
                                  ? GroundingProvider::DetectionOcr
                                  : GroundingProvider::A11yTree;
    std::string first_error;
    try {
        obs.elements = ground_with(env, primary, obs.screen);
        obs.provider = provider_name(primary);
    } catch (const std::exception& ex) {
        first_error = ex.what();
        try {
            obs.elements = ground_with(env, other, obs.screen);
            obs.provider = provider_name(other);
        } catch (const std::exception& ex2) {
            throw ObservationFailedError(std::string(provider_name(primary)) + ": " +
                                         first_error + "; " + provider_name(other) + ": " +
                                         ex2.what());
        }
    }

    obs.annotated = render_som(obs.screen, obs.elements);
    obs.semantics = textualize(obs.elements);
    obs.window_title = env.window_title();
    obs.open_windows = env.open_windows();
    return obs;
}

} // namespace osagent
