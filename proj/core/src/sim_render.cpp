#include "osagent/detector.hpp"
#include "osagent/font5x7.hpp"
#include "osagent/util.hpp"
#include "sim_internal.hpp"

namespace osagent {

using namespace simcolor;

namespace {

std::string sanitize_id(const std::string& s) {
    std::string out;
    for (char c : s) out.push_back(c == ' ' ? '_' : c);
    return out;
}

void render_widget(Image& img, const MockDesktop& d, const SimWindow& w, const SimWidget& wd,
                   bool front, const std::vector<std::string>& items,
                   const std::string& shown_name) {
    PixelRect r = widget_abs(w, wd);

    if (!front) {
        // Occluded windows render flat: no control borders, no label ink, so
        // the pixel detector only ever sees what the pruned tree exposes.
        if (wd.role != "label") img.fill_rect(r.x1, r.y1, r.x2, r.y2, kBackFlat);
        return;
    }

    if (wd.role == "label") {
        img.draw_text(r.x1 + 3, r.y1 + 3, wd.content, kContentInk);
        return;
    }

    if (wd.role == "list") {
        img.fill_rect(r.x1, r.y1, r.x2, r.y2, kListFill);
        img.draw_rect_outline(r.x1, r.y1, r.x2 - 1, r.y2 - 1, kListEdge);
        for (int row = 0; row < wd.visible_rows; row++) {
            int idx = wd.viewport + row;
            if (idx >= static_cast<int>(items.size())) break;
            int ry = r.y1 + 2 + row * wd.row_height;
            PixelRect rr{r.x1 + 2, ry, r.x2 - 2, ry + wd.row_height - 2};
            img.fill_rect(rr.x1, rr.y1, rr.x2, rr.y2,
                          idx == wd.selected ? kRowSelected : kFieldFill);
            img.draw_rect_outline(rr.x1, rr.y1, rr.x2 - 1, rr.y2 - 1, kControlBorder);
            img.draw_text(rr.x1 + kLabelInsetX, rr.y1 + kLabelInsetY,
                          items[static_cast<size_t>(idx)], kLabelInk);
        }
        return;
    }

    Color fill = wd.role == "textfield" ? kFieldFill : kControlFill;
    img.fill_rect(r.x1, r.y1, r.x2, r.y2, fill);
    img.draw_rect_outline(r.x1, r.y1, r.x2 - 1, r.y2 - 1, kControlBorder);
    img.draw_text(r.x1 + kLabelInsetX, r.y1 + kLabelInsetY, shown_name, kLabelInk);

    if (wd.role == "textfield") {
        // Content lines under the name line, in a non-label ink.
        std::vector<std::string> lines = split_lines(wd.content);
        int y = r.y1 + kLabelInsetY + kGlyphHeight + 2;
        for (const std::string& line : lines) {
            if (y + kGlyphHeight > r.y2 - 2) break;
            img.draw_text(r.x1 + kLabelInsetX, y, line, kContentInk);
            y += kGlyphHeight + 2;
        }
    }
    (void)d;
}

} // namespace

Image MockDesktop::render() {
    Image img(setup_.width, setup_.height,
              setup_.platform == "desktop" ? kDesktopBg : kMobileBg);

    for (size_t i = 0; i < windows_.size(); i++) {
        const SimWindow& w = windows_[i];
        bool front = i + 1 == windows_.size();

        img.fill_rect(w.rect.x1, w.rect.y1, w.rect.x2, w.rect.y2,
                      front ? kWindowBg : kWindowBgBack);
        img.draw_rect_outline(w.rect.x1, w.rect.y1, w.rect.x2 - 1, w.rect.y2 - 1, kWindowEdge);
        img.fill_rect(w.rect.x1, w.rect.y1, w.rect.x2, w.rect.y1 + kTitleBarH,
                      front ? kTitleBar : kTitleBarBack);
        img.draw_text(w.rect.x1 + 4, w.rect.y1 + 3, w.title, kTitleText);

        if (front && w.closable) {
            PixelRect c = close_button_rect(w);
            img.fill_rect(c.x1, c.y1, c.x2, c.y2, kControlFill);
            img.draw_rect_outline(c.x1, c.y1, c.x2 - 1, c.y2 - 1, kControlBorder);
            img.draw_text(c.x1 + kLabelInsetX, c.y1 + kLabelInsetY, "X", kLabelInk);
        }

        for (const SimWidget& wd : w.widgets) {
            std::vector<std::string> items;
            if (wd.role == "list") items = list_items(wd);
            render_widget(img, *this, w, wd, front, items, display_name(wd));
        }
    }

    if (setup_.platform == "desktop") {
        PixelRect tb = taskbar_rect();
        img.fill_rect(tb.x1, tb.y1, tb.x2, tb.y2, kTaskbarBg);
        for (const LauncherButton& b : launcher_buttons()) {
            img.fill_rect(b.rect.x1, b.rect.y1, b.rect.x2, b.rect.y2, kControlFill);
            img.draw_rect_outline(b.rect.x1, b.rect.y1, b.rect.x2 - 1, b.rect.y2 - 1,
                                  kControlBorder);
            img.draw_text(b.rect.x1 + kLabelInsetX, b.rect.y1 + kLabelInsetY, b.name, kLabelInk);
        }
    }
    return img;
}

void MockDesktop::build_window_nodes(A11yNode& root, bool front_only) {
    size_t begin = 0;
    if (front_only && !windows_.empty()) begin = windows_.size() - 1;

    for (size_t i = begin; i < windows_.size(); i++) {
        const SimWindow& w = windows_[i];
        A11yNode win;
        win.role = "window";
        win.name = w.title;
        win.bounds = w.rect;
        win.states = {"enabled"};
        win.node_id = "w" + std::to_string(w.id);
        if (i + 1 == windows_.size()) win.states.push_back("active");

        if (w.closable) {
            A11yNode close;
            close.role = "button";
            close.name = "X";
            close.bounds = close_button_rect(w);
            close.states = {"enabled"};
            close.node_id = "w" + std::to_string(w.id) + ".close";
            win.children.push_back(std::move(close));
        }

        for (const SimWidget& wd : w.widgets) {
            A11yNode n;
            n.role = wd.role;
            n.name = display_name(wd);
            n.bounds = widget_abs(w, wd);
            n.states = {"enabled"};
            n.node_id = "w" + std::to_string(w.id) + "." + sanitize_id(wd.name);
            if (wd.role == "textfield" && focus_window_ == w.id && focus_widget_ == wd.name)
                n.states.push_back("focused");

            if (wd.role == "list") {
                auto items = list_items(wd);
                for (int row = 0; row < wd.visible_rows; row++) {
                    int idx = wd.viewport + row;
                    if (idx >= static_cast<int>(items.size())) break;
                    int ry = n.bounds.y1 + 2 + row * wd.row_height;
                    A11yNode item;
                    item.role = "listitem";
                    item.name = items[static_cast<size_t>(idx)];
                    item.bounds = {n.bounds.x1 + 2, ry, n.bounds.x2 - 2, ry + wd.row_height - 2};
                    item.states = {"enabled"};
                    if (idx == wd.selected) item.states.push_back("selected");
                    item.node_id = n.node_id + "." + std::to_string(idx);
                    n.children.push_back(std::move(item));
                }
            }
            win.children.push_back(std::move(n));
        }
        root.children.push_back(std::move(win));
    }
}

static A11yNode make_root(int w, int h) {
    A11yNode root;
    root.role = "desktop";
    root.name = "Desktop";
    root.bounds = {0, 0, w, h};
    root.states = {"enabled"};
    root.node_id = "root";
    return root;
}

A11yNode MockDesktop::a11y_snapshot() {
    A11yNode root = make_root(setup_.width, setup_.height);
    if (setup_.platform == "desktop") {
        A11yNode bar;
        bar.role = "toolbar";
        bar.name = "Taskbar";
        bar.bounds = taskbar_rect();
        bar.states = {"enabled"};
        bar.node_id = "taskbar";
        for (const LauncherButton& b : launcher_buttons()) {
            A11yNode n;
            n.role = "button";
            n.name = b.name;
            n.bounds = b.rect;
            n.states = {"enabled"};
            n.node_id = "launcher." + sanitize_id(b.name);
            bar.children.push_back(std::move(n));
        }
        root.children.push_back(std::move(bar));
    }
    build_window_nodes(root, false);
    return root;
}

A11yNode MockDesktop::observation_tree() {
    A11yNode root = make_root(setup_.width, setup_.height);
    if (setup_.platform == "desktop") {
        A11yNode full = a11y_snapshot();
        // Taskbar first so launcher marks keep stable low ids, then the
        // frontmost window only.
        root.children.push_back(std::move(full.children[0]));
    }
    build_window_nodes(root, true);
    return root;
}

} // namespace osagent
