#include "osagent/sim.hpp"

#include <algorithm>
#include <cmath>

#include "osagent/errors.hpp"
#include "osagent/font5x7.hpp"
#include "osagent/util.hpp"
#include "sim_internal.hpp"

namespace osagent {

PixelRect widget_abs(const SimWindow& w, const SimWidget& wd) {
    return {w.rect.x1 + wd.rel.x1, w.rect.y1 + wd.rel.y1, w.rect.x1 + wd.rel.x2,
            w.rect.y1 + wd.rel.y2};
}

// 12px tall: the label inset plus a glyph row must clear the bottom stroke,
// or the pixel detector loses the button.
PixelRect close_button_rect(const SimWindow& w) {
    return {w.rect.x2 - 14, w.rect.y1 + 2, w.rect.x2 - 2, w.rect.y1 + 14};
}

SimWidget* SimWindow::find_widget(const std::string& name) {
    for (SimWidget& wd : widgets)
        if (wd.name == name) return &wd;
    return nullptr;
}

const SimWidget* SimWindow::find_widget(const std::string& name) const {
    for (const SimWidget& wd : widgets)
        if (wd.name == name) return &wd;
    return nullptr;
}

MockDesktop::MockDesktop(SimSetup setup) : setup_(std::move(setup)) {
    if (setup_.platform != "desktop" && setup_.platform != "smartphone")
        throw SchemaError("unknown platform '" + setup_.platform + "'");
    reset();
}

void MockDesktop::reset() {
    windows_.clear();
    files_ = setup_.files;
    settings_ = setup_.settings;
    clipboard_.clear();
    next_window_id_ = 1;
    cursor_x_ = cursor_y_ = 0;
    focus_window_ = 0;
    focus_widget_.clear();
    tick_ = 0;
    actions_ = 0;

    if (setup_.platform == "smartphone") {
        // The home screen is pinned at the bottom of the stack.
        SimWindow* home = spawn("home", "Home", 0, 0, "", "", 0);
        home->closable = false;
    }
    for (const SimWindowSpec& spec : setup_.windows) spawn_from_spec(spec);
}

void MockDesktop::spawn_from_spec(const SimWindowSpec& spec) {
    const AppTemplate* t = SimApps::tmpl(spec.app);
    if (!t) throw SchemaError("unknown app template '" + spec.app + "'");
    SimWindow* w =
        spawn(spec.app, spec.title.empty() ? t->title : spec.title, spec.x, spec.y,
              spec.content, spec.path, 0);
    if (!spec.path.empty() && spec.title.empty())
        w->title = spec.path.substr(spec.path.rfind('/') + 1) + " - " + t->title;
}

SimWindow* MockDesktop::spawn(const std::string& app, const std::string& title, int x, int y,
                              const std::string& content, const std::string& path,
                              int owner_id) {
    const AppTemplate* t = SimApps::tmpl(app);
    if (!t) throw SchemaError("unknown app template '" + app + "'");

    SimWindow w;
    w.id = next_window_id_++;
    w.app = app;
    w.title = title;
    w.widgets = t->widgets;
    w.path = path;
    w.owner_id = owner_id;
    w.closable = t->closable;

    int usable_h = setup_.height - (setup_.platform == "desktop" ? kTaskbarH : 0);
    if (t->fullscreen || setup_.platform == "smartphone") {
        w.rect = {0, 0, setup_.width, setup_.height};
    } else {
        if (x < 0 || y < 0) {
            // Deterministic cascade for windows opened at run time.
            int n = static_cast<int>(windows_.size());
            x = 30 + 14 * n;
            y = 20 + 10 * n;
        }
        x = std::clamp(x, 0, std::max(0, setup_.width - t->w));
        y = std::clamp(y, 0, std::max(0, usable_h - t->h));
        w.rect = {x, y, x + t->w, y + t->h};
    }

    // Editors pick up their bound file's content.
    for (SimWidget& wd : w.widgets) {
        if (wd.role == "textfield" && wd.action == "editor" && !content.empty())
            wd.content = content;
        if (wd.role == "textfield" && wd.name_setting.size()) {
            auto it = settings_.find(wd.name_setting);
            wd.content = it == settings_.end() ? "" : it->second;
            // name_setting on a textfield seeds the content, not the name
        }
    }

    windows_.push_back(std::move(w));
    SimWindow* out = &windows_.back();
    if (!t->focus_on_open.empty()) {
        focus_window_ = out->id;
        focus_widget_ = t->focus_on_open;
    }
    return out;
}

SimWindow* MockDesktop::front_window() {
    return windows_.empty() ? nullptr : &windows_.back();
}

SimWindow* MockDesktop::window_by_id(int id) {
    for (SimWindow& w : windows_)
        if (w.id == id) return &w;
    return nullptr;
}

void MockDesktop::bring_to_front(size_t index) {
    if (index >= windows_.size()) return;
    if (index + 1 == windows_.size()) return; // already front
    SimWindow w = std::move(windows_[index]);
    windows_.erase(windows_.begin() + static_cast<long>(index));
    windows_.push_back(std::move(w));
    focus_window_ = 0;
    focus_widget_.clear();
}

void MockDesktop::close_window(int id) {
    for (size_t i = 0; i < windows_.size(); i++) {
        if (windows_[i].id != id) continue;
        // Children (menus, dialogs) die with their owner.
        std::vector<int> orphans;
        for (const SimWindow& w : windows_)
            if (w.owner_id == id) orphans.push_back(w.id);
        windows_.erase(windows_.begin() + static_cast<long>(i));
        if (focus_window_ == id) {
            focus_window_ = 0;
            focus_widget_.clear();
        }
        for (int oid : orphans) close_window(oid);
        return;
    }
}

PixelRect MockDesktop::taskbar_rect() const {
    return {0, setup_.height - kTaskbarH, setup_.width, setup_.height};
}

std::vector<MockDesktop::LauncherButton> MockDesktop::launcher_buttons() const {
    std::vector<LauncherButton> out;
    int x = 4;
    int y1 = setup_.height - kTaskbarH + 2;
    for (const std::string& name : setup_.launcher) {
        int w = text_width(name.c_str()) + 10;
        out.push_back({name, {x, y1, x + w, y1 + 12}});
        x += w + 4;
    }
    return out;
}

std::vector<std::string> MockDesktop::dir_entries(const std::string& dir) const {
    std::string prefix = dir;
    if (prefix.empty() || prefix.back() != '/') prefix += '/';
    std::vector<std::string> out;
    for (const auto& [path, _] : files_) {
        if (!starts_with(path, prefix)) continue;
        std::string rest = path.substr(prefix.size());
        if (rest.find('/') != std::string::npos) continue; // no recursion
        out.push_back(rest);
    }
    std::sort(out.begin(), out.end());
    return out;
}

std::vector<std::string> MockDesktop::list_items(const SimWidget& w) const {
    return dir_entries(w.list_dir);
}

std::string MockDesktop::display_name(const SimWidget& w) const {
    if (w.name_setting.empty() || w.role == "textfield") return w.name;
    auto it = settings_.find(w.name_setting);
    return w.name + (it == settings_.end() ? "unset" : it->second);
}

void MockDesktop::begin_action() {
    actions_++;
    tick_++;
    if (crash_on_ > 0 && actions_ == crash_on_)
        throw EnvCrashError("environment crashed on action " + std::to_string(actions_) +
                            " (injected fault)");
}

void MockDesktop::move_cursor(int x, int y) {
    begin_action();
    if (x < 0 || y < 0 || x >= setup_.width || y >= setup_.height)
        throw ActionFailedError("cursor target outside screen");
    cursor_x_ = x;
    cursor_y_ = y;
}

void MockDesktop::click(int button, bool dbl) {
    begin_action();
    click_at(cursor_x_, cursor_y_, button, dbl, false);
}

void MockDesktop::tap(int x, int y, bool long_press) {
    begin_action();
    if (x < 0 || y < 0 || x >= setup_.width || y >= setup_.height)
        throw ActionFailedError("tap target outside screen");
    cursor_x_ = x;
    cursor_y_ = y;
    click_at(x, y, 0, false, long_press);
}

void MockDesktop::click_at(int x, int y, int button, bool dbl, bool long_press) {
    // An open menu swallows outside clicks and closes.
    if (SimWindow* front = front_window()) {
        if (front->app == "menu" && !front->rect.contains(x, y)) {
            close_window(front->id);
            return;
        }
    }

    if (setup_.platform == "desktop" && taskbar_rect().contains(x, y)) {
        for (const LauncherButton& b : launcher_buttons()) {
            if (b.rect.contains(x, y)) {
                SimApps::open_display_app(*this, b.name);
                return;
            }
        }
        return; // empty taskbar area
    }

    for (size_t i = windows_.size(); i-- > 0;) {
        SimWindow& w = windows_[i];
        if (!w.rect.contains(x, y)) continue;

        if (i + 1 != windows_.size()) {
            bring_to_front(i);
            return;
        }

        if (w.closable && close_button_rect(w).contains(x, y)) {
            close_window(w.id);
            return;
        }

        int win_id = w.id;
        for (SimWidget& wd : w.widgets) {
            if (!widget_abs(w, wd).contains(x, y)) continue;
            if (wd.role == "textfield") {
                if (long_press) {
                    wd.content.clear(); // mobile: long press clears a field
                }
                focus_window_ = w.id;
                focus_widget_ = wd.name;
                return;
            }
            if (wd.role == "list") {
                PixelRect abs = widget_abs(w, wd);
                int row = (y - abs.y1 - 2) / wd.row_height;
                int idx = wd.viewport + row;
                auto items = list_items(wd);
                if (row >= 0 && row < wd.visible_rows && idx < static_cast<int>(items.size()))
                    SimApps::list_row(*this, win_id, wd.name, idx, dbl);
                return;
            }
            if (wd.role == "button" || wd.role == "menuitem" || wd.role == "checkbox") {
                if (button != 0) throw ActionFailedError("nothing to right-click here");
                SimApps::run_tag(*this, win_id, wd.name, wd.action);
                return;
            }
            return; // labels and other scenery
        }
        return; // window body / title bar
    }
    // Desktop background: harmless.
    if (button != 0) throw ActionFailedError("nothing to right-click here");
}

void MockDesktop::scroll(int dist) {
    begin_action();
    SimWindow* w = front_window();
    if (w) {
        for (SimWidget& wd : w->widgets) {
            if (wd.role != "list") continue;
            int n = static_cast<int>(list_items(wd).size());
            int max_vp = std::max(0, n - wd.visible_rows);
            // Positive distance scrolls up, revealing earlier items.
            wd.viewport = std::clamp(wd.viewport - dist, 0, max_vp);
            return;
        }
    }
    throw ActionFailedError("nothing to scroll");
}

void MockDesktop::swipe(int x, int y, const std::string& dir, double dist) {
    begin_action();
    SimWindow* w = front_window();
    if (w) {
        for (SimWidget& wd : w->widgets) {
            if (wd.role != "list") continue;
            if (dir != "up" && dir != "down")
                throw ActionFailedError("horizontal swipe has no effect here");
            int n = static_cast<int>(list_items(wd).size());
            int max_vp = std::max(0, n - wd.visible_rows);
            int delta = static_cast<int>(std::ceil(dist * wd.visible_rows));
            // Swiping up drags content up: later items come into view.
            wd.viewport = std::clamp(wd.viewport + (dir == "up" ? delta : -delta), 0, max_vp);
            return;
        }
    }
    throw ActionFailedError("nothing to swipe");
}

void MockDesktop::drag(int x1, int y1, int x2, int y2) {
    begin_action();
    if (setup_.platform != "desktop") throw ActionFailedError("windows are fixed on this device");
    for (size_t i = windows_.size(); i-- > 0;) {
        SimWindow& w = windows_[i];
        if (!w.rect.contains(x1, y1)) continue;
        bool in_title = y1 < w.rect.y1 + kTitleBarH && !close_button_rect(w).contains(x1, y1);
        if (!in_title) throw ActionFailedError("drag must start on a title bar");
        bring_to_front(i);
        SimWindow& fw = windows_.back();
        int dx = x2 - x1, dy = y2 - y1;
        int usable_h = setup_.height - kTaskbarH;
        int nx = std::clamp(fw.rect.x1 + dx, 0, std::max(0, setup_.width - fw.rect.width()));
        int ny = std::clamp(fw.rect.y1 + dy, 0, std::max(0, usable_h - fw.rect.height()));
        fw.rect = {nx, ny, nx + fw.rect.width(), ny + fw.rect.height()};
        return;
    }
    throw ActionFailedError("nothing to drag");
}

void MockDesktop::write_text(const std::string& text) {
    begin_action();
    SimWindow* w = focus_window_ ? window_by_id(focus_window_) : nullptr;
    SimWidget* f = w ? w->find_widget(focus_widget_) : nullptr;
    if (!f || f->role != "textfield") throw ActionFailedError("no focused text field");
    f->content += text;
}

void MockDesktop::press(const std::vector<std::string>& chord_parts) {
    begin_action();
    std::string chord = join(chord_parts, "+");

    if (SimApps::run_key(*this, chord)) return;

    SimWindow* w = focus_window_ ? window_by_id(focus_window_) : nullptr;
    SimWidget* f = w ? w->find_widget(focus_widget_) : nullptr;
    bool have_field = f && f->role == "textfield";

    if (chord == "backspace") {
        if (!have_field) throw ActionFailedError("no focused text field");
        if (!f->content.empty()) f->content.pop_back();
        return;
    }
    if (chord == "ctrl+c") {
        if (!have_field) throw ActionFailedError("no focused text field");
        clipboard_ = f->content;
        return;
    }
    if (chord == "ctrl+v") {
        if (!have_field) throw ActionFailedError("no focused text field");
        f->content += clipboard_;
        return;
    }
    if (chord.size() == 1 || chord == "space") {
        if (!have_field) throw ActionFailedError("no focused text field");
        f->content += chord == "space" ? " " : chord;
        return;
    }
    throw ActionFailedError("no handler for key '" + chord + "'");
}

std::string MockDesktop::window_title() {
    if (windows_.empty()) return "Desktop";
    return windows_.back().title;
}

std::vector<std::string> MockDesktop::open_windows() {
    std::vector<std::string> out;
    for (size_t i = windows_.size(); i-- > 0;) out.push_back(windows_[i].title);
    return out;
}

const SimWindow* MockDesktop::find_window(const std::string& title_glob) const {
    bool has_wild = title_glob.find('*') != std::string::npos ||
                    title_glob.find('?') != std::string::npos;
    for (size_t i = windows_.size(); i-- > 0;) {
        const SimWindow& w = windows_[i];
        if (has_wild ? glob_match(title_glob, w.title) : w.title == title_glob) return &w;
    }
    return nullptr;
}

std::string MockDesktop::window_text(const SimWindow& w) const {
    std::string out = w.title;
    for (const SimWidget& wd : w.widgets) {
        out += "\n" + display_name(wd);
        if (!wd.content.empty()) out += "\n" + wd.content;
        if (wd.role == "list")
            for (const std::string& item : list_items(wd)) out += "\n" + item;
    }
    return out;
}

void reset_environment(Environment& env) {
    try {
        env.reset();
    } catch (const ResetFailedError&) {
        throw;
    } catch (const std::exception& ex) {
        throw ResetFailedError(ex.what());
    }
}

} // namespace osagent
