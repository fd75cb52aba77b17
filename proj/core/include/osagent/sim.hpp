#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "osagent/env.hpp"

namespace osagent {

// One control inside a window. `rel` is relative to the window's top-left
// corner (the title bar occupies rows 0..13). `action` is a behavior tag the
// dispatcher interprets, e.g. "open_app:notepad" or "toggle:dark_mode".
struct SimWidget {
    std::string role; // button, textfield, list, label, menuitem
    std::string name;
    PixelRect rel;
    std::string content;      // textfield text or label text
    std::string action;       // behavior tag, empty = default for the role
    std::string name_setting; // when set, display name = name + settings[name_setting]

    // list widgets
    std::string list_dir; // directory whose files populate the items
    int viewport = 0;     // index of first visible item
    int visible_rows = 0;
    int row_height = 16;
    int selected = -1; // index into the full item vector, -1 = none
};

struct SimWindow {
    int id = 0;
    std::string app; // template name
    std::string title;
    PixelRect rect; // absolute
    std::vector<SimWidget> widgets;
    std::string path;     // file bound to the editor, empty = unsaved
    std::string dir;      // save dialogs: target directory
    int owner_id = 0;     // dialog/menu parent window, 0 = none
    bool closable = true; // the mobile home screen cannot close

    SimWidget* find_widget(const std::string& name);
    const SimWidget* find_widget(const std::string& name) const;
};

struct SimWindowSpec {
    std::string app;
    std::string title;  // empty = template default
    int x = -1, y = -1; // -1 = default cascade position
    std::string content;
    std::string path;
};

// Pristine machine state a task starts from.
struct SimSetup {
    int width = 320;
    int height = 200;
    std::string platform = "desktop"; // or "smartphone"
    std::vector<std::string> launcher; // display names on the taskbar / home grid
    std::map<std::string, std::string> files;
    std::map<std::string, std::string> settings;
    std::vector<SimWindowSpec> windows;
};

// Deterministic in-process desktop: window stack with z-order, focus,
// clipboard, a file map, a settings map and a tick counter. Every public
// input advances the clock by one tick whether or not it has an effect.
// Rendering, the accessibility tree and input dispatch all read the same
// widget geometry, which keeps the two grounding providers in agreement.
class MockDesktop : public Environment {
public:
    explicit MockDesktop(SimSetup setup);

    int screen_width() const override { return setup_.width; }
    int screen_height() const override { return setup_.height; }
    std::string platform() const override { return setup_.platform; }

    Image render() override;
    A11yNode a11y_snapshot() override;
    A11yNode observation_tree() override;
    std::string window_title() override;
    std::vector<std::string> open_windows() override;

    void move_cursor(int x, int y) override;
    void click(int button, bool dbl) override;
    void scroll(int dist) override;
    void drag(int x1, int y1, int x2, int y2) override;
    void press(const std::vector<std::string>& chord) override;
    void write_text(const std::string& text) override;
    void tap(int x, int y, bool long_press) override;
    void swipe(int x, int y, const std::string& dir, double dist) override;

    void advance_ticks(long n) override { tick_ += n; }
    long ticks() const override { return tick_; }

    void reset() override;

    // Benchmark-harness access; the agent never touches these.
    const std::map<std::string, std::string>& files() const { return files_; }
    const std::map<std::string, std::string>& settings() const { return settings_; }
    const std::string& clipboard() const { return clipboard_; }
    long action_count() const { return actions_; }

    // Front-to-back search by title glob; nullptr when nothing matches.
    const SimWindow* find_window(const std::string& title_glob) const;

    // Every string a user could read in this window: title, widget names,
    // textfield/label contents, visible and hidden list items.
    std::string window_text(const SimWindow& w) const;

    // Fault injection: throw EnvCrashError when the n-th input (1-based)
    // arrives. 0 disables.
    void set_crash_on_action(long nth) { crash_on_ = nth; }

    // Exposed for the files list and the run action; tests use them too.
    std::vector<std::string> dir_entries(const std::string& dir) const;

private:
    void begin_action();
    SimWindow* front_window();
    SimWindow* window_by_id(int id);
    void bring_to_front(size_t index);
    void close_window(int id);
    void spawn_from_spec(const SimWindowSpec& spec);
    SimWindow* spawn(const std::string& app, const std::string& title, int x, int y,
                     const std::string& content, const std::string& path, int owner_id);
    void click_at(int x, int y, int button, bool dbl, bool long_press);
    std::vector<std::string> list_items(const SimWidget& w) const;
    std::string display_name(const SimWidget& w) const;
    PixelRect taskbar_rect() const;
    struct LauncherButton {
        std::string name;
        PixelRect rect;
    };
    std::vector<LauncherButton> launcher_buttons() const;
    void build_window_nodes(A11yNode& root, bool front_only);

    SimSetup setup_;
    std::vector<SimWindow> windows_; // back to front
    std::map<std::string, std::string> files_;
    std::map<std::string, std::string> settings_;
    std::string clipboard_;
    int next_window_id_ = 1;
    int cursor_x_ = 0, cursor_y_ = 0;
    int focus_window_ = 0; // window id, 0 = none
    std::string focus_widget_;
    long tick_ = 0;
    long actions_ = 0;
    long crash_on_ = 0;

    friend class SimApps;
};

// Widget rect in screen space; input dispatch, rendering and the
// accessibility tree all use this one mapping.
PixelRect widget_abs(const SimWindow& w, const SimWidget& wd);
PixelRect close_button_rect(const SimWindow& w);

} // namespace osagent
