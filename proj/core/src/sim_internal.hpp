#pragma once

#include <string>
#include <vector>

#include "osagent/sim.hpp"

namespace osagent {

struct AppTemplate {
    int w = 0, h = 0;
    std::string title;
    std::vector<SimWidget> widgets;
    bool closable = true;
    bool fullscreen = false; // mobile apps ignore x/y and cover the screen
    std::string focus_on_open; // widget focused when the window appears
};

// Static app registry plus the behavior dispatcher. Templates are pure
// data; run_tag interprets the widgets' behavior tags against live state.
class SimApps {
public:
    static const AppTemplate* tmpl(const std::string& name);
    // Display name on taskbar / home grid -> template name; empty if unknown.
    static std::string template_for_display(const std::string& display);

    static void run_tag(MockDesktop& d, int win_id, const std::string& widget_name,
                        const std::string& tag);
    // App-specific key bindings for the front window. True when handled.
    static bool run_key(MockDesktop& d, const std::string& chord);
    // Click on a visible list row: select, or activate on double click.
    static void list_row(MockDesktop& d, int win_id, const std::string& list_name,
                         int item_index, bool dbl);

    static void open_display_app(MockDesktop& d, const std::string& display);

private:
    static void save_editor(MockDesktop& d, SimWindow& w);
    static void commit_save_dialog(MockDesktop& d, SimWindow& w);
    static void open_path_in_editor(MockDesktop& d, SimWindow& from, const std::string& path);
    static void delete_selected(MockDesktop& d, SimWindow& w);
    static void open_selected(MockDesktop& d, SimWindow& w);
};

// Shared palette; the detector contract colors live in detector.hpp.
namespace simcolor {
inline constexpr Color kDesktopBg{18, 98, 120};
inline constexpr Color kMobileBg{24, 24, 30};
inline constexpr Color kTaskbarBg{40, 40, 48};
inline constexpr Color kWindowBg{225, 225, 228};
inline constexpr Color kWindowBgBack{204, 204, 206};
inline constexpr Color kWindowEdge{90, 90, 96};
inline constexpr Color kTitleBar{58, 64, 82};
inline constexpr Color kTitleBarBack{120, 124, 134};
inline constexpr Color kTitleText{255, 255, 255};
inline constexpr Color kControlFill{240, 240, 244};
inline constexpr Color kFieldFill{255, 255, 255};
inline constexpr Color kListFill{252, 252, 252};
inline constexpr Color kListEdge{150, 150, 155};
inline constexpr Color kRowSelected{205, 225, 250};
inline constexpr Color kContentInk{80, 80, 88};
inline constexpr Color kBackFlat{212, 212, 214};
} // namespace simcolor

inline constexpr int kTitleBarH = 14;
inline constexpr int kTaskbarH = 16;


} // namespace osagent
