#pragma once

#include <optional>
#include <string>
#include <vector>

#include "osagent/grounding.hpp"

namespace osagent {

enum class ActionKind {
    MouseMove,   // computer.mouse.move(id=..) | (x=.., y=..)      x,y normalized
    SingleClick, // computer.mouse.single_click()
    DoubleClick, // computer.mouse.double_click()
    RightClick,  // computer.mouse.right_click()
    Scroll,      // computer.mouse.scroll(dist=..)                 int, nonzero
    Drag,        // computer.mouse.drag(x1=..,y1=..,x2=..,y2=..)   pixels
    KeyPress,    // computer.keyboard.press(key="ctrl+s")
    WriteText,   // computer.keyboard.write(text="..")
    Tap,         // computer.screen.tap(id=..) | (x=.., y=..)      x,y normalized
    LongTap,     // computer.screen.long_tap(id=..) | (x=.., y=..)
    Swipe,       // computer.screen.swipe(id=..,dir="up",dist=1.0)
                 //   | (x=..,y=..,dir=..,dist=..)                 x,y pixels
};

const char* action_name(ActionKind k);

struct Action {
    ActionKind kind;
    std::optional<int> target_id;                    // move/tap/long_tap/swipe by mark id
    std::optional<std::pair<double, double>> point;  // move/tap/long_tap, normalized
    int dist_i = 0;                                  // scroll
    int px1 = 0, py1 = 0, px2 = 0, py2 = 0;          // drag, pixels
    int sx = 0, sy = 0;                              // swipe point, pixels
    double dist_f = 0;                               // swipe
    std::string dir;                                 // swipe: up/down/left/right
    std::string key;                                 // press, canonical lowercase chord
    std::string text;                                // write
    std::string comment;                             // trailing `# ...`, kept verbatim

    bool operator==(const Action& o) const;
};

// The 60 key names the press action accepts; chords join them with '+'.
const std::vector<std::string>& key_table();
bool is_known_key(const std::string& key);

// Splits a chord on '+', lowercases, and validates every part against the
// key table. Throws ScriptError(unknown_key).
std::string canonical_chord(const std::string& chord);

// Parses a script: one action statement per line, `#` starts a comment,
// blank lines ignored. Keyword arguments only. `platform` gates the device
// set: desktop allows mouse/keyboard, smartphone allows screen plus
// keyboard.write. Throws ScriptError with kind syntax, unknown_action,
// bad_argument or unknown_key. Line numbers appear in messages.
std::vector<Action> parse_script(const std::string& code, const std::string& platform);

// Canonical one-line rendering; parse_script(render_action(a)) == a.
std::string render_action(const Action& a);
std::string render_script(const std::vector<Action>& script);

// Checks a parsed script against one observation: mark ids must exist
// (invalid_target), normalized coordinates must lie in [0,1], pixel
// coordinates inside the screen, scroll distance nonzero, swipe distance
// positive (out_of_range). Throws ScriptError.
void validate_script(const std::vector<Action>& script, const Observation& obs);

} // namespace osagent
