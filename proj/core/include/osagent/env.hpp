#pragma once

#include <string>
#include <vector>

#include "osagent/a11y.hpp"
#include "osagent/image.hpp"

namespace osagent {

// Boundary between the agent and whatever OS it drives. Input methods throw
// ActionFailedError when the action is refused (nothing under the cursor, no
// focus target, ...) and EnvCrashError when the environment itself dies.
// Implementations must be deterministic: equal call sequences from equal
// initial state produce equal observations, frames and ticks.
class Environment {
public:
    virtual ~Environment() = default;

    virtual int screen_width() const = 0;
    virtual int screen_height() const = 0;
    virtual std::string platform() const = 0; // "desktop" or "smartphone"

    virtual Image render() = 0;
    // Full accessibility tree of the current state.
    virtual A11yNode a11y_snapshot() = 0;
    // Pruned tree: system chrome plus the frontmost window only. This is
    // what the agent observes; occluded windows stay out of the prompt.
    virtual A11yNode observation_tree() = 0;
    virtual std::string window_title() = 0;
    virtual std::vector<std::string> open_windows() = 0; // frontmost first

    virtual void move_cursor(int x, int y) = 0;
    // Clicks at the current cursor. button: 0 = left, 1 = right.
    virtual void click(int button, bool dbl) = 0;
    // Positive = up/away, negative = down/toward. Applies to the frontmost
    // window's scrollable area.
    virtual void scroll(int dist) = 0;
    virtual void drag(int x1, int y1, int x2, int y2) = 0;
    virtual void press(const std::vector<std::string>& chord) = 0;
    virtual void write_text(const std::string& text) = 0;
    virtual void tap(int x, int y, bool long_press) = 0;
    virtual void swipe(int x, int y, const std::string& dir, double dist) = 0;

    // Simulated clock. One tick per executed action; waiting burns ticks.
    virtual void advance_ticks(long n) = 0;
    virtual long ticks() const = 0;

    // Restores the pristine initial state. Throws ResetFailedError.
    virtual void reset() = 0;
};

// Convenience wrapper that funnels any reset failure into ResetFailedError.
void reset_environment(Environment& env);

} // namespace osagent
