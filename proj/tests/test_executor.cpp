#include <string>
#include <vector>

#include "doctest.h"
#include "osagent/errors.hpp"
#include "osagent/executor.hpp"
#include "osagent/util.hpp"

using namespace osagent;

namespace {

// Records every input call; can refuse or crash on the nth call (1-based).
class RecordingEnv : public Environment {
public:
    std::vector<std::string> calls;
    int refuse_on = 0;
    int crash_on = 0;

    int screen_width() const override { return 320; }
    int screen_height() const override { return 200; }
    std::string platform() const override { return "desktop"; }
    Image render() override { return Image(); }
    A11yNode a11y_snapshot() override { return {}; }
    A11yNode observation_tree() override { return {}; }
    std::string window_title() override { return ""; }
    std::vector<std::string> open_windows() override { return {}; }
    void advance_ticks(long) override {}
    long ticks() const override { return 0; }
    void reset() override {}

    void move_cursor(int x, int y) override {
        note("move_cursor(" + std::to_string(x) + "," + std::to_string(y) + ")");
    }
    void click(int button, bool dbl) override {
        note("click(" + std::to_string(button) + "," + (dbl ? std::string("dbl") : "single") +
             ")");
    }
    void scroll(int dist) override { note("scroll(" + std::to_string(dist) + ")"); }
    void drag(int x1, int y1, int x2, int y2) override {
        note("drag(" + std::to_string(x1) + "," + std::to_string(y1) + "," +
             std::to_string(x2) + "," + std::to_string(y2) + ")");
    }
    void press(const std::vector<std::string>& chord) override {
        note("press(" + join(chord, "+") + ")");
    }
    void write_text(const std::string& text) override { note("write(" + text + ")"); }
    void tap(int x, int y, bool long_press) override {
        note(std::string(long_press ? "long_tap(" : "tap(") + std::to_string(x) + "," +
             std::to_string(y) + ")");
    }
    void swipe(int x, int y, const std::string& dir, double dist) override {
        note("swipe(" + std::to_string(x) + "," + std::to_string(y) + "," + dir + "," +
             fmt_float(dist) + ")");
    }

private:
    void note(const std::string& call) {
        int n = static_cast<int>(calls.size()) + 1;
        if (n == crash_on) throw EnvCrashError("environment died");
        if (n == refuse_on) throw ActionFailedError("nothing under the cursor");
        calls.push_back(call);
    }
};

Observation obs_with_button() {
    Observation obs;
    obs.screen_w = 320;
    obs.screen_h = 200;
    GroundedElement e;
    e.id = 5;
    e.role = "button";
    e.label = "Save";
    e.box = {0.25, 0.1, 0.75, 0.4}; // center (0.5, 0.25) -> pixel (160, 50)
    obs.elements.push_back(e);
    return obs;
}

} // namespace

TEST_CASE("every desktop action dispatches to its environment call") {
    RecordingEnv env;
    Observation obs = obs_with_button();
    auto script = parse_script("computer.mouse.move(id=5)\n"
                               "computer.mouse.single_click()\n"
                               "computer.mouse.move(x=0.5, y=1.0)\n"
                               "computer.mouse.double_click()\n"
                               "computer.mouse.right_click()\n"
                               "computer.mouse.scroll(dist=-3)\n"
                               "computer.mouse.drag(x1=10, y1=20, x2=110, y2=40)\n"
                               "computer.keyboard.press(key=\"ctrl+s\")\n"
                               "computer.keyboard.write(text=\"hi\")\n",
                               "desktop");
    ExecOutcome out = execute_script(script, env, obs);
    CHECK(out.ok);
    CHECK_FALSE(out.crashed);
    CHECK(out.executed == 9);
    CHECK(out.error.empty());
    CHECK(env.calls == std::vector<std::string>{
                           "move_cursor(160,50)", // mark 5 resolves to its box center
                           "click(0,single)",
                           "move_cursor(160,199)", // y=1.0 clamps onto the last row
                           "click(0,dbl)",
                           "click(1,single)",
                           "scroll(-3)",
                           "drag(10,20,110,40)",
                           "press(ctrl+s)",
                           "write(hi)",
                       });
}

TEST_CASE("every smartphone action dispatches to its environment call") {
    RecordingEnv env;
    Observation obs = obs_with_button();
    auto script = parse_script("computer.screen.tap(id=5)\n"
                               "computer.screen.long_tap(x=0.0, y=0.0)\n"
                               "computer.screen.swipe(id=5, dir=\"up\", dist=1.5)\n"
                               "computer.screen.swipe(x=30, y=40, dir=\"left\", dist=0.5)\n"
                               "computer.keyboard.write(text=\"ok\")\n",
                               "smartphone");
    ExecOutcome out = execute_script(script, env, obs);
    CHECK(out.ok);
    CHECK(out.executed == 5);
    CHECK(env.calls == std::vector<std::string>{
                           "tap(160,50)",
                           "long_tap(0,0)",
                           "swipe(160,50,up,1.5)", // swipe by mark resolves the center
                           "swipe(30,40,left,0.5)", // swipe by point is already pixels
                           "write(ok)",
                       });
}

TEST_CASE("execution stops at the first refusal") {
    RecordingEnv env;
    env.refuse_on = 2;
    Observation obs = obs_with_button();
    auto script = parse_script("computer.mouse.move(id=5)\n"
                               "computer.mouse.single_click()\n"
                               "computer.keyboard.write(text=\"never\")\n",
                               "desktop");
    ExecOutcome out = execute_script(script, env, obs);
    CHECK_FALSE(out.ok);
    CHECK_FALSE(out.crashed);
    CHECK(out.executed == 1);
    CHECK(out.error == "action_failed: nothing under the cursor "
                       "(while running computer.mouse.single_click())");
    CHECK(env.calls.size() == 1); // the third action never ran
}

TEST_CASE("an unresolvable mark id fails before touching the environment") {
    RecordingEnv env;
    Observation obs = obs_with_button();
    auto script = parse_script("computer.mouse.move(id=99)\ncomputer.mouse.single_click()\n",
                               "desktop");
    ExecOutcome out = execute_script(script, env, obs);
    CHECK_FALSE(out.ok);
    CHECK(out.executed == 0);
    CHECK(out.error == "invalid_target: no element with id 99 "
                       "(while running computer.mouse.move(id=99))");
    CHECK(env.calls.empty());
}

TEST_CASE("an environment crash is distinguished from a refusal") {
    RecordingEnv env;
    env.crash_on = 3;
    Observation obs = obs_with_button();
    auto script = parse_script("computer.mouse.move(id=5)\n"
                               "computer.mouse.single_click()\n"
                               "computer.mouse.double_click()\n",
                               "desktop");
    ExecOutcome out = execute_script(script, env, obs);
    CHECK_FALSE(out.ok);
    CHECK(out.crashed);
    CHECK(out.executed == 2);
    CHECK(out.error == "env_crash: environment died "
                       "(while running computer.mouse.double_click())");
}

TEST_CASE("an empty script succeeds without side effects") {
    RecordingEnv env;
    Observation obs = obs_with_button();
    ExecOutcome out = execute_script({}, env, obs);
    CHECK(out.ok);
    CHECK(out.executed == 0);
    CHECK(env.calls.empty());
}
