#include <random>
#include <string>
#include <vector>

#include "doctest.h"
#include "osagent/actions.hpp"
#include "osagent/errors.hpp"
#include "osagent/grounding.hpp"
#include "osagent/util.hpp"

using namespace osagent;

namespace {

struct Caught {
    std::string kind;
    std::string msg;
};

Caught parse_fails(const std::string& code, const std::string& platform = "desktop") {
    try {
        parse_script(code, platform);
    } catch (const ScriptError& e) {
        return {e.kind(), e.what()};
    }
    FAIL("expected ScriptError for: " << code);
    return {};
}

bool has_sub(const std::string& hay, const std::string& needle) {
    return hay.find(needle) != std::string::npos;
}

Observation three_buttons() {
    Observation obs;
    obs.screen_w = 320;
    obs.screen_h = 200;
    for (int i = 1; i <= 3; i++) {
        GroundedElement e;
        e.id = i;
        e.role = "button";
        e.label = "B" + std::to_string(i);
        obs.elements.push_back(e);
    }
    return obs;
}

} // namespace

TEST_CASE("key table holds the sixty supported keys") {
    const auto& keys = key_table();
    CHECK(keys.size() == 60);
    CHECK(is_known_key("a"));
    CHECK(is_known_key("9"));
    CHECK(is_known_key("f8"));
    CHECK(is_known_key("ctrl"));
    CHECK(is_known_key("backspace"));
    CHECK_FALSE(is_known_key("f9"));
    CHECK_FALSE(is_known_key("meta"));
    CHECK_FALSE(is_known_key(""));
}

TEST_CASE("chords are lowercased, trimmed and validated") {
    CHECK(canonical_chord("CTRL+Shift+V") == "ctrl+shift+v");
    CHECK(canonical_chord("  Enter ") == "enter");
    CHECK(canonical_chord("ctrl + s") == "ctrl+s");
    CHECK_THROWS_AS(canonical_chord("super+s"), ScriptError);
    CHECK_THROWS_AS(canonical_chord(""), ScriptError);
    CHECK_THROWS_AS(canonical_chord("ctrl+"), ScriptError);
    try {
        canonical_chord("foo");
    } catch (const ScriptError& e) {
        CHECK(e.kind() == "unknown_key");
    }
}

TEST_CASE("desktop statements populate the matching fields") {
    std::string code =
        "computer.mouse.move(id=12)\n"
        "computer.mouse.single_click()\n"
        "computer.mouse.move(x=0.25, y=0.75)\n"
        "computer.mouse.double_click()\n"
        "computer.mouse.right_click()\n"
        "computer.mouse.scroll(dist=-3)\n"
        "computer.mouse.drag(x1=10, y1=20, x2=110, y2=40)\n"
        "computer.keyboard.press(key=\"Ctrl + S\")\n"
        "computer.keyboard.write(text=\"hello world\")\n";
    auto script = parse_script(code, "desktop");
    REQUIRE(script.size() == 9);

    CHECK(script[0].kind == ActionKind::MouseMove);
    CHECK(script[0].target_id == 12);
    CHECK_FALSE(script[0].point.has_value());

    CHECK(script[1].kind == ActionKind::SingleClick);

    REQUIRE(script[2].point.has_value());
    CHECK(script[2].point->first == doctest::Approx(0.25));
    CHECK(script[2].point->second == doctest::Approx(0.75));
    CHECK_FALSE(script[2].target_id.has_value());

    CHECK(script[3].kind == ActionKind::DoubleClick);
    CHECK(script[4].kind == ActionKind::RightClick);

    CHECK(script[5].kind == ActionKind::Scroll);
    CHECK(script[5].dist_i == -3);

    CHECK(script[6].kind == ActionKind::Drag);
    CHECK(script[6].px1 == 10);
    CHECK(script[6].py1 == 20);
    CHECK(script[6].px2 == 110);
    CHECK(script[6].py2 == 40);

    CHECK(script[7].kind == ActionKind::KeyPress);
    CHECK(script[7].key == "ctrl+s");

    CHECK(script[8].kind == ActionKind::WriteText);
    CHECK(script[8].text == "hello world");
}

TEST_CASE("smartphone statements populate the matching fields") {
    std::string code =
        "computer.screen.tap(id=3)\n"
        "computer.screen.long_tap(x=0.5, y=0.5)\n"
        "computer.screen.swipe(id=7, dir=\"down\", dist=1.5)\n"
        "computer.screen.swipe(x=160, y=100, dir=\"up\", dist=2)\n"
        "computer.keyboard.write(text=\"ok\")\n";
    auto script = parse_script(code, "smartphone");
    REQUIRE(script.size() == 5);

    CHECK(script[0].kind == ActionKind::Tap);
    CHECK(script[0].target_id == 3);

    CHECK(script[1].kind == ActionKind::LongTap);
    REQUIRE(script[1].point.has_value());

    CHECK(script[2].kind == ActionKind::Swipe);
    CHECK(script[2].target_id == 7);
    CHECK(script[2].dir == "down");
    CHECK(script[2].dist_f == doctest::Approx(1.5));

    CHECK(script[3].target_id == std::nullopt);
    CHECK(script[3].sx == 160);
    CHECK(script[3].sy == 100);
    CHECK(script[3].dir == "up");
    CHECK(script[3].dist_f == doctest::Approx(2.0)); // integer literal widens

    CHECK(script[4].kind == ActionKind::WriteText);
}

TEST_CASE("comments attach to the action and hash inside strings stays") {
    auto s1 = parse_script("computer.mouse.single_click() # press the button\n", "desktop");
    REQUIRE(s1.size() == 1);
    CHECK(s1[0].comment == "press the button");

    auto s2 = parse_script("computer.keyboard.write(text=\"a # b\") # real\n", "desktop");
    REQUIRE(s2.size() == 1);
    CHECK(s2[0].text == "a # b");
    CHECK(s2[0].comment == "real");

    // Escaped backslash before the closing quote must not hide the comment.
    auto s3 = parse_script("computer.keyboard.write(text=\"c:\\\\\") # path\n", "desktop");
    REQUIRE(s3.size() == 1);
    CHECK(s3[0].text == "c:\\");
    CHECK(s3[0].comment == "path");

    // Everything after the first unquoted hash belongs to the comment.
    auto s4 = parse_script("computer.mouse.double_click() # a # b\n", "desktop");
    REQUIRE(s4.size() == 1);
    CHECK(s4[0].comment == "a # b");

    CHECK(parse_script("# just a note\n\n   \n", "desktop").empty());
    CHECK(parse_script("", "desktop").empty());
}

TEST_CASE("whitespace is free inside argument lists but not around dots") {
    auto ok = parse_script("  computer.mouse.drag( x1 = 1 , y1 = 2 , x2 = 3 , y2 = 4 )  \n",
                           "desktop");
    REQUIRE(ok.size() == 1);
    CHECK(ok[0].px2 == 3);

    Caught c = parse_fails("computer .mouse.move(id=1)");
    CHECK(c.kind == "syntax");
    CHECK(has_sub(c.msg, "expected '.'"));
}

TEST_CASE("each failure mode reports its kind and line") {
    struct Row {
        const char* code;
        const char* platform;
        const char* kind;
        const char* fragment;
    };
    const Row rows[] = {
        {"mouse.move(id=1)", "desktop", "syntax", "statements start with 'computer.'"},
        {"computer.gamepad.buzz()", "desktop", "unknown_action", "gamepad.buzz"},
        {"computer.mouse.move(id=1)", "smartphone", "unknown_action", "mouse.move"},
        {"computer.screen.tap(id=1)", "desktop", "unknown_action", "screen.tap"},
        {"computer.keyboard.press(key=\"a\")", "smartphone", "unknown_action",
         "keyboard.press"},
        {"computer.mouse.move()", "desktop", "bad_argument", "need either id= or x=,y="},
        {"computer.mouse.move(id=1, x=0.5)", "desktop", "bad_argument", "need either"},
        {"computer.mouse.move(x=0.5)", "desktop", "bad_argument", "missing argument 'y'"},
        {"computer.mouse.single_click(id=1)", "desktop", "bad_argument",
         "unexpected argument 'id'"},
        {"computer.mouse.scroll(dist=1.5)", "desktop", "bad_argument",
         "'dist' must be an integer"},
        {"computer.mouse.scroll(dist=\"3\")", "desktop", "bad_argument", "must be an integer"},
        {"computer.screen.swipe(id=1, dir=\"sideways\", dist=1)", "smartphone",
         "bad_argument", "dir must be up/down/left/right"},
        {"computer.keyboard.press(key=\"foo\")", "desktop", "unknown_key", "unknown key 'foo'"},
        {"computer.keyboard.press(key=\"\")", "desktop", "unknown_key", "empty key chord"},
        {"computer.mouse.move(id=1, id=2)", "desktop", "syntax", "duplicate argument 'id'"},
        {"computer.keyboard.write(text=\"abc)", "desktop", "syntax", "unterminated string"},
        {"computer.keyboard.write(text=\"a\\qb\")", "desktop", "syntax", "bad escape"},
        {"computer.mouse.move(x=1.2.3, y=0.1)", "desktop", "syntax", "malformed number"},
        {"computer.mouse.move(x=oops, y=0.1)", "desktop", "syntax", "expected a value"},
        {"computer.mouse.single_click() x", "desktop", "syntax", "trailing characters"},
        {"computer.mouse.move(3)", "desktop", "syntax", "arguments must be keyword=value"},
    };
    for (const Row& r : rows) {
        CAPTURE(r.code);
        Caught c = parse_fails(r.code, r.platform);
        CHECK(c.kind == r.kind);
        CHECK(has_sub(c.msg, r.fragment));
        CHECK(has_sub(c.msg, "line 1"));
    }

    Caught p = parse_fails("computer.mouse.single_click()", "tablet");
    CHECK(p.kind == "syntax");
    CHECK(has_sub(p.msg, "unknown platform 'tablet'"));

    // Blank and comment lines still count toward line numbers.
    Caught l = parse_fails("\n# setup\ncomputer.mouse.move()\n");
    CHECK(has_sub(l.msg, "line 3"));
}

TEST_CASE("render produces the canonical statement text") {
    Action a;
    a.kind = ActionKind::MouseMove;
    a.target_id = 7;
    CHECK(render_action(a) == "computer.mouse.move(id=7)");

    Action b;
    b.kind = ActionKind::MouseMove;
    b.point = {0.3333, 1.0};
    CHECK(render_action(b) == "computer.mouse.move(x=0.3333, y=1.0)");

    Action c;
    c.kind = ActionKind::KeyPress;
    c.key = "ctrl+shift+s";
    c.comment = "save as";
    CHECK(render_action(c) == "computer.keyboard.press(key=\"ctrl+shift+s\") # save as");

    Action d;
    d.kind = ActionKind::WriteText;
    d.text = "line1\nline2\t\"q\"";
    CHECK(render_action(d) == "computer.keyboard.write(text=\"line1\\nline2\\t\\\"q\\\"\")");

    Action e;
    e.kind = ActionKind::Swipe;
    e.sx = 90;
    e.sy = 40;
    e.dir = "left";
    e.dist_f = 0.5;
    CHECK(render_action(e) == "computer.screen.swipe(x=90, y=40, dir=\"left\", dist=0.5)");

    Action f;
    f.kind = ActionKind::Scroll;
    f.dist_i = -2;
    Action g;
    g.kind = ActionKind::SingleClick;
    CHECK(render_script({f, g}) ==
          "computer.mouse.scroll(dist=-2)\ncomputer.mouse.single_click()\n");
}

namespace {

double quantized(std::mt19937& rng, int hi) {
    std::uniform_int_distribution<int> q(0, hi);
    return q(rng) / 10000.0;
}

std::string random_chord(std::mt19937& rng) {
    const auto& keys = key_table();
    std::uniform_int_distribution<int> parts(1, 3);
    std::uniform_int_distribution<size_t> pick(0, keys.size() - 1);
    std::string s;
    int n = parts(rng);
    for (int i = 0; i < n; i++) {
        if (i) s += "+";
        s += keys[pick(rng)];
    }
    return s;
}

// Texts lean on the characters the renderer must escape.
std::string random_text(std::mt19937& rng) {
    static const std::string chars = "abcXYZ012 #\"\\\n\t\r'(),=.+-";
    std::uniform_int_distribution<int> len(0, 30);
    std::uniform_int_distribution<size_t> pick(0, chars.size() - 1);
    std::string s;
    int n = len(rng);
    for (int i = 0; i < n; i++) s.push_back(chars[pick(rng)]);
    return s;
}

// Comments survive only trimmed and single-line, so generate them that way.
std::string random_comment(std::mt19937& rng) {
    static const std::string chars = "abcdefgh 0189#\"()=,+._-";
    std::uniform_int_distribution<int> len(1, 24);
    std::uniform_int_distribution<size_t> pick(0, chars.size() - 1);
    std::string s;
    int n = len(rng);
    for (int i = 0; i < n; i++) s.push_back(chars[pick(rng)]);
    if (s.front() == ' ') s.front() = 'x';
    if (s.back() == ' ') s.back() = 'y';
    return s;
}

Action random_action(std::mt19937& rng, bool mobile) {
    std::uniform_int_distribution<int> coin(0, 1);
    std::uniform_int_distribution<int> id_d(1, 400);
    std::uniform_int_distribution<int> px_d(0, 319);
    std::uniform_int_distribution<int> py_d(0, 199);
    Action a;
    if (!mobile) {
        switch (std::uniform_int_distribution<int>(0, 7)(rng)) {
            case 0:
                a.kind = ActionKind::MouseMove;
                if (coin(rng))
                    a.target_id = id_d(rng);
                else
                    a.point = {quantized(rng, 10000), quantized(rng, 10000)};
                break;
            case 1: a.kind = ActionKind::SingleClick; break;
            case 2: a.kind = ActionKind::DoubleClick; break;
            case 3: a.kind = ActionKind::RightClick; break;
            case 4:
                a.kind = ActionKind::Scroll;
                a.dist_i = std::uniform_int_distribution<int>(-60, 60)(rng);
                break;
            case 5:
                a.kind = ActionKind::Drag;
                a.px1 = px_d(rng);
                a.py1 = py_d(rng);
                a.px2 = px_d(rng);
                a.py2 = py_d(rng);
                break;
            case 6:
                a.kind = ActionKind::KeyPress;
                a.key = random_chord(rng);
                break;
            case 7:
                a.kind = ActionKind::WriteText;
                a.text = random_text(rng);
                break;
        }
    } else {
        static const char* dirs[] = {"up", "down", "left", "right"};
        switch (std::uniform_int_distribution<int>(0, 3)(rng)) {
            case 0:
                a.kind = ActionKind::Tap;
                if (coin(rng))
                    a.target_id = id_d(rng);
                else
                    a.point = {quantized(rng, 10000), quantized(rng, 10000)};
                break;
            case 1:
                a.kind = ActionKind::LongTap;
                a.target_id = id_d(rng);
                break;
            case 2:
                a.kind = ActionKind::Swipe;
                if (coin(rng))
                    a.target_id = id_d(rng);
                else {
                    a.sx = px_d(rng);
                    a.sy = py_d(rng);
                }
                a.dir = dirs[std::uniform_int_distribution<int>(0, 3)(rng)];
                a.dist_f = std::uniform_int_distribution<int>(1, 30000)(rng) / 10000.0;
                break;
            case 3:
                a.kind = ActionKind::WriteText;
                a.text = random_text(rng);
                break;
        }
    }
    if (coin(rng)) a.comment = random_comment(rng);
    return a;
}

} // namespace

TEST_CASE("parse inverts render across generated action fixtures") {
    std::mt19937 rng(20260815u);
    const int kFixtures = 1200;
    for (int i = 0; i < kFixtures; i++) {
        bool mobile = i % 3 == 2;
        const char* platform = mobile ? "smartphone" : "desktop";
        Action a = random_action(rng, mobile);
        std::string text = render_action(a);
        CAPTURE(text);
        std::vector<Action> back = parse_script(text, platform);
        REQUIRE(back.size() == 1);
        REQUIRE(back[0] == a);
        REQUIRE(render_action(back[0]) == text);
    }
}

TEST_CASE("multi-line scripts round-trip as a whole") {
    std::mt19937 rng(7u);
    for (int rep = 0; rep < 40; rep++) {
        bool mobile = rep % 2 == 1;
        const char* platform = mobile ? "smartphone" : "desktop";
        std::vector<Action> script;
        int n = std::uniform_int_distribution<int>(1, 8)(rng);
        for (int i = 0; i < n; i++) script.push_back(random_action(rng, mobile));
        std::string text = render_script(script);
        CAPTURE(text);
        std::vector<Action> back = parse_script(text, platform);
        REQUIRE(back == script);
    }
}

TEST_CASE("validation accepts in-range targets and rejects the rest") {
    Observation obs = three_buttons();

    auto ok = parse_script("computer.mouse.move(id=2)\n"
                           "computer.mouse.move(x=0.0, y=1.0)\n"
                           "computer.mouse.scroll(dist=-1)\n"
                           "computer.mouse.drag(x1=0, y1=0, x2=319, y2=199)\n"
                           "computer.keyboard.press(key=\"enter\")\n",
                           "desktop");
    CHECK_NOTHROW(validate_script(ok, obs));

    auto expect_kind = [&](const std::string& code, const std::string& platform,
                           const std::string& kind, const std::string& fragment) {
        CAPTURE(code);
        auto script = parse_script(code, platform);
        try {
            validate_script(script, obs);
            FAIL("expected ScriptError for: " << code);
        } catch (const ScriptError& e) {
            CHECK(e.kind() == kind);
            CHECK(has_sub(e.what(), fragment));
        }
    };

    expect_kind("computer.mouse.move(id=9)", "desktop", "invalid_target",
                "no element with id 9");
    expect_kind("computer.mouse.move(x=1.5, y=0.2)", "desktop", "out_of_range",
                "x=1.5 outside [0,1]");
    expect_kind("computer.mouse.move(x=0.2, y=-0.1)", "desktop", "out_of_range", "y=-0.1");
    expect_kind("computer.mouse.scroll(dist=0)", "desktop", "out_of_range",
                "scroll dist must be nonzero");
    expect_kind("computer.mouse.drag(x1=0, y1=0, x2=320, y2=10)", "desktop", "out_of_range",
                "x2=320 outside screen");
    expect_kind("computer.mouse.drag(x1=-1, y1=0, x2=10, y2=10)", "desktop", "out_of_range",
                "x1=-1");
    expect_kind("computer.screen.swipe(x=500, y=10, dir=\"up\", dist=1)", "smartphone",
                "out_of_range", "x=500");
    expect_kind("computer.screen.swipe(id=1, dir=\"up\", dist=0)", "smartphone",
                "out_of_range", "swipe dist must be positive");
    expect_kind("computer.screen.tap(id=4)", "smartphone", "invalid_target",
                "no element with id 4");

    // Swipe by mark id skips the pixel bounds check entirely.
    auto by_id = parse_script("computer.screen.swipe(id=3, dir=\"down\", dist=2.0)",
                              "smartphone");
    CHECK_NOTHROW(validate_script(by_id, obs));
}
