#include "osagent/actions.hpp"

#include <cmath>
#include <map>

#include "osagent/errors.hpp"
#include "osagent/util.hpp"

namespace osagent {

const char* action_name(ActionKind k) {
    switch (k) {
        case ActionKind::MouseMove: return "move";
        case ActionKind::SingleClick: return "single_click";
        case ActionKind::DoubleClick: return "double_click";
        case ActionKind::RightClick: return "right_click";
        case ActionKind::Scroll: return "scroll";
        case ActionKind::Drag: return "drag";
        case ActionKind::KeyPress: return "press";
        case ActionKind::WriteText: return "write";
        case ActionKind::Tap: return "tap";
        case ActionKind::LongTap: return "long_tap";
        case ActionKind::Swipe: return "swipe";
    }
    return "?";
}

bool Action::operator==(const Action& o) const {
    return kind == o.kind && target_id == o.target_id && point == o.point &&
           dist_i == o.dist_i && px1 == o.px1 && py1 == o.py1 && px2 == o.px2 &&
           py2 == o.py2 && sx == o.sx && sy == o.sy && dist_f == o.dist_f &&
           dir == o.dir && key == o.key && text == o.text && comment == o.comment;
}

const std::vector<std::string>& key_table() {
    static const std::vector<std::string> keys = [] {
        std::vector<std::string> k;
        for (char c = 'a'; c <= 'z'; c++) k.push_back(std::string(1, c));
        for (char c = '0'; c <= '9'; c++) k.push_back(std::string(1, c));
        for (int i = 1; i <= 8; i++) k.push_back("f" + std::to_string(i));
        for (const char* m : {"ctrl", "alt", "shift", "win"}) k.push_back(m);
        for (const char* s : {"enter", "esc", "tab", "space", "backspace", "delete",
                              "home", "end", "up", "down", "left", "right"})
            k.push_back(s);
        return k;
    }();
    return keys;
}

bool is_known_key(const std::string& key) {
    for (const std::string& k : key_table())
        if (k == key) return true;
    return false;
}

std::string canonical_chord(const std::string& chord) {
    std::vector<std::string> parts = split(to_lower(trim(chord)), '+');
    if (parts.empty() || parts[0].empty())
        throw ScriptError("unknown_key", "empty key chord");
    for (std::string& p : parts) {
        p = trim(p);
        if (!is_known_key(p)) throw ScriptError("unknown_key", "unknown key '" + p + "'");
    }
    return join(parts, "+");
}

namespace {

struct ArgValue {
    enum Type { Int, Float, Str } type;
    long long i = 0;
    double f = 0;
    std::string s;
};

using ArgMap = std::map<std::string, ArgValue>;

struct LineParser {
    const std::string& line;
    size_t pos = 0;
    int lineno;

    explicit LineParser(const std::string& l, int n) : line(l), lineno(n) {}

    [[noreturn]] void fail(const std::string& msg) const {
        throw ScriptError("syntax", "line " + std::to_string(lineno) + ": " + msg);
    }

    void skip_ws() {
        while (pos < line.size() && (line[pos] == ' ' || line[pos] == '\t')) pos++;
    }

    bool eat(char c) {
        if (pos < line.size() && line[pos] == c) {
            pos++;
            return true;
        }
        return false;
    }

    std::string ident() {
        size_t start = pos;
        while (pos < line.size() &&
               (std::isalnum(static_cast<unsigned char>(line[pos])) || line[pos] == '_'))
            pos++;
        if (pos == start) fail("expected identifier");
        return line.substr(start, pos - start);
    }

    std::string string_literal() {
        if (!eat('"')) fail("expected string literal");
        std::string out;
        while (pos < line.size() && line[pos] != '"') {
            char c = line[pos++];
            if (c == '\\') {
                if (pos >= line.size()) fail("dangling escape");
                char e = line[pos++];
                switch (e) {
                    case 'n': out.push_back('\n'); break;
                    case 't': out.push_back('\t'); break;
                    case 'r': out.push_back('\r'); break;
                    case '"': out.push_back('"'); break;
                    case '\\': out.push_back('\\'); break;
                    default: fail(std::string("bad escape \\") + e);
                }
            } else {
                out.push_back(c);
            }
        }
        if (!eat('"')) fail("unterminated string literal");
        return out;
    }

    ArgValue value() {
        skip_ws();
        if (pos < line.size() && line[pos] == '"') {
            ArgValue v;
            v.type = ArgValue::Str;
            v.s = string_literal();
            return v;
        }
        size_t start = pos;
        if (pos < line.size() && (line[pos] == '-' || line[pos] == '+')) pos++;
        bool saw_digit = false, saw_dot = false;
        while (pos < line.size() &&
               (std::isdigit(static_cast<unsigned char>(line[pos])) || line[pos] == '.')) {
            if (line[pos] == '.') {
                if (saw_dot) fail("malformed number");
                saw_dot = true;
            } else {
                saw_digit = true;
            }
            pos++;
        }
        if (!saw_digit) fail("expected a value");
        std::string token = line.substr(start, pos - start);
        ArgValue v;
        if (saw_dot) {
            v.type = ArgValue::Float;
            v.f = std::stod(token);
        } else {
            v.type = ArgValue::Int;
            v.i = std::stoll(token);
        }
        return v;
    }

    ArgMap kwargs() {
        ArgMap args;
        skip_ws();
        if (!eat('(')) fail("expected '('");
        skip_ws();
        if (eat(')')) return args;
        while (true) {
            skip_ws();
            std::string name = ident();
            skip_ws();
            if (!eat('=')) fail("arguments must be keyword=value");
            ArgValue v = value();
            if (!args.emplace(name, v).second) fail("duplicate argument '" + name + "'");
            skip_ws();
            if (eat(')')) break;
            if (!eat(',')) fail("expected ',' or ')'");
        }
        return args;
    }
};

int require_int(const ArgMap& args, const std::string& name, int lineno) {
    auto it = args.find(name);
    if (it == args.end())
        throw ScriptError("bad_argument",
                          "line " + std::to_string(lineno) + ": missing argument '" + name + "'");
    if (it->second.type != ArgValue::Int)
        throw ScriptError("bad_argument",
                          "line " + std::to_string(lineno) + ": '" + name + "' must be an integer");
    return static_cast<int>(it->second.i);
}

double require_float(const ArgMap& args, const std::string& name, int lineno) {
    auto it = args.find(name);
    if (it == args.end())
        throw ScriptError("bad_argument",
                          "line " + std::to_string(lineno) + ": missing argument '" + name + "'");
    if (it->second.type == ArgValue::Int) return static_cast<double>(it->second.i);
    if (it->second.type == ArgValue::Float) return it->second.f;
    throw ScriptError("bad_argument",
                      "line " + std::to_string(lineno) + ": '" + name + "' must be a number");
}

std::string require_str(const ArgMap& args, const std::string& name, int lineno) {
    auto it = args.find(name);
    if (it == args.end())
        throw ScriptError("bad_argument",
                          "line " + std::to_string(lineno) + ": missing argument '" + name + "'");
    if (it->second.type != ArgValue::Str)
        throw ScriptError("bad_argument",
                          "line " + std::to_string(lineno) + ": '" + name + "' must be a string");
    return it->second.s;
}

void reject_extras(const ArgMap& args, std::initializer_list<const char*> allowed, int lineno) {
    for (const auto& [name, v] : args) {
        bool ok = false;
        for (const char* a : allowed)
            if (name == a) ok = true;
        if (!ok)
            throw ScriptError("bad_argument", "line " + std::to_string(lineno) +
                                                  ": unexpected argument '" + name + "'");
    }
}

// move/tap/long_tap accept either id= or x=,y= but not both.
void parse_target(Action& a, const ArgMap& args, int lineno) {
    bool has_id = args.count("id") > 0;
    bool has_xy = args.count("x") > 0 || args.count("y") > 0;
    if (has_id == has_xy)
        throw ScriptError("bad_argument", "line " + std::to_string(lineno) +
                                              ": need either id= or x=,y=");
    if (has_id) {
        reject_extras(args, {"id"}, lineno);
        a.target_id = require_int(args, "id", lineno);
    } else {
        reject_extras(args, {"x", "y"}, lineno);
        a.point = {require_float(args, "x", lineno), require_float(args, "y", lineno)};
    }
}

} // namespace

std::vector<Action> parse_script(const std::string& code, const std::string& platform) {
    if (platform != "desktop" && platform != "smartphone")
        throw ScriptError("syntax", "unknown platform '" + platform + "'");
    bool mobile = platform == "smartphone";

    std::vector<Action> script;
    std::vector<std::string> lines = split_lines(code);
    for (size_t i = 0; i < lines.size(); i++) {
        int lineno = static_cast<int>(i) + 1;
        std::string line = lines[i];

        // Split off a trailing comment; '#' inside string literals stays.
        // Escapes are consumed in pairs so `"a\\"` still closes the literal.
        std::string comment;
        bool in_str = false, esc = false;
        for (size_t p = 0; p < line.size(); p++) {
            char c = line[p];
            if (esc) {
                esc = false;
                continue;
            }
            if (in_str && c == '\\') {
                esc = true;
                continue;
            }
            if (c == '"') in_str = !in_str;
            if (c == '#' && !in_str) {
                comment = trim(line.substr(p + 1));
                line = line.substr(0, p);
                break;
            }
        }
        if (trim(line).empty()) continue;

        LineParser lp(line, lineno);
        lp.skip_ws();
        std::string root = lp.ident();
        if (root != "computer") lp.fail("statements start with 'computer.'");
        if (!lp.eat('.')) lp.fail("expected '.'");
        std::string device = lp.ident();
        if (!lp.eat('.')) lp.fail("expected '.'");
        std::string verb = lp.ident();
        ArgMap args = lp.kwargs();
        lp.skip_ws();
        if (lp.pos != line.size()) lp.fail("trailing characters");

        auto unknown = [&]() -> void {
            throw ScriptError("unknown_action", "line " + std::to_string(lineno) + ": no action " +
                                                    device + "." + verb + " on " + platform);
        };

        Action a;
        a.comment = comment;
        if (device == "mouse" && !mobile) {
            if (verb == "move") {
                a.kind = ActionKind::MouseMove;
                parse_target(a, args, lineno);
            } else if (verb == "single_click" || verb == "double_click" ||
                       verb == "right_click") {
                a.kind = verb == "single_click"  ? ActionKind::SingleClick
                         : verb == "double_click" ? ActionKind::DoubleClick
                                                  : ActionKind::RightClick;
                reject_extras(args, {}, lineno);
            } else if (verb == "scroll") {
                a.kind = ActionKind::Scroll;
                reject_extras(args, {"dist"}, lineno);
                a.dist_i = require_int(args, "dist", lineno);
            } else if (verb == "drag") {
                a.kind = ActionKind::Drag;
                reject_extras(args, {"x1", "y1", "x2", "y2"}, lineno);
                a.px1 = require_int(args, "x1", lineno);
                a.py1 = require_int(args, "y1", lineno);
                a.px2 = require_int(args, "x2", lineno);
                a.py2 = require_int(args, "y2", lineno);
            } else {
                unknown();
            }
        } else if (device == "keyboard") {
            if (verb == "press" && !mobile) {
                a.kind = ActionKind::KeyPress;
                reject_extras(args, {"key"}, lineno);
                try {
                    a.key = canonical_chord(require_str(args, "key", lineno));
                } catch (const ScriptError& e) {
                    if (e.kind() != "unknown_key") throw;
                    throw ScriptError("unknown_key", "line " + std::to_string(lineno) +
                                                         ": " + e.what());
                }
            } else if (verb == "write") {
                a.kind = ActionKind::WriteText;
                reject_extras(args, {"text"}, lineno);
                a.text = require_str(args, "text", lineno);
            } else {
                unknown();
            }
        } else if (device == "screen" && mobile) {
            if (verb == "tap" || verb == "long_tap") {
                a.kind = verb == "tap" ? ActionKind::Tap : ActionKind::LongTap;
                parse_target(a, args, lineno);
            } else if (verb == "swipe") {
                a.kind = ActionKind::Swipe;
                if (args.count("id")) {
                    reject_extras(args, {"id", "dir", "dist"}, lineno);
                    a.target_id = require_int(args, "id", lineno);
                } else {
                    reject_extras(args, {"x", "y", "dir", "dist"}, lineno);
                    a.sx = require_int(args, "x", lineno);
                    a.sy = require_int(args, "y", lineno);
                }
                a.dir = require_str(args, "dir", lineno);
                if (a.dir != "up" && a.dir != "down" && a.dir != "left" && a.dir != "right")
                    throw ScriptError("bad_argument", "line " + std::to_string(lineno) +
                                                          ": dir must be up/down/left/right");
                a.dist_f = require_float(args, "dist", lineno);
            } else {
                unknown();
            }
        } else {
            unknown();
        }
        script.push_back(std::move(a));
    }
    return script;
}

std::string render_action(const Action& a) {
    std::string s = "computer.";
    auto target = [&]() -> std::string {
        if (a.target_id) return "id=" + std::to_string(*a.target_id);
        return "x=" + fmt_float(a.point->first) + ", y=" + fmt_float(a.point->second);
    };
    switch (a.kind) {
        case ActionKind::MouseMove: s += "mouse.move(" + target() + ")"; break;
        case ActionKind::SingleClick: s += "mouse.single_click()"; break;
        case ActionKind::DoubleClick: s += "mouse.double_click()"; break;
        case ActionKind::RightClick: s += "mouse.right_click()"; break;
        case ActionKind::Scroll: s += "mouse.scroll(dist=" + std::to_string(a.dist_i) + ")"; break;
        case ActionKind::Drag:
            s += "mouse.drag(x1=" + std::to_string(a.px1) + ", y1=" + std::to_string(a.py1) +
                 ", x2=" + std::to_string(a.px2) + ", y2=" + std::to_string(a.py2) + ")";
            break;
        case ActionKind::KeyPress: s += "keyboard.press(key=\"" + a.key + "\")"; break;
        case ActionKind::WriteText:
            s += "keyboard.write(text=\"" + escape_string(a.text) + "\")";
            break;
        case ActionKind::Tap: s += "screen.tap(" + target() + ")"; break;
        case ActionKind::LongTap: s += "screen.long_tap(" + target() + ")"; break;
        case ActionKind::Swipe:
            if (a.target_id) {
                s += "screen.swipe(id=" + std::to_string(*a.target_id);
            } else {
                s += "screen.swipe(x=" + std::to_string(a.sx) + ", y=" + std::to_string(a.sy);
            }
            s += ", dir=\"" + a.dir + "\", dist=" + fmt_float(a.dist_f) + ")";
            break;
    }
    if (!a.comment.empty()) s += " # " + a.comment;
    return s;
}

std::string render_script(const std::vector<Action>& script) {
    std::string out;
    for (const Action& a : script) {
        out += render_action(a);
        out += "\n";
    }
    return out;
}

void validate_script(const std::vector<Action>& script, const Observation& obs) {
    auto check_id = [&](int id) {
        if (!obs.find(id))
            throw ScriptError("invalid_target",
                              "no element with id " + std::to_string(id) + " on screen");
    };
    auto check_norm = [&](double v, const char* name) {
        if (v < 0.0 || v > 1.0)
            throw ScriptError("out_of_range",
                              std::string(name) + "=" + fmt_float(v) + " outside [0,1]");
    };
    auto check_px = [&](int v, int lim, const char* name) {
        if (v < 0 || v >= lim)
            throw ScriptError("out_of_range", std::string(name) + "=" + std::to_string(v) +
                                                  " outside screen");
    };

    for (const Action& a : script) {
        if (a.target_id) check_id(*a.target_id);
        if (a.point) {
            check_norm(a.point->first, "x");
            check_norm(a.point->second, "y");
        }
        switch (a.kind) {
            case ActionKind::Scroll:
                if (a.dist_i == 0) throw ScriptError("out_of_range", "scroll dist must be nonzero");
                break;
            case ActionKind::Drag:
                check_px(a.px1, obs.screen_w, "x1");
                check_px(a.py1, obs.screen_h, "y1");
                check_px(a.px2, obs.screen_w, "x2");
                check_px(a.py2, obs.screen_h, "y2");
                break;
            case ActionKind::Swipe:
                if (!a.target_id) {
                    check_px(a.sx, obs.screen_w, "x");
                    check_px(a.sy, obs.screen_h, "y");
                }
                if (!(a.dist_f > 0))
                    throw ScriptError("out_of_range", "swipe dist must be positive");
                break;
            default: break;
        }
    }
}

} // namespace osagent
