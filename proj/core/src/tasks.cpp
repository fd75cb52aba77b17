#include "osagent/tasks.hpp"

#include <algorithm>
#include <filesystem>

#include <json.hpp>

#include "osagent/errors.hpp"
#include "osagent/util.hpp"

namespace osagent {

using json = nlohmann::json;

namespace {

std::string need_string(const json& j, const char* field, const std::string& origin) {
    if (!j.contains(field) || !j[field].is_string())
        throw SchemaError(origin + ": missing string field '" + field + "'");
    return j[field];
}

std::string opt_string(const json& j, const char* field) {
    if (!j.contains(field)) return "";
    if (!j[field].is_string()) throw SchemaError(std::string("field '") + field + "' must be a string");
    return j[field];
}

CheckSpec parse_check(const json& j, const std::string& origin) {
    CheckSpec c;
    c.kind = need_string(j, "check", origin);
    if (c.kind == "file_equals") {
        c.path = need_string(j, "path", origin);
        c.expected = need_string(j, "expected", origin);
    } else if (c.kind == "file_contains") {
        c.path = need_string(j, "path", origin);
        c.needle = need_string(j, "needle", origin);
    } else if (c.kind == "setting_equals") {
        c.key = need_string(j, "key", origin);
        c.expected = need_string(j, "expected", origin);
    } else if (c.kind == "window_shows_text") {
        c.title = need_string(j, "title", origin);
        c.needle = need_string(j, "needle", origin);
    } else if (c.kind == "window_open") {
        c.title = need_string(j, "title", origin);
    } else {
        throw SchemaError(origin + ": unknown check kind '" + c.kind + "'");
    }
    return c;
}

} // namespace

TaskSpec parse_task(const std::string& text, const std::string& origin) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception& ex) {
        throw SchemaError(origin + ": not valid JSON: " + ex.what());
    }
    if (opt_string(j, "format") != "task/1")
        throw SchemaError(origin + ": expected format \"task/1\"");

    TaskSpec t;
    t.id = need_string(j, "id", origin);
    t.instruction = need_string(j, "instruction", origin);
    t.difficulty = need_string(j, "difficulty", origin);
    if (t.difficulty != "easy" && t.difficulty != "medium" && t.difficulty != "hard")
        throw SchemaError(origin + ": difficulty must be easy/medium/hard");
    t.domain = need_string(j, "domain", origin);
    t.platform = j.contains("platform") ? need_string(j, "platform", origin) : "desktop";
    t.setup.platform = t.platform;

    if (j.contains("screen")) {
        if (!j["screen"].is_array() || j["screen"].size() != 2)
            throw SchemaError(origin + ": screen must be [w, h]");
        t.setup.width = j["screen"][0];
        t.setup.height = j["screen"][1];
    } else if (t.platform == "smartphone") {
        t.setup.width = 200;
        t.setup.height = 320;
    }

    if (j.contains("launcher"))
        for (const json& name : j["launcher"]) t.setup.launcher.push_back(name);

    if (j.contains("files"))
        for (auto& [path, content] : j["files"].items()) {
            if (!content.is_string()) throw SchemaError(origin + ": file contents must be strings");
            t.setup.files[path] = content;
        }

    if (j.contains("settings"))
        for (auto& [key, value] : j["settings"].items()) {
            if (!value.is_string()) throw SchemaError(origin + ": settings must be strings");
            t.setup.settings[key] = value;
        }

    if (j.contains("windows"))
        for (const json& w : j["windows"]) {
            SimWindowSpec spec;
            spec.app = need_string(w, "app", origin);
            spec.title = opt_string(w, "title");
            if (w.contains("x")) spec.x = w["x"];
            if (w.contains("y")) spec.y = w["y"];
            spec.content = opt_string(w, "content");
            spec.path = opt_string(w, "path");
            t.setup.windows.push_back(std::move(spec));
        }

    if (!j.contains("verifier") || !j["verifier"].is_array() || j["verifier"].empty())
        throw SchemaError(origin + ": verifier must be a non-empty array");
    for (const json& c : j["verifier"]) t.checks.push_back(parse_check(c, origin));
    return t;
}

TaskSpec load_task(const std::string& path) {
    return parse_task(read_file(path), path);
}

std::vector<TaskSpec> load_suite(const std::string& dir) {
    std::vector<TaskSpec> out;
    if (!std::filesystem::is_directory(dir)) throw SchemaError("not a directory: " + dir);
    for (const auto& entry : std::filesystem::directory_iterator(dir)) {
        if (entry.path().extension() != ".json") continue;
        out.push_back(load_task(entry.path().string()));
    }
    std::sort(out.begin(), out.end(),
              [](const TaskSpec& a, const TaskSpec& b) { return a.id < b.id; });
    return out;
}

const char* check_display_name(const std::string& kind) {
    if (kind == "file_equals") return "FileEquals";
    if (kind == "file_contains") return "FileContains";
    if (kind == "setting_equals") return "SettingEquals";
    if (kind == "window_shows_text") return "WindowShowsText";
    if (kind == "window_open") return "WindowOpen";
    return "?";
}

namespace {

std::string quote_short(const std::string& s) {
    std::string t = s.size() > 60 ? s.substr(0, 60) + "..." : s;
    return "\"" + escape_string(t) + "\"";
}

// First file whose path matches the literal-or-glob pattern, in sorted order.
const std::string* find_file(const std::map<std::string, std::string>& files,
                             const std::string& pattern) {
    bool wild = pattern.find('*') != std::string::npos || pattern.find('?') != std::string::npos;
    for (const auto& [path, content] : files) {
        if (wild ? glob_match(pattern, path) : path == pattern) return &content;
    }
    return nullptr;
}

} // namespace

VerifyResult verify_task(const TaskSpec& task, const MockDesktop& desk) {
    for (const CheckSpec& c : task.checks) {
        std::string name = check_display_name(c.kind);
        if (c.kind == "file_equals" || c.kind == "file_contains") {
            const std::string* content = find_file(desk.files(), c.path);
            if (!content) return {false, name + " " + c.path + ": file absent"};
            if (c.kind == "file_equals" && *content != c.expected)
                return {false, name + " " + c.path + ": content is " + quote_short(*content)};
            if (c.kind == "file_contains" && !contains(*content, c.needle))
                return {false, name + " " + c.path + ": " + quote_short(c.needle) +
                                   " not found in " + quote_short(*content)};
        } else if (c.kind == "setting_equals") {
            auto it = desk.settings().find(c.key);
            if (it == desk.settings().end())
                return {false, name + " " + c.key + ": unset"};
            if (it->second != c.expected)
                return {false, name + " " + c.key + ": value is " + quote_short(it->second)};
        } else if (c.kind == "window_open" || c.kind == "window_shows_text") {
            const SimWindow* w = desk.find_window(c.title);
            if (!w) return {false, name + " " + c.title + ": no window matches"};
            if (c.kind == "window_shows_text" && !contains(desk.window_text(*w), c.needle))
                return {false, name + " " + c.title + ": " + quote_short(c.needle) +
                                   " not shown"};
        }
    }
    return {true, ""};
}

} // namespace osagent
