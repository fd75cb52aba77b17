#pragma once

#include <map>
#include <string>
#include <vector>

#include "osagent/sim.hpp"

namespace osagent {

// One declarative success condition. `kind` selects which fields matter:
//   file_equals   path, expected      file content must equal exactly
//   file_contains path, needle        file content must contain needle
//   setting_equals key, expected      settings[key] must equal
//   window_shows_text title, needle   a window matching the title glob shows it
//   window_open   title               a window matching the title glob exists
// path and title accept * and ? globs; everything else is literal.
struct CheckSpec {
    std::string kind;
    std::string path;
    std::string expected;
    std::string needle;
    std::string key;
    std::string title;
};

struct TaskSpec {
    std::string id;
    std::string instruction;
    std::string difficulty; // easy | medium | hard
    std::string domain;     // reporting tag, e.g. Office
    std::string platform = "desktop";
    SimSetup setup;
    std::vector<CheckSpec> checks;
};

// task/1 JSON schema; throws SchemaError with the offending field.
TaskSpec load_task(const std::string& path);
TaskSpec parse_task(const std::string& text, const std::string& origin);

// All *.json files in a directory, sorted by task id.
std::vector<TaskSpec> load_suite(const std::string& dir);

struct VerifyResult {
    bool pass = true;
    // Names the first failed check and the observed value, e.g.
    // "FileEquals /docs/draft.txt: file absent". Empty on pass.
    std::string feedback;
};

// Evaluates every check against live sim state; fails on the first miss.
VerifyResult verify_task(const TaskSpec& task, const MockDesktop& desk);

const char* check_display_name(const std::string& kind);

} // namespace osagent
