#include "osagent/planner.hpp"

#include <algorithm>

#include "osagent/errors.hpp"
#include "osagent/util.hpp"

namespace osagent {

std::string TaskList::status_of(size_t i) const {
    int idx = static_cast<int>(i) + 1;
    if (idx < current) return "done";
    if (idx == current) return "current";
    return "pending";
}

namespace {

// `k/n` at the head of the current-task line.
bool parse_fraction(const std::string& s, int& k, int& n, std::string& rest) {
    size_t slash = s.find('/');
    if (slash == std::string::npos) return false;
    size_t end = slash + 1;
    while (end < s.size() && std::isdigit(static_cast<unsigned char>(s[end]))) end++;
    try {
        k = std::stoi(s.substr(0, slash));
        n = std::stoi(s.substr(slash + 1, end - slash - 1));
    } catch (const std::exception&) {
        return false;
    }
    rest = trim(s.substr(end));
    return true;
}

std::string strip_decision_comment(const std::string& line) {
    size_t hash = line.find('#');
    return trim(hash == std::string::npos ? line : line.substr(0, hash));
}

} // namespace

PlanResponse parse_plan_response(const std::string& text) {
    PlanResponse r;
    bool in_fence = false;
    bool code_taken = false;   // only the first fenced block counts
    bool in_code_fence = false;
    std::string section;
    bool saw_list_header = false;
    bool saw_current = false;
    bool saw_decision = false;
    int current_k = 0, current_n = 0;

    for (const std::string& raw : split_lines(text)) {
        std::string line = trim(raw);

        if (starts_with(line, "```")) {
            if (!in_fence) {
                in_fence = true;
                in_code_fence = !code_taken;
            } else {
                in_fence = false;
                if (in_code_fence) code_taken = true;
                in_code_fence = false;
            }
            continue;
        }
        if (in_fence) {
            if (in_code_fence) r.code += raw + "\n";
            continue;
        }

        if (line == "[Screen Annotation]") {
            section = "annotation";
            continue;
        }
        if (line == "[New Task List]") {
            section = "list";
            saw_list_header = true;
            continue;
        }
        if (line == "[Memory]") {
            section = "memory";
            continue;
        }
        if (starts_with(line, "[Current Task]")) {
            std::string rest = trim(line.substr(14));
            std::string desc;
            if (!parse_fraction(rest, current_k, current_n, desc))
                throw MalformedResponseError("unparseable [Current Task] line: " + line);
            saw_current = true;
            section.clear();
            continue;
        }

        std::string bare = strip_decision_comment(line);
        if (!saw_decision && (bare == "COMMAND" || bare == "DONE" || bare == "WAIT")) {
            r.decision = bare;
            saw_decision = true;
            section.clear();
            continue;
        }

        if (section == "annotation" && !line.empty()) {
            if (!r.annotation.empty()) r.annotation += "\n";
            r.annotation += line;
        } else if (section == "memory" && !line.empty()) {
            if (!r.memory_note.empty()) r.memory_note += "\n";
            r.memory_note += line;
        } else if (section == "list" && !line.empty()) {
            size_t dot = line.find('.');
            if (dot == std::string::npos || dot == 0) continue; // prose, skip
            std::string num = line.substr(0, dot);
            if (num.find_first_not_of("0123456789") != std::string::npos) continue;
            int idx = std::stoi(num);
            if (idx != static_cast<int>(r.list.tasks.size()) + 1)
                throw MalformedResponseError("task list numbering must run 1..n, got " +
                                             std::to_string(idx) + " after " +
                                             std::to_string(r.list.tasks.size()) + " tasks");
            r.list.tasks.push_back(trim(line.substr(dot + 1)));
        }
    }

    if (in_fence) throw MalformedResponseError("unterminated code fence");
    if (!saw_list_header) throw MalformedResponseError("missing [New Task List] section");
    if (r.list.tasks.empty()) throw MalformedResponseError("empty task list");
    if (!saw_current) throw MalformedResponseError("missing [Current Task] line");
    if (!saw_decision) throw MalformedResponseError("missing COMMAND/DONE/WAIT decision");

    int n = static_cast<int>(r.list.tasks.size());
    if (current_n != n)
        throw MalformedResponseError("[Current Task] says /" + std::to_string(current_n) +
                                     " but the list has " + std::to_string(n) + " tasks");
    if (current_k < 1 || current_k > n)
        throw MalformedResponseError("[Current Task] index " + std::to_string(current_k) +
                                     " outside 1.." + std::to_string(n));

    if (r.decision == "COMMAND") {
        if (trim(r.code).empty())
            throw MalformedResponseError("COMMAND requires a fenced code block");
    } else {
        if (!trim(r.code).empty())
            throw MalformedResponseError(r.decision + " must not carry a code block");
        r.code.clear();
    }

    // DONE marks everything finished; COMMAND/WAIT work on task k.
    r.list.current = r.decision == "DONE" ? n + 1 : current_k;
    return r;
}

std::string render_plan_response(const PlanResponse& r) {
    std::string out;
    if (!r.annotation.empty()) out += "[Screen Annotation]\n" + r.annotation + "\n\n";

    out += "[New Task List]\n";
    for (size_t i = 0; i < r.list.tasks.size(); i++)
        out += std::to_string(i + 1) + ". " + r.list.tasks[i] + "\n";

    int n = static_cast<int>(r.list.tasks.size());
    int k = std::clamp(r.list.current, 1, n);
    out += "[Current Task] " + std::to_string(k) + "/" + std::to_string(n) + " " +
           (n > 0 ? r.list.tasks[static_cast<size_t>(k - 1)] : "") + "\n\n";

    out += r.decision + "\n";
    if (r.decision == "COMMAND") {
        out += "\n```python\n" + r.code;
        if (!r.code.empty() && r.code.back() != '\n') out += "\n";
        out += "```\n";
    }
    if (!r.memory_note.empty()) out += "\n[Memory]\n" + r.memory_note + "\n";
    return out;
}

std::string task_digest(const std::string& task_text) {
    return collapse_ws(to_lower(task_text));
}

std::string list_digest(const TaskList& list) {
    std::string out;
    for (const std::string& t : list.tasks) {
        out += task_digest(t);
        out += "\n";
    }
    return out;
}

bool is_redundant_list(const ContextMemory& mem, const TaskList& incoming) {
    const auto& v = mem.failed_list_digests;
    return std::find(v.begin(), v.end(), list_digest(incoming)) != v.end();
}

PrefixCheck enforce_done_prefix(const TaskList& prev, const TaskList& incoming) {
    PrefixCheck out;
    int done = prev.done_count();

    bool ok = static_cast<int>(incoming.tasks.size()) >= done && incoming.current > done;
    for (int i = 0; ok && i < done; i++)
        if (incoming.tasks[static_cast<size_t>(i)] != prev.tasks[static_cast<size_t>(i)])
            ok = false;

    if (ok) {
        out.reconciled = incoming;
        return out;
    }

    out.violated = true;
    for (int i = 0; i < done; i++) {
        std::string got = i < static_cast<int>(incoming.tasks.size())
                              ? incoming.tasks[static_cast<size_t>(i)]
                              : "(dropped)";
        if (got != prev.tasks[static_cast<size_t>(i)]) {
            out.detail = "done task " + std::to_string(i + 1) + " \"" +
                         prev.tasks[static_cast<size_t>(i)] + "\" became \"" + got + "\"";
            break;
        }
    }
    if (out.detail.empty())
        out.detail = "current index " + std::to_string(incoming.current) +
                     " re-enters the done prefix";

    // Splice: keep the done prefix, adopt whatever the model planned beyond it.
    out.reconciled.tasks.assign(prev.tasks.begin(), prev.tasks.begin() + done);
    for (size_t i = static_cast<size_t>(done); i < incoming.tasks.size(); i++)
        out.reconciled.tasks.push_back(incoming.tasks[i]);
    int size = static_cast<int>(out.reconciled.tasks.size());
    out.reconciled.current = std::clamp(std::max(incoming.current, done + 1), done + 1, size + 1);
    return out;
}

} // namespace osagent
