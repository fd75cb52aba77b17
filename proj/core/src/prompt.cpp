#include "osagent/prompt.hpp"

#include "osagent/errors.hpp"
#include "osagent/util.hpp"

namespace osagent {

namespace {

// First word of the statement after "computer.<device>.", e.g. "move".
std::string action_verb(const std::string& rendered) {
    size_t first = rendered.find('.');
    if (first == std::string::npos) return rendered;
    size_t second = rendered.find('.', first + 1);
    if (second == std::string::npos) return rendered;
    size_t paren = rendered.find('(', second);
    if (paren == std::string::npos) return rendered.substr(second + 1);
    return rendered.substr(second + 1, paren - second - 1);
}

} // namespace

std::string build_user_text(const std::string& objective, const ContextMemory& mem,
                            const Observation& obs, int level) {
    std::string out;
    out += "[User Objective]\n" + objective + "\n";

    if (const TaskList* list = mem.latest_list()) {
        out += "\n[Old Task List]\n";
        for (size_t i = 0; i < list->tasks.size(); i++)
            out += std::to_string(i + 1) + ". " + list->tasks[i] + " (" + list->status_of(i) +
                   ")\n";
        int n = static_cast<int>(list->tasks.size());
        if (!list->complete())
            out += "[Current Task] " + std::to_string(list->current) + "/" + std::to_string(n) +
                   " " + list->tasks[static_cast<size_t>(list->current - 1)] + "\n";
        if (mem.old_lists.size() > 1)
            out += "(" + std::to_string(mem.old_lists.size() - 1) +
                   " earlier plan revisions recorded)\n";
    }

    if (!mem.history.empty()) {
        out += "\n[History Actions]\n";
        size_t begin = 0;
        if (level >= 2 && mem.history.size() > 10) begin = mem.history.size() - 10;
        if (begin > 0)
            out += "(" + std::to_string(begin) + " earlier actions omitted)\n";
        for (size_t i = begin; i < mem.history.size(); i++) {
            const HistoryAction& h = mem.history[i];
            std::string shown = level >= 1 ? action_verb(h.action) : h.action;
            out += "(task " + std::to_string(h.task_index) + ") " + shown + " -> " + h.result +
                   "\n";
        }
    }

    if (!mem.notes.empty()) {
        out += "\n[Memory Notes]\n";
        for (const std::string& n : mem.notes) out += "- " + n + "\n";
    }

    out += "\n[Screen Semantics]\n";
    out += obs.semantics.empty() ? "(no interactable elements)\n" : obs.semantics;

    out += "\n[Window Title]\n" + obs.window_title + "\n";

    out += "\n[Open Windows]\n";
    if (obs.open_windows.empty()) {
        out += "(none)\n";
    } else {
        for (const std::string& w : obs.open_windows) out += "- " + w + "\n";
    }

    out += "\n[Candidate Screen Elements]\n";
    if (obs.elements.empty()) out += "(none)\n";
    for (const GroundedElement& e : obs.elements) {
        auto [cx, cy] = resolve_target(e.box);
        out += "- ID " + std::to_string(e.id) + ": " + e.label + " [" + e.role + "] center=(" +
               fmt2(cx) + ", " + fmt2(cy) + ")\n";
    }

    if (!mem.feedback.empty()) out += "\n[Feedback]\n" + mem.feedback + "\n";
    return out;
}

ModelRequest assemble_prompt(const std::string& system_text, const std::string& objective,
                             const ContextMemory& mem, const Observation& obs,
                             size_t max_user_chars) {
    ModelRequest req;
    req.system_text = system_text;
    for (int level = 0; level <= 2; level++) {
        std::string text = build_user_text(objective, mem, obs, level);
        if (text.size() <= max_user_chars || max_user_chars == 0) {
            req.user_text = std::move(text);
            req.images = {&obs.screen, &obs.annotated};
            return req;
        }
    }
    throw PromptTooLargeError("user prompt exceeds " + std::to_string(max_user_chars) +
                              " chars even at maximum compression");
}

} // namespace osagent
