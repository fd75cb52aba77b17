#pragma once

#include <algorithm>
#include <string>
#include <vector>

namespace osagent {

// Ordered plan with a cursor. Tasks before `current` are done, the task at
// `current` is in progress, the rest are pending. `current` is 1-based;
// size()+1 means the whole list is finished.
struct TaskList {
    std::vector<std::string> tasks;
    int current = 1;

    int done_count() const { return current > 0 ? current - 1 : 0; }
    bool complete() const { return current > static_cast<int>(tasks.size()); }
    bool empty() const { return tasks.empty(); }
    std::string status_of(size_t i) const;

    bool operator==(const TaskList& o) const {
        return tasks == o.tasks && current == o.current;
    }
};

// Parsed model turn. decision is COMMAND, DONE or WAIT; code carries the
// fenced block only for COMMAND.
struct PlanResponse {
    std::string annotation;
    TaskList list;
    std::string decision;
    std::string code;
    std::string memory_note;
};

// Accepts the response protocol:
//
//   [Screen Annotation]           (optional prose)
//   [New Task List]
//   1. First task.
//   2. Second task.
//   [Current Task] 1/2 First task.
//   COMMAND                       (or DONE / WAIT; trailing # comment ok)
//   ```python
//   computer.mouse.move(id=3)
//   ```
//   [Memory]                      (optional prose)
//
// Unknown prose between sections is ignored. Numbering must run 1..n, the
// current index must be within the list, COMMAND requires a code block and
// DONE/WAIT must not carry one. Violations throw MalformedResponseError.
PlanResponse parse_plan_response(const std::string& text);

// Canonical rendering of a response; parse(render(r)) reproduces r's
// structured fields. Fixture and demo authoring use this.
std::string render_plan_response(const PlanResponse& r);

// Everything remembered across re-plans within one episode.
struct HistoryAction {
    int task_index = 0;       // 1-based task the action served
    std::string action;       // canonical action rendering
    std::string result;       // "ok" or the failure message
};

struct ContextMemory {
    std::vector<TaskList> old_lists;      // append-only, oldest first
    std::vector<HistoryAction> history;   // append-only
    std::string feedback;                 // latest feedback shown to the model
    std::vector<std::string> feedback_log; // one entry per verification failure
    std::vector<std::string> notes;       // model [Memory] outputs, append-only
    // Append-only: exactly one entry per verification failure, duplicates
    // kept so the growth invariant holds under redundant re-plans.
    std::vector<std::string> failed_list_digests;
    std::vector<std::string> failed_trajectory_digests;

    const TaskList* latest_list() const {
        return old_lists.empty() ? nullptr : &old_lists.back();
    }
};

// Canonical form for redundancy comparison: lowercased, whitespace collapsed.
std::string task_digest(const std::string& task_text);
std::string list_digest(const TaskList& list);

// A new plan repeats an already-failed one. Meaningful only after at least
// one verification failure.
bool is_redundant_list(const ContextMemory& mem, const TaskList& incoming);

struct PrefixCheck {
    bool violated = false;
    std::string detail;  // which done task the model tried to rewrite
    TaskList reconciled; // done prefix spliced onto the incoming suffix
};

// Done tasks are immutable: the incoming list must repeat them verbatim in
// place and continue after them. On violation the reconciled list keeps the
// done prefix and adopts the incoming suffix.
PrefixCheck enforce_done_prefix(const TaskList& prev, const TaskList& incoming);

} // namespace osagent
