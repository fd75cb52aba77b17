#pragma once

#include <mutex>
#include <string>
#include <vector>

#include <json.hpp>

#include "osagent/fsm.hpp"

namespace osagent {

using json = nlohmann::json;

struct TaskEntry {
    std::string text;
    std::string status; // done | current | pending | failed
};

struct TaskListRecord {
    int turn = 0;
    std::vector<TaskEntry> tasks;
    int current = 0; // 1-based index, 0 when the list is finished
    bool spliced = false;
    std::string violation; // what the model tried to rewrite, when spliced
};

struct ScriptRecord {
    int turn = 0;
    int attempt = 0;    // verification attempt this script belongs to
    int task_index = 0; // 1-based task it advances
    std::vector<std::string> code;
    int executed = 0;
    bool ok = true;
    std::string error;
};

struct VerifyRecord {
    int attempt = 0;
    bool pass = false;
    std::string feedback;
    bool forced = false; // rerouted to Fail (recovery off / step limit)
};

struct MarkerRecord {
    std::string kind; // wait | rr | splice | fc_unverified | ia_terminal |
                      // step_limit | malformed | attempts_exhausted
    std::string detail;
};

struct PromptRecord {
    int turn = 0;
    std::string user_text;
    int image_count = 0;
    int image_w = 0, image_h = 0;
};

struct DecisionRecord {
    int turn = 0;
    std::string decision; // COMMAND | DONE | WAIT | MALFORMED
    std::string detail;
};

// Everything one episode leaves behind. Serialized as JSON Lines: a header
// record, then one record per event in episode order, then a final record.
// Timestamps are simulated ticks so equal-seed runs serialize to equal bytes.
struct EpisodeTrace {
    std::string task_id;
    std::string instruction;
    std::string domain;
    std::string difficulty;
    std::string platform;
    std::string backend;
    std::string provider;
    unsigned seed = 0;
    int run_index = 0;
    int max_attempts = 0;
    int max_steps = 0;
    bool exec_recovery = true;
    bool verify_recovery = true;

    std::vector<Transition> transitions;
    std::vector<PromptRecord> prompts;
    std::vector<DecisionRecord> decisions;
    std::vector<TaskListRecord> task_lists;
    std::vector<ScriptRecord> scripts;
    std::vector<VerifyRecord> verifies;
    std::vector<MarkerRecord> markers;

    std::string outcome;   // success | fail | error
    int steps_total = 0;   // successfully executed actions, waits included
    int steps_on_path = 0; // successful-path attribution, 0 unless Success
    int replans = 0;       // VerifyFail transitions
    long final_tick = 0;

    const TaskListRecord* final_tasks() const {
        return task_lists.empty() ? nullptr : &task_lists.back();
    }

    std::string to_jsonl() const;
    static EpisodeTrace from_jsonl(const std::string& text);
};

// Sink for completed episodes; implementations must tolerate concurrent
// writers.
class TraceSink {
public:
    virtual ~TraceSink() = default;
    virtual void write(const EpisodeTrace& trace) = 0;
};

// Writes <task_id>_run<k>.trace.jsonl files under a directory.
class DirTraceSink : public TraceSink {
public:
    explicit DirTraceSink(std::string dir);
    void write(const EpisodeTrace& trace) override;

    static std::string file_name(const EpisodeTrace& trace);

private:
    std::string dir_;
    std::mutex mu_;
};

// Collects traces in memory; test support.
class MemoryTraceSink : public TraceSink {
public:
    void write(const EpisodeTrace& trace) override;
    std::vector<EpisodeTrace> traces;

private:
    std::mutex mu_;
};

} // namespace osagent
