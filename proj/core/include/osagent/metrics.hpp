#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "osagent/trace.hpp"

namespace osagent {

// Failure taxonomy: False Completion, Reach Step Limit, Invalid Action.
// RR refines RSL: the agent re-proposed a task list or action trajectory
// that had already failed verification.
struct FailureClass {
    enum Kind { FC, RSL, IA } kind = RSL;
    bool rr = false;
};

const char* failure_class_name(FailureClass::Kind k);

// Number of verification failures in the trace.
int replan_count(const EpisodeTrace& trace);

// Canonical renderings of every action that completed, in execution order.
std::vector<std::string> executed_actions(const EpisodeTrace& trace);

// Successful-path attribution: for every task done in the final list, count
// the actions of the last attempt that touched it. Earlier attempts were
// invalidated by the verification failure that closed them; tasks never
// re-planned keep all their actions.
int successful_path_steps(const EpisodeTrace& trace);

// successful_path_steps / steps_total. Throws NotApplicableError for
// non-success traces, DegenerateTraceError when nothing executed at all.
double proxy_matching_score(const EpisodeTrace& trace);

// Total over failed traces (outcome fail or error): IA when an execution
// failure was terminal, FC when a claimed completion could not be bounced
// back after failing verification, else RSL with the redundancy flag taken
// from the trace markers. Throws NotApplicableError on success traces.
FailureClass classify_failure(const EpisodeTrace& trace);

// Static-trajectory verification: pass iff the episode executed exactly the
// golden action sequence. Contrast harness for the execution-based checks,
// which accept any sequence that reaches the goal state.
bool matches_static_trajectory(const EpisodeTrace& trace,
                               const std::vector<std::string>& golden);

struct GroupStats {
    int episodes = 0;
    int successes = 0;

    double success_rate() const {
        return episodes > 0 ? static_cast<double>(successes) / episodes : 0.0;
    }
};

struct SuiteStats {
    int runs = 0;
    int episodes = 0;
    int successes = 0;
    int fails = 0;
    int errors = 0;
    std::optional<double> overall_sr; // absent (not zero) when no episodes ran
    std::map<std::string, GroupStats> by_domain;
    std::map<std::string, GroupStats> by_difficulty;
    std::map<int, int> replan_histogram; // over successful episodes only
    std::optional<double> mean_proxy;    // over scorable successes
    int fc = 0;
    int rsl = 0;
    int ia = 0;
    int rr = 0;                      // RSL episodes carrying the redundancy flag
    std::optional<double> rr_ratio;  // rr / failed episodes
    int splices = 0;
    int total_steps = 0;
};

// Pure over the trace list; permutation-invariant up to map ordering.
SuiteStats aggregate(const std::vector<EpisodeTrace>& traces, int runs);

json stats_to_json(const SuiteStats& s);
std::string stats_to_text(const SuiteStats& s);

} // namespace osagent
