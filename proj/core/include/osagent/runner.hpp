#pragma once

#include <string>
#include <vector>

#include "osagent/backend.hpp"
#include "osagent/grounding.hpp"
#include "osagent/sim.hpp"
#include "osagent/tasks.hpp"
#include "osagent/trace.hpp"

namespace osagent {

struct EpisodeConfig {
    int max_attempts = 4;         // verification-failure budget
    int max_steps = 30;           // executed-action cap; exceeding it fails the episode
    bool exec_recovery = true;    // execution failures route back to planning
    bool verify_recovery = true;  // verification failures after DONE route back to planning
    GroundingProvider provider = GroundingProvider::A11yTree;
    unsigned seed = 0;
    int run_index = 0;
    size_t max_user_chars = 24000; // prompt budget before compression kicks in
    int demo_count = 8;
    long wait_ticks = 1;           // dwell per WAIT decision
    int malformed_retries = 2;     // malformed turns retried before one costs an attempt
    bool reset_on_success = true;  // benchmark isolation; interactive mode keeps state
};

// Drives one request from Init through Success/Fail/Error and the closing
// notification/reset, recording the complete trace. A task with no checks
// verifies by accepting the agent's DONE (interactive mode). Fault plan:
// the first verify_flaky_fails verifications fail spuriously; crash and
// drop faults are injected by the environment and backend themselves.
EpisodeTrace run_episode(const TaskSpec& task, MockDesktop& env, ModelBackend& backend,
                         const std::string& system_text, const EpisodeConfig& cfg,
                         const FaultPlan& faults = {});

struct SuiteConfig {
    EpisodeConfig episode;
    int runs = 1;
    int workers = 1;                       // >1 runs episodes on a thread pool
    std::string backend_kind = "scripted"; // or "http"
    std::string scenario_dir;              // scripted: <task_id>.scn per task
    HttpBackendConfig http;
    std::string system_text; // fully assembled system prompt
};

// Runs every task `runs` times. Episode outcomes never abort the suite;
// config problems (missing scenario file) throw SchemaError. The returned
// traces are ordered by (run, task) regardless of worker count.
std::vector<EpisodeTrace> run_suite(const std::vector<TaskSpec>& suite, const SuiteConfig& cfg,
                                    TraceSink* sink);

} // namespace osagent
