#include <benchmark/benchmark.h>

#include "osagent/backend.hpp"
#include "osagent/runner.hpp"

using namespace osagent;

namespace {

// Self-contained scripted episode: one command round, then DONE. The task
// carries no checks, so verification accepts the DONE.
const char* kScenario =
    "mockplan/1\n"
    "== turn 1\n"
    "[New Task List]\n"
    "1. Open the notepad app.\n"
    "[Current Task] 1/1 Open the notepad app.\n"
    "COMMAND\n"
    "```python\n"
    "computer.mouse.move(id={{id:Notepad}})\n"
    "computer.mouse.single_click()\n"
    "```\n"
    "== loop\n"
    "[New Task List]\n"
    "1. Open the notepad app.\n"
    "[Current Task] 1/1 Open the notepad app.\n"
    "DONE\n";

TaskSpec bench_task() {
    TaskSpec t;
    t.id = "bench_open_notepad";
    t.instruction = "Open the notepad app.";
    t.difficulty = "easy";
    t.domain = "Office";
    t.setup.width = 320;
    t.setup.height = 200;
    t.setup.launcher = {"Notepad", "Files", "Settings"};
    return t;
}

} // namespace

static void BM_scripted_episode(benchmark::State& state) {
    TaskSpec task = bench_task();
    EpisodeConfig cfg;
    for (auto _ : state) {
        MockDesktop env(task.setup);
        ScriptedMockBackend backend =
            ScriptedMockBackend::from_text(kScenario, "bench");
        EpisodeTrace tr = run_episode(task, env, backend, "You control a computer.", cfg);
        if (tr.outcome != "success") state.SkipWithError("episode did not succeed");
        benchmark::DoNotOptimize(tr.transitions.size());
    }
}
BENCHMARK(BM_scripted_episode);

BENCHMARK_MAIN();
