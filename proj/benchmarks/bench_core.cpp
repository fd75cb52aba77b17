#include <benchmark/benchmark.h>

#include "osagent/a11y.hpp"
#include "osagent/actions.hpp"
#include "osagent/fsm.hpp"
#include "osagent/grounding.hpp"
#include "osagent/planner.hpp"
#include "osagent/sim.hpp"

using namespace osagent;

namespace {

SimSetup desk_setup() {
    SimSetup s;
    s.width = 320;
    s.height = 200;
    s.launcher = {"Notepad", "Files", "Settings", "Mail", "Browser", "Code"};
    s.files["/docs/readme.txt"] = "hello\n";
    s.settings["dark_mode"] = "off";
    s.windows.push_back({"notepad", "", -1, -1, "draft text", "/docs/draft.txt"});
    return s;
}

std::string sample_a11y() {
    MockDesktop env(desk_setup());
    return serialize_a11y(env.a11y_snapshot());
}

const char* kScript =
    "computer.mouse.move(id=3)\n"
    "computer.mouse.single_click()\n"
    "computer.keyboard.write(text=\"quarterly report\")\n"
    "computer.keyboard.press(key=\"ctrl+s\")\n";

const char* kResponse =
    "[Screen Annotation]\n"
    "A notepad window is focused.\n"
    "[New Task List]\n"
    "1. Open the editor.\n"
    "2. Type the draft.\n"
    "3. Save the file.\n"
    "[Current Task] 2/3 Type the draft.\n"
    "COMMAND\n"
    "```python\n"
    "computer.keyboard.write(text=\"quarterly report\")\n"
    "```\n"
    "[Memory]\n"
    "Draft goes to /docs/draft.txt.\n";

} // namespace

static void BM_fsm_step(benchmark::State& state) {
    for (auto _ : state) {
        State s = step(State::Verify, Event::make(EventKind::VerifyFail), 1, 4);
        benchmark::DoNotOptimize(s);
    }
}
BENCHMARK(BM_fsm_step);

static void BM_fsm_episode_walk(benchmark::State& state) {
    // Init -> three plan/execute rounds -> verified success.
    for (auto _ : state) {
        AgentFsm fsm(4);
        fsm.apply(Event::make(EventKind::UserRequest), 0);
        for (int i = 0; i < 3; i++) {
            fsm.apply(Event::make(EventKind::ObservationReady), i);
            fsm.apply(Event::make(EventKind::PlanMoreActions), i);
            fsm.apply(Event::make(EventKind::ExecOk), i);
        }
        fsm.apply(Event::make(EventKind::ObservationReady), 3);
        fsm.apply(Event::make(EventKind::PlanComplete), 3);
        fsm.apply(Event::make(EventKind::VerifyPass), 3);
        fsm.apply(Event::make(EventKind::Notified), 3);
        benchmark::DoNotOptimize(fsm.log().size());
    }
}
BENCHMARK(BM_fsm_episode_walk);

static void BM_parse_a11y(benchmark::State& state) {
    std::string text = sample_a11y();
    for (auto _ : state) {
        A11yNode root = parse_a11y(text);
        benchmark::DoNotOptimize(root.children.size());
    }
}
BENCHMARK(BM_parse_a11y);

static void BM_parse_script(benchmark::State& state) {
    for (auto _ : state) {
        std::vector<Action> script = parse_script(kScript, "desktop");
        benchmark::DoNotOptimize(script.size());
    }
}
BENCHMARK(BM_parse_script);

static void BM_parse_plan_response(benchmark::State& state) {
    for (auto _ : state) {
        PlanResponse r = parse_plan_response(kResponse);
        benchmark::DoNotOptimize(r.list.tasks.size());
    }
}
BENCHMARK(BM_parse_plan_response);

static void BM_extract_interactables(benchmark::State& state) {
    MockDesktop env(desk_setup());
    A11yNode root = env.a11y_snapshot();
    for (auto _ : state) {
        auto elems = extract_interactables(root);
        benchmark::DoNotOptimize(elems.size());
    }
}
BENCHMARK(BM_extract_interactables);

static void BM_textualize(benchmark::State& state) {
    MockDesktop env(desk_setup());
    auto elems = extract_interactables(env.a11y_snapshot());
    for (auto _ : state) {
        std::string text = textualize(elems);
        benchmark::DoNotOptimize(text.size());
    }
}
BENCHMARK(BM_textualize);

static void BM_sim_render(benchmark::State& state) {
    MockDesktop env(desk_setup());
    for (auto _ : state) {
        Image frame = env.render();
        benchmark::DoNotOptimize(frame.pixels.size());
    }
}
BENCHMARK(BM_sim_render);

static void BM_render_som(benchmark::State& state) {
    MockDesktop env(desk_setup());
    Image frame = env.render();
    auto elems = extract_interactables(env.a11y_snapshot());
    for (auto _ : state) {
        Image marked = render_som(frame, elems);
        benchmark::DoNotOptimize(marked.pixels.size());
    }
}
BENCHMARK(BM_render_som);

static void BM_observe(benchmark::State& state) {
    MockDesktop env(desk_setup());
    for (auto _ : state) {
        Observation obs = observe(env, GroundingProvider::A11yTree);
        benchmark::DoNotOptimize(obs.elements.size());
    }
}
BENCHMARK(BM_observe);
