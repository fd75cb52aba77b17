#include "osagent/cli.hpp"

#include <cstdio>
#include <filesystem>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "osagent/actions.hpp"
#include "osagent/errors.hpp"
#include "osagent/executor.hpp"
#include "osagent/metrics.hpp"
#include "osagent/resources.hpp"
#include "osagent/runner.hpp"
#include "osagent/util.hpp"

namespace osagent {

namespace {

namespace fs = std::filesystem;

GroundingProvider provider_from(const std::string& name) {
    if (name == "a11y") return GroundingProvider::A11yTree;
    if (name == "detect") return GroundingProvider::DetectionOcr;
    throw SchemaError("unknown grounding provider: " + name);
}

struct RunOpts {
    std::string suite_dir;
    std::string task_file;
    std::string request;
    std::string platform = "desktop";
    std::string backend = "scripted";
    std::string scenarios;
    std::string provider = "a11y";
    std::string out = "out";
    std::string data_dir;
    std::string endpoint = "http://127.0.0.1:8080/v1/plan";
    std::string model = "gui-planner";
    std::string auth_env;
    int runs = 1;
    int workers = 1;
    int max_attempts = 4;
    int max_steps = 30;
    int demos = 8;
    unsigned seed = 0;
    bool no_exec_recovery = false;
    bool no_verify_recovery = false;
};

// Usable default machine for requests typed without a task file.
TaskSpec interactive_task(const RunOpts& o) {
    TaskSpec t;
    t.id = "interactive";
    t.instruction = o.request;
    t.difficulty = "medium";
    t.domain = "Interactive";
    t.platform = o.platform;
    t.setup.platform = o.platform;
    if (o.platform == "smartphone") {
        t.setup.width = 200;
        t.setup.height = 320;
        t.setup.launcher = {"Notes", "Messages", "Config"};
    } else {
        t.setup.launcher = {"Notepad", "Files", "Settings", "Mail", "Browser", "Code"};
    }
    t.setup.files["/docs/readme.txt"] = "sample document\n";
    t.setup.settings["dark_mode"] = "off";
    t.setup.settings["volume"] = "50";
    return t;
}

int cmd_run(const RunOpts& o) {
    int chosen = (!o.suite_dir.empty() ? 1 : 0) + (!o.task_file.empty() ? 1 : 0) +
                 (!o.request.empty() ? 1 : 0);
    if (chosen != 1) {
        std::fprintf(stderr, "run: give exactly one of --suite, --task, --request\n");
        return 2;
    }
    bool interactive = !o.request.empty();

    std::vector<TaskSpec> tasks;
    if (!o.suite_dir.empty()) tasks = load_suite(o.suite_dir);
    if (!o.task_file.empty()) tasks.push_back(load_task(o.task_file));
    if (interactive) {
        tasks.push_back(interactive_task(o));
        std::fprintf(stderr,
                     "warning: no verifier configured for an interactive request; the "
                     "agent's DONE decision is accepted at face value\n");
    }
    if (tasks.empty()) {
        std::fprintf(stderr, "run: suite contains no tasks\n");
        return 2;
    }

    SuiteConfig sc;
    sc.runs = o.runs;
    sc.workers = o.workers;
    sc.backend_kind = o.backend;
    sc.scenario_dir = o.scenarios;
    sc.http.endpoint = o.endpoint;
    sc.http.model = o.model;
    sc.http.auth_env = o.auth_env;
    sc.episode.max_attempts = o.max_attempts;
    sc.episode.max_steps = o.max_steps;
    sc.episode.exec_recovery = !o.no_exec_recovery;
    sc.episode.verify_recovery = !o.no_verify_recovery;
    sc.episode.provider = provider_from(o.provider);
    sc.episode.seed = o.seed;
    sc.episode.demo_count = o.demos;
    sc.episode.reset_on_success = !interactive;

    if (sc.backend_kind == "scripted") {
        if (sc.scenario_dir.empty()) {
            std::fprintf(stderr, "run: the scripted backend needs --scenarios\n");
            return 2;
        }
        for (const TaskSpec& t : tasks) {
            fs::path scn = fs::path(sc.scenario_dir) / (t.id + ".scn");
            if (!fs::exists(scn)) {
                std::fprintf(stderr, "run: no scenario for task %s (expected %s)\n",
                             t.id.c_str(), scn.string().c_str());
                return 2;
            }
        }
    } else if (sc.backend_kind != "http") {
        std::fprintf(stderr, "run: unknown backend %s (use scripted or http)\n",
                     sc.backend_kind.c_str());
        return 2;
    }

    PromptPack pack =
        load_prompt_pack(o.data_dir.empty() ? default_data_dir() : o.data_dir);
    sc.system_text = pack.full_system(o.demos);

    fs::create_directories(o.out);
    DirTraceSink sink(o.out + "/traces");
    std::vector<EpisodeTrace> traces = run_suite(tasks, sc, &sink);

    SuiteStats stats = aggregate(traces, o.runs);
    write_file(o.out + "/report.json", stats_to_json(stats).dump(2) + "\n");
    std::string text = stats_to_text(stats);
    write_file(o.out + "/report.txt", text);
    std::fputs(text.c_str(), stdout);

    for (const EpisodeTrace& tr : traces)
        if (tr.outcome == "error") return 1;
    return 0;
}

struct ReplayOpts {
    std::string trace_file;
    std::string suite_dir;
    std::string task_file;
    bool verbose = false;
};

int cmd_replay(const ReplayOpts& o) {
    EpisodeTrace tr;
    try {
        tr = EpisodeTrace::from_jsonl(read_file(o.trace_file));
    } catch (const std::exception& e) {
        std::fprintf(stderr, "replay: cannot load %s: %s\n", o.trace_file.c_str(), e.what());
        return 2;
    }

    TaskSpec task;
    bool found = false;
    if (!o.task_file.empty()) {
        task = load_task(o.task_file);
        found = task.id == tr.task_id;
    } else if (!o.suite_dir.empty()) {
        for (TaskSpec& t : load_suite(o.suite_dir))
            if (t.id == tr.task_id) {
                task = std::move(t);
                found = true;
                break;
            }
    } else {
        std::fprintf(stderr, "replay: give --suite or --task to locate the task spec\n");
        return 2;
    }
    if (!found) {
        std::fprintf(stderr, "replay: no task spec for id %s\n", tr.task_id.c_str());
        return 2;
    }

    // Structural validation: the recorded transitions must chain and obey
    // the table. A VerifyFail may land in Fail even with budget left when
    // the run forced it (recovery off, step limit).
    for (size_t i = 0; i < tr.transitions.size(); i++) {
        const Transition& t = tr.transitions[i];
        if (i > 0 && tr.transitions[i - 1].to != t.from) {
            std::fprintf(stderr, "replay: transition %zu does not chain\n", i);
            return 1;
        }
        try {
            State to = step(t.from, Event::make(t.event, t.payload), t.attempts_used,
                            tr.max_attempts);
            bool ok = to == t.to ||
                      (t.event == EventKind::VerifyFail && t.to == State::Fail);
            if (!ok) {
                std::fprintf(stderr, "replay: transition %zu: recorded %s, table says %s\n",
                             i, state_name(t.to), state_name(to));
                return 1;
            }
        } catch (const IllegalTransitionError& e) {
            std::fprintf(stderr, "replay: transition %zu illegal: %s\n", i, e.what());
            return 1;
        }
    }

    MockDesktop env(task.setup);
    GroundingProvider provider = provider_from(tr.provider);

    for (size_t i = 0; i < tr.scripts.size(); i++) {
        const ScriptRecord& r = tr.scripts[i];
        if (r.code.size() == 1 && r.code[0] == "wait") {
            env.advance_ticks(1);
            continue;
        }
        if (r.executed == 0) continue; // nothing ran, nothing to reproduce
        Observation obs = observe(env, provider);
        std::vector<Action> script;
        try {
            script = parse_script(join(r.code, "\n"), task.platform);
        } catch (const ScriptError& e) {
            std::fprintf(stderr, "replay: script %zu does not parse: %s\n", i, e.what());
            return 1;
        }
        script.resize(static_cast<size_t>(r.executed)); // only what actually ran
        ExecOutcome out = execute_script(script, env, obs);
        if (o.verbose)
            for (const Action& a : script)
                std::printf("  [script %zu] %s\n", i, render_action(a).c_str());
        if (!out.ok || out.executed != r.executed) {
            std::fprintf(stderr,
                         "replay: divergence at script %zu action %d: %s\n", i,
                         out.executed, out.error.c_str());
            return 1;
        }
    }

    if (!tr.verifies.empty() && !task.checks.empty()) {
        const VerifyRecord& last = tr.verifies.back();
        VerifyResult vr = verify_task(task, env);
        if (vr.pass != last.pass || vr.feedback != last.feedback) {
            std::fprintf(stderr,
                         "replay: final verification diverged: recorded pass=%d \"%s\", "
                         "got pass=%d \"%s\"\n",
                         last.pass ? 1 : 0, last.feedback.c_str(), vr.pass ? 1 : 0,
                         vr.feedback.c_str());
            return 1;
        }
    }

    std::printf("replay ok: %s outcome=%s steps=%d replans=%d\n", tr.task_id.c_str(),
                tr.outcome.c_str(), tr.steps_total, tr.replans);
    if (o.verbose)
        for (const Transition& t : tr.transitions)
            std::printf("  %s --%s--> %s\n", state_name(t.from), event_name(t.event),
                        state_name(t.to));
    return 0;
}

struct GroundingOpts {
    std::string a11y_file;
    std::string out = ".";
};

int cmd_grounding(const GroundingOpts& o) {
    A11yNode root = parse_a11y(read_file(o.a11y_file));
    std::vector<GroundedElement> elems = extract_interactables(root);
    std::string semantics = textualize(elems);

    // Flat canvas the size of the root node; matches the simulator's
    // desktop background so fixtures and live screens compare alike.
    Image canvas(root.bounds.width(), root.bounds.height(), {18, 98, 120});
    Image som = render_som(canvas, elems);

    fs::create_directories(o.out);
    write_file(o.out + "/semantics.txt", semantics);
    write_ppm(o.out + "/som.ppm", som);
    std::fputs(semantics.c_str(), stdout);
    return 0;
}

} // namespace

int run_cli(int argc, const char* const* argv) {
    CLI::App app{"GUI agent harness: observe, plan, execute, verify over a simulated desktop"};
    app.require_subcommand(1);

    RunOpts ro;
    CLI::App* run = app.add_subcommand("run", "Run a task suite or a single request");
    run->add_option("--suite", ro.suite_dir, "Directory of task JSON files");
    run->add_option("--task", ro.task_file, "Single task JSON file");
    run->add_option("--request", ro.request, "Free-form instruction (interactive mode)");
    run->add_option("--platform", ro.platform, "desktop or smartphone (interactive mode)");
    run->add_option("--backend", ro.backend, "scripted or http");
    run->add_option("--scenarios", ro.scenarios, "Scenario directory for the scripted backend");
    run->add_option("--provider", ro.provider, "Grounding provider: a11y or detect");
    run->add_option("--runs", ro.runs, "Episodes per task")->check(CLI::PositiveNumber);
    run->add_option("--workers", ro.workers, "Worker threads")->check(CLI::PositiveNumber);
    run->add_option("--seed", ro.seed, "Deterministic run seed");
    run->add_option("--max-attempts", ro.max_attempts, "Verification-failure budget")
        ->check(CLI::PositiveNumber);
    run->add_option("--max-steps", ro.max_steps, "Executed-action cap")
        ->check(CLI::PositiveNumber);
    run->add_option("--demos", ro.demos, "Worked examples appended to the system prompt")
        ->check(CLI::NonNegativeNumber);
    run->add_flag("--no-exec-recovery", ro.no_exec_recovery,
                  "Execution failures end the episode instead of re-planning");
    run->add_flag("--no-verify-recovery", ro.no_verify_recovery,
                  "Verification failures end the episode instead of re-planning");
    run->add_option("--out", ro.out, "Output directory for traces and reports");
    run->add_option("--data-dir", ro.data_dir, "Prompt resource directory override");
    run->add_option("--endpoint", ro.endpoint, "HTTP backend endpoint");
    run->add_option("--model", ro.model, "HTTP backend model name");
    run->add_option("--auth-env", ro.auth_env,
                    "Environment variable holding the HTTP bearer token");

    ReplayOpts po;
    CLI::App* replay = app.add_subcommand("replay", "Re-execute a recorded trace");
    replay->add_option("--trace", po.trace_file, "Trace file (JSON lines)")->required();
    replay->add_option("--suite", po.suite_dir, "Directory holding the task spec");
    replay->add_option("--task", po.task_file, "Task JSON file");
    replay->add_flag("--verbose", po.verbose, "Print scripts and transitions");

    GroundingOpts go;
    CLI::App* grounding =
        app.add_subcommand("grounding", "Emit semantics and a marked raster for a fixture");
    grounding->add_option("--a11y", go.a11y_file, "Accessibility fixture file")->required();
    grounding->add_option("--out", go.out, "Output directory");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (run->parsed()) return cmd_run(ro);
        if (replay->parsed()) return cmd_replay(po);
        if (grounding->parsed()) return cmd_grounding(go);
    } catch (const AgentError& e) {
        std::fprintf(stderr, "%s: %s\n", e.kind().c_str(), e.what());
        return 2;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    }
    return 2;
}

} // namespace osagent
