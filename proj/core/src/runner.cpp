#include "osagent/runner.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <memory>
#include <mutex>
#include <thread>

#include "osagent/actions.hpp"
#include "osagent/errors.hpp"
#include "osagent/executor.hpp"
#include "osagent/fsm.hpp"
#include "osagent/metrics.hpp"
#include "osagent/planner.hpp"
#include "osagent/prompt.hpp"
#include "osagent/util.hpp"

namespace osagent {

namespace {

// Why verification was entered; decides the forced-fail routing and markers.
enum class VerifyCause { Done, StepLimit, ExecTerminal, MalformedBudget };

// Deferred transition out of Plan, set while handling an Execute failure.
enum class PlanGate { None, ExecTerminal, MalformedBudget };

std::vector<TaskEntry> list_entries(const TaskList& l) {
    std::vector<TaskEntry> out;
    for (size_t i = 0; i < l.tasks.size(); i++) out.push_back({l.tasks[i], l.status_of(i)});
    return out;
}

int active_task(const TaskList& l) {
    if (l.empty()) return 0;
    return l.complete() ? static_cast<int>(l.tasks.size()) : l.current;
}

} // namespace

EpisodeTrace run_episode(const TaskSpec& task, MockDesktop& env, ModelBackend& backend,
                         const std::string& system_text, const EpisodeConfig& cfg,
                         const FaultPlan& faults) {
    EpisodeTrace tr;
    tr.task_id = task.id;
    tr.instruction = task.instruction;
    tr.domain = task.domain;
    tr.difficulty = task.difficulty;
    tr.platform = task.platform;
    tr.backend = backend.name();
    tr.provider = provider_name(cfg.provider);
    tr.seed = cfg.seed;
    tr.run_index = cfg.run_index;
    tr.max_attempts = cfg.max_attempts;
    tr.max_steps = cfg.max_steps;
    tr.exec_recovery = cfg.exec_recovery;
    tr.verify_recovery = cfg.verify_recovery;

    AgentFsm fsm(cfg.max_attempts);
    ContextMemory mem;
    Observation obs;
    int turn = 0;
    int flaky_left = faults.verify_flaky_fails;
    int malformed_streak = 0;
    std::vector<std::string> attempt_actions; // canonical renderings, reset per attempt

    VerifyCause cause = VerifyCause::Done;
    PlanGate gate = PlanGate::None;
    std::string gate_detail;

    auto now = [&]() { return env.ticks(); };

    // Memory bookkeeping shared by real, flaky and synthetic verify failures.
    auto note_verify_fail = [&](const std::string& feedback) {
        mem.feedback = feedback;
        mem.feedback_log.push_back(feedback);
        TaskList cur = mem.latest_list() ? *mem.latest_list() : TaskList{};
        mem.failed_list_digests.push_back(list_digest(cur));
        if (!attempt_actions.empty()) {
            std::string tdig = join(attempt_actions, "\n");
            const auto& v = mem.failed_trajectory_digests;
            if (std::find(v.begin(), v.end(), tdig) != v.end())
                tr.markers.push_back({"rr", "action trajectory repeats a failed attempt"});
            mem.failed_trajectory_digests.push_back(tdig);
        }
        attempt_actions.clear();
        // A completed list just failed verification, so it is not complete:
        // the last task reverts to current. Without this the done prefix
        // would freeze the whole list and no re-plan could ever amend it.
        if (!mem.old_lists.empty() && mem.old_lists.back().complete() &&
            !mem.old_lists.back().empty())
            mem.old_lists.back().current = static_cast<int>(mem.old_lists.back().tasks.size());
    };

    auto record_list = [&](const TaskList& accepted, bool spliced, const std::string& violation) {
        TaskListRecord rec;
        rec.turn = turn;
        rec.tasks = list_entries(accepted);
        rec.current = accepted.complete() ? 0 : accepted.current;
        rec.spliced = spliced;
        rec.violation = violation;
        tr.task_lists.push_back(std::move(rec));
    };

    fsm.apply(Event::make(EventKind::UserRequest, task.instruction), now());

    try {
        while (true) {
            State s = fsm.state();

            if (s == State::Observe) {
                try {
                    obs = observe(env, cfg.provider);
                    fsm.apply(Event::make(EventKind::ObservationReady), now());
                } catch (const ObservationFailedError& e) {
                    // The table has no Observe->Error edge; route the
                    // exception through Plan, the nearest legal source.
                    fsm.apply(Event::make(EventKind::ObservationReady, "observation failed"),
                              now());
                    fsm.apply(Event::make(EventKind::SystemException, e.what()), now());
                }
                continue;
            }

            if (s == State::Plan) {
                if (gate == PlanGate::ExecTerminal) {
                    gate = PlanGate::None;
                    cause = VerifyCause::ExecTerminal;
                    tr.markers.push_back({"ia_terminal", gate_detail});
                    fsm.apply(Event::make(EventKind::PlanComplete,
                                          "execution recovery disabled"),
                              now());
                    continue;
                }
                if (gate == PlanGate::MalformedBudget) {
                    gate = PlanGate::None;
                    cause = VerifyCause::MalformedBudget;
                    fsm.apply(Event::make(EventKind::PlanComplete,
                                          "malformed responses exhausted"),
                              now());
                    continue;
                }
                if (tr.steps_total >= cfg.max_steps) {
                    cause = VerifyCause::StepLimit;
                    std::string detail = "step limit reached: " +
                                         std::to_string(tr.steps_total) + "/" +
                                         std::to_string(cfg.max_steps);
                    tr.markers.push_back({"step_limit", detail});
                    fsm.apply(Event::make(EventKind::PlanComplete, detail), now());
                    continue;
                }

                turn++;
                ModelRequest req;
                try {
                    req = assemble_prompt(system_text, task.instruction, mem, obs,
                                          cfg.max_user_chars);
                } catch (const PromptTooLargeError& e) {
                    fsm.apply(Event::make(EventKind::SystemException, e.what()), now());
                    continue;
                }
                tr.prompts.push_back({turn, req.user_text, static_cast<int>(req.images.size()),
                                      obs.screen.width, obs.screen.height});

                std::string raw;
                try {
                    raw = backend.generate(req);
                } catch (const BackendUnavailableError& e) {
                    fsm.apply(Event::make(EventKind::SystemException, e.what()), now());
                    continue;
                }

                PlanResponse resp;
                try {
                    resp = parse_plan_response(raw);
                } catch (const MalformedResponseError& e) {
                    malformed_streak++;
                    std::string msg = std::string("malformed response: ") + e.what();
                    tr.decisions.push_back({turn, "MALFORMED", e.what()});
                    tr.markers.push_back({"malformed", e.what()});
                    mem.feedback = msg;
                    fsm.apply(Event::make(EventKind::PlanMoreActions, "malformed response"),
                              now());
                    fsm.apply(Event::make(EventKind::ExecFailed, msg), now());
                    if (!cfg.exec_recovery) {
                        gate = PlanGate::ExecTerminal;
                        gate_detail = msg;
                    } else if (malformed_streak > cfg.malformed_retries) {
                        malformed_streak = 0;
                        gate = PlanGate::MalformedBudget;
                        gate_detail = msg;
                    }
                    continue;
                }
                malformed_streak = 0;
                tr.decisions.push_back({turn, resp.decision, ""});

                PrefixCheck pc;
                if (const TaskList* prev = mem.latest_list()) {
                    pc = enforce_done_prefix(*prev, resp.list);
                } else {
                    pc.reconciled = resp.list;
                }
                if (pc.violated) tr.markers.push_back({"splice", pc.detail});
                TaskList accepted = pc.reconciled;
                if (is_redundant_list(mem, accepted))
                    tr.markers.push_back({"rr", "task list repeats a failed plan"});
                bool changed = !mem.latest_list() || !(*mem.latest_list() == accepted);
                if (changed) {
                    mem.old_lists.push_back(accepted);
                    record_list(accepted, pc.violated, pc.detail);
                }
                if (!trim(resp.memory_note).empty()) mem.notes.push_back(trim(resp.memory_note));

                int attempt = fsm.attempts_used() + 1;
                int cur_task = active_task(accepted);

                if (resp.decision == "WAIT") {
                    tr.markers.push_back(
                        {"wait", "dwell " + std::to_string(cfg.wait_ticks) + " tick(s)"});
                    fsm.apply(Event::make(EventKind::PlanMoreActions, "wait"), now());
                    env.advance_ticks(cfg.wait_ticks);
                    tr.scripts.push_back({turn, attempt, cur_task, {"wait"}, 1, true, ""});
                    tr.steps_total += 1;
                    attempt_actions.push_back("wait");
                    mem.history.push_back({cur_task, "wait", "ok"});
                    fsm.apply(Event::make(EventKind::ExecOk, "wait"), now());
                    continue;
                }

                if (resp.decision == "DONE") {
                    cause = VerifyCause::Done;
                    fsm.apply(Event::make(EventKind::PlanComplete, "done"), now());
                    continue;
                }

                // COMMAND
                std::vector<Action> script;
                try {
                    script = parse_script(resp.code, task.platform);
                    validate_script(script, obs);
                } catch (const ScriptError& e) {
                    std::string msg = e.kind() + ": " + e.what();
                    tr.scripts.push_back(
                        {turn, attempt, cur_task, split_lines(resp.code), 0, false, msg});
                    mem.feedback = msg;
                    fsm.apply(Event::make(EventKind::PlanMoreActions, "command"), now());
                    fsm.apply(Event::make(EventKind::ExecFailed, msg), now());
                    if (!cfg.exec_recovery) {
                        gate = PlanGate::ExecTerminal;
                        gate_detail = msg;
                    }
                    continue;
                }

                fsm.apply(Event::make(EventKind::PlanMoreActions,
                                      std::to_string(script.size()) + " action(s)"),
                          now());
                ExecOutcome out = execute_script(script, env, obs);

                ScriptRecord sr;
                sr.turn = turn;
                sr.attempt = attempt;
                sr.task_index = cur_task;
                for (const Action& a : script) sr.code.push_back(render_action(a));
                sr.executed = out.executed;
                sr.ok = out.ok;
                sr.error = out.error;
                tr.scripts.push_back(sr);
                tr.steps_total += out.executed;
                for (int i = 0; i < out.executed; i++) {
                    mem.history.push_back({cur_task, sr.code[static_cast<size_t>(i)], "ok"});
                    attempt_actions.push_back(sr.code[static_cast<size_t>(i)]);
                }

                if (out.crashed) {
                    fsm.apply(Event::make(EventKind::SystemException, out.error), now());
                    continue;
                }
                if (out.ok) {
                    mem.feedback.clear();
                    fsm.apply(Event::make(EventKind::ExecOk), now());
                } else {
                    mem.history.push_back(
                        {cur_task, sr.code[static_cast<size_t>(out.executed)], out.error});
                    mem.feedback = out.error;
                    fsm.apply(Event::make(EventKind::ExecFailed, out.error), now());
                    if (!cfg.exec_recovery) {
                        gate = PlanGate::ExecTerminal;
                        gate_detail = out.error;
                    }
                }
                continue;
            }

            if (s == State::Verify) {
                int attempt = fsm.attempts_used() + 1;
                bool forced = !cfg.verify_recovery || cause == VerifyCause::ExecTerminal ||
                              cause == VerifyCause::StepLimit;

                if (flaky_left > 0) {
                    flaky_left--;
                    std::string fb = "transient verifier failure, please confirm and retry";
                    tr.verifies.push_back({attempt, false, fb, forced});
                    note_verify_fail(fb);
                    State next = fsm.apply(Event::make(EventKind::VerifyFail, fb), now(),
                                           forced);
                    if (next == State::Fail && !forced)
                        tr.markers.push_back(
                            {"attempts_exhausted",
                             std::to_string(fsm.attempts_used()) + " of " +
                                 std::to_string(cfg.max_attempts) + " attempts used"});
                    continue;
                }

                VerifyResult vr;
                if (task.checks.empty()) {
                    // Interactive mode: nothing to check, DONE is taken at face value.
                    vr.pass = cause == VerifyCause::Done;
                    if (!vr.pass) vr.feedback = "no verifier configured; only DONE is accepted";
                } else {
                    vr = verify_task(task, env);
                }

                if (vr.pass) {
                    tr.verifies.push_back({attempt, true, "", false});
                    fsm.apply(Event::make(EventKind::VerifyPass), now());
                } else {
                    if (cause == VerifyCause::Done && !cfg.verify_recovery)
                        tr.markers.push_back({"fc_unverified", vr.feedback});
                    tr.verifies.push_back({attempt, false, vr.feedback, forced});
                    note_verify_fail(vr.feedback);
                    State next = fsm.apply(Event::make(EventKind::VerifyFail, vr.feedback),
                                           now(), forced);
                    if (next == State::Fail && !forced)
                        tr.markers.push_back(
                            {"attempts_exhausted",
                             std::to_string(fsm.attempts_used()) + " of " +
                                 std::to_string(cfg.max_attempts) + " attempts used"});
                }
                continue;
            }

            if (s == State::Success) {
                tr.outcome = "success";
                fsm.apply(Event::make(EventKind::Notified, "success"), now());
                // Off-table benchmark hygiene: suites expect a pristine machine.
                if (cfg.reset_on_success) reset_environment(env);
                break;
            }
            if (s == State::Fail || s == State::Error) {
                tr.outcome = s == State::Fail ? "fail" : "error";
                fsm.apply(Event::make(EventKind::Notified, tr.outcome), now());
                reset_environment(env);
                fsm.apply(Event::make(EventKind::ResetDone), now());
                break;
            }
            throw IllegalTransitionError(std::string("episode loop stuck in ") +
                                         state_name(s));
        }
    } catch (const std::exception& e) {
        // Safety net: a bug in the loop must not take the suite down.
        tr.outcome = "error";
        tr.markers.push_back({"error", e.what()});
    }

    // Mark the task the episode died on, keeping the done prefix verbatim.
    if (tr.outcome == "fail" && !tr.task_lists.empty()) {
        TaskListRecord last = tr.task_lists.back();
        if (last.current >= 1 && last.current <= static_cast<int>(last.tasks.size())) {
            last.tasks[static_cast<size_t>(last.current - 1)].status = "failed";
            last.turn = turn;
            tr.task_lists.push_back(std::move(last));
        }
    }

    tr.transitions = fsm.log();
    tr.replans = replan_count(tr);
    tr.final_tick = env.ticks();
    if (tr.outcome == "success") tr.steps_on_path = successful_path_steps(tr);
    return tr;
}

std::vector<EpisodeTrace> run_suite(const std::vector<TaskSpec>& suite, const SuiteConfig& cfg,
                                    TraceSink* sink) {
    struct Job {
        int run = 0;
        const TaskSpec* task = nullptr;
        size_t slot = 0;
    };
    std::vector<Job> jobs;
    for (int r = 0; r < cfg.runs; r++)
        for (size_t t = 0; t < suite.size(); t++)
            jobs.push_back({r, &suite[t], static_cast<size_t>(r) * suite.size() + t});
    std::vector<EpisodeTrace> out(jobs.size());

    std::shared_ptr<HttpModelBackend> http;
    if (cfg.backend_kind == "http") http = std::make_shared<HttpModelBackend>(cfg.http);

    auto run_one = [&](const Job& j) {
        EpisodeConfig ec = cfg.episode;
        ec.run_index = j.run;
        MockDesktop env(j.task->setup);
        if (cfg.backend_kind == "scripted") {
            ScriptedMockBackend backend =
                ScriptedMockBackend::from_file(cfg.scenario_dir + "/" + j.task->id + ".scn");
            FaultPlan faults = backend.faults();
            if (faults.crash_on_action > 0) env.set_crash_on_action(faults.crash_on_action);
            out[j.slot] = run_episode(*j.task, env, backend, cfg.system_text, ec, faults);
        } else {
            out[j.slot] = run_episode(*j.task, env, *http, cfg.system_text, ec, {});
        }
        if (sink) sink->write(out[j.slot]);
    };

    int workers = std::max(1, cfg.workers);
    if (workers == 1 || jobs.size() < 2) {
        for (const Job& j : jobs) run_one(j);
        return out;
    }

    std::atomic<size_t> next{0};
    std::exception_ptr first_error;
    std::mutex err_mu;
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; w++)
        pool.emplace_back([&] {
            while (true) {
                size_t i = next.fetch_add(1);
                if (i >= jobs.size()) return;
                try {
                    run_one(jobs[i]);
                } catch (...) {
                    std::lock_guard<std::mutex> lock(err_mu);
                    if (!first_error) first_error = std::current_exception();
                }
            }
        });
    for (std::thread& th : pool) th.join();
    if (first_error) std::rethrow_exception(first_error);
    return out;
}

} // namespace osagent
