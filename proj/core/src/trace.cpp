#include "osagent/trace.hpp"

#include <filesystem>

#include "osagent/util.hpp"

namespace osagent {

static EventKind event_from_name(const std::string& n) {
    for (int i = 0; i < kEventCount; i++) {
        EventKind e = static_cast<EventKind>(i);
        if (n == event_name(e)) return e;
    }
    throw std::runtime_error("unknown event name: " + n);
}

static State state_from_name(const std::string& n) {
    for (int i = 0; i < kStateCount; i++) {
        State s = static_cast<State>(i);
        if (n == state_name(s)) return s;
    }
    throw std::runtime_error("unknown state name: " + n);
}

std::string EpisodeTrace::to_jsonl() const {
    std::vector<json> records;

    records.push_back({{"rec", "header"},
                       {"task_id", task_id},
                       {"instruction", instruction},
                       {"domain", domain},
                       {"difficulty", difficulty},
                       {"platform", platform},
                       {"backend", backend},
                       {"provider", provider},
                       {"seed", seed},
                       {"run_index", run_index},
                       {"max_attempts", max_attempts},
                       {"max_steps", max_steps},
                       {"exec_recovery", exec_recovery},
                       {"verify_recovery", verify_recovery}});

    for (const Transition& t : transitions)
        records.push_back({{"rec", "transition"},
                           {"index", t.index},
                           {"from", state_name(t.from)},
                           {"event", event_name(t.event)},
                           {"payload", t.payload},
                           {"to", state_name(t.to)},
                           {"attempts_used", t.attempts_used},
                           {"wall_time", t.tick}});

    for (const PromptRecord& p : prompts)
        records.push_back({{"rec", "prompt"},
                           {"turn", p.turn},
                           {"user_text", p.user_text},
                           {"image_count", p.image_count},
                           {"image_w", p.image_w},
                           {"image_h", p.image_h}});

    for (const DecisionRecord& d : decisions)
        records.push_back(
            {{"rec", "decision"}, {"turn", d.turn}, {"decision", d.decision}, {"detail", d.detail}});

    for (const TaskListRecord& tl : task_lists) {
        json tasks = json::array();
        for (const TaskEntry& t : tl.tasks) tasks.push_back({{"text", t.text}, {"status", t.status}});
        records.push_back({{"rec", "tasklist"},
                           {"turn", tl.turn},
                           {"tasks", tasks},
                           {"current", tl.current},
                           {"spliced", tl.spliced},
                           {"violation", tl.violation}});
    }

    for (const ScriptRecord& s : scripts)
        records.push_back({{"rec", "script"},
                           {"turn", s.turn},
                           {"attempt", s.attempt},
                           {"task_index", s.task_index},
                           {"code", s.code},
                           {"executed", s.executed},
                           {"ok", s.ok},
                           {"error", s.error}});

    for (const VerifyRecord& v : verifies)
        records.push_back({{"rec", "verify"},
                           {"attempt", v.attempt},
                           {"pass", v.pass},
                           {"feedback", v.feedback},
                           {"forced", v.forced}});

    for (const MarkerRecord& m : markers)
        records.push_back({{"rec", "marker"}, {"kind", m.kind}, {"detail", m.detail}});

    records.push_back({{"rec", "final"},
                       {"outcome", outcome},
                       {"steps_total", steps_total},
                       {"steps_on_path", steps_on_path},
                       {"replans", replans},
                       {"final_tick", final_tick}});

    std::string out;
    for (const json& r : records) {
        out += r.dump();
        out += "\n";
    }
    return out;
}

EpisodeTrace EpisodeTrace::from_jsonl(const std::string& text) {
    EpisodeTrace tr;
    for (const std::string& line : split_lines(text)) {
        if (trim(line).empty()) continue;
        json r = json::parse(line);
        std::string rec = r.at("rec");
        if (rec == "header") {
            tr.task_id = r.at("task_id");
            tr.instruction = r.at("instruction");
            tr.domain = r.at("domain");
            tr.difficulty = r.at("difficulty");
            tr.platform = r.at("platform");
            tr.backend = r.at("backend");
            tr.provider = r.at("provider");
            tr.seed = r.at("seed");
            tr.run_index = r.at("run_index");
            tr.max_attempts = r.at("max_attempts");
            tr.max_steps = r.at("max_steps");
            tr.exec_recovery = r.at("exec_recovery");
            tr.verify_recovery = r.at("verify_recovery");
        } else if (rec == "transition") {
            Transition t;
            t.index = r.at("index");
            t.from = state_from_name(r.at("from"));
            t.event = event_from_name(r.at("event"));
            t.payload = r.at("payload");
            t.to = state_from_name(r.at("to"));
            t.attempts_used = r.at("attempts_used");
            t.tick = r.at("wall_time");
            tr.transitions.push_back(std::move(t));
        } else if (rec == "prompt") {
            PromptRecord p;
            p.turn = r.at("turn");
            p.user_text = r.at("user_text");
            p.image_count = r.at("image_count");
            p.image_w = r.at("image_w");
            p.image_h = r.at("image_h");
            tr.prompts.push_back(std::move(p));
        } else if (rec == "decision") {
            DecisionRecord d;
            d.turn = r.at("turn");
            d.decision = r.at("decision");
            d.detail = r.at("detail");
            tr.decisions.push_back(std::move(d));
        } else if (rec == "tasklist") {
            TaskListRecord tl;
            tl.turn = r.at("turn");
            for (const json& t : r.at("tasks"))
                tl.tasks.push_back({t.at("text"), t.at("status")});
            tl.current = r.at("current");
            tl.spliced = r.at("spliced");
            tl.violation = r.at("violation");
            tr.task_lists.push_back(std::move(tl));
        } else if (rec == "script") {
            ScriptRecord s;
            s.turn = r.at("turn");
            s.attempt = r.at("attempt");
            s.task_index = r.at("task_index");
            for (const json& c : r.at("code")) s.code.push_back(c);
            s.executed = r.at("executed");
            s.ok = r.at("ok");
            s.error = r.at("error");
            tr.scripts.push_back(std::move(s));
        } else if (rec == "verify") {
            VerifyRecord v;
            v.attempt = r.at("attempt");
            v.pass = r.at("pass");
            v.feedback = r.at("feedback");
            v.forced = r.at("forced");
            tr.verifies.push_back(std::move(v));
        } else if (rec == "marker") {
            tr.markers.push_back({r.at("kind"), r.at("detail")});
        } else if (rec == "final") {
            tr.outcome = r.at("outcome");
            tr.steps_total = r.at("steps_total");
            tr.steps_on_path = r.at("steps_on_path");
            tr.replans = r.at("replans");
            tr.final_tick = r.at("final_tick");
        } else {
            throw std::runtime_error("unknown trace record: " + rec);
        }
    }
    return tr;
}

DirTraceSink::DirTraceSink(std::string dir) : dir_(std::move(dir)) {
    std::filesystem::create_directories(dir_);
}

std::string DirTraceSink::file_name(const EpisodeTrace& trace) {
    return trace.task_id + "_run" + std::to_string(trace.run_index) + ".trace.jsonl";
}

void DirTraceSink::write(const EpisodeTrace& trace) {
    std::string payload = trace.to_jsonl();
    std::lock_guard<std::mutex> lock(mu_);
    write_file(dir_ + "/" + file_name(trace), payload);
}

void MemoryTraceSink::write(const EpisodeTrace& trace) {
    std::lock_guard<std::mutex> lock(mu_);
    traces.push_back(trace);
}

} // namespace osagent
