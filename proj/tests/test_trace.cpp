#include <filesystem>
#include <string>
#include <thread>
#include <vector>

#include "doctest.h"
#include "osagent/trace.hpp"
#include "osagent/util.hpp"

using namespace osagent;
namespace fs = std::filesystem;

namespace {

EpisodeTrace sample_trace() {
    EpisodeTrace t;
    t.task_id = "notepad_draft";
    t.instruction = "Write \"hello\" and save\nthe file";
    t.domain = "office";
    t.difficulty = "medium";
    t.platform = "desktop";
    t.backend = "mock";
    t.provider = "a11y";
    t.seed = 42;
    t.run_index = 2;
    t.max_attempts = 3;
    t.max_steps = 30;
    t.exec_recovery = true;
    t.verify_recovery = false;

    Transition tr;
    tr.index = 0;
    tr.from = State::Init;
    tr.event = EventKind::UserRequest;
    tr.payload = "";
    tr.to = State::Observe;
    tr.attempts_used = 0;
    tr.tick = 0;
    t.transitions.push_back(tr);

    Transition tr2;
    tr2.index = 1;
    tr2.from = State::Verify;
    tr2.event = EventKind::VerifyFail;
    tr2.payload = "file missing";
    tr2.to = State::Plan;
    tr2.attempts_used = 1;
    tr2.tick = 17;
    t.transitions.push_back(tr2);

    t.prompts.push_back({1, "[User Objective]\nWrite the draft", 2, 320, 200});
    t.decisions.push_back({1, "COMMAND", ""});
    t.decisions.push_back({2, "MALFORMED", "missing [New Task List] section"});

    TaskListRecord tl;
    tl.turn = 1;
    tl.tasks = {{"Open the editor", "done"}, {"Type the draft", "current"}};
    tl.current = 2;
    tl.spliced = true;
    tl.violation = "done task 1 \"Open the editor\" became \"Open it\"";
    t.task_lists.push_back(tl);

    ScriptRecord sc;
    sc.turn = 1;
    sc.attempt = 1;
    sc.task_index = 2;
    sc.code = {"computer.mouse.move(id=3)", "computer.mouse.single_click()"};
    sc.executed = 1;
    sc.ok = false;
    sc.error = "action_failed: nothing under the cursor";
    t.scripts.push_back(sc);

    t.verifies.push_back({1, false, "verification failed: file missing", false});
    t.verifies.push_back({2, true, "", true});

    t.markers.push_back({"rr", "plan repeats attempt 1"});
    t.markers.push_back({"wait", ""});

    t.outcome = "success";
    t.steps_total = 7;
    t.steps_on_path = 5;
    t.replans = 1;
    t.final_tick = 44;
    return t;
}

} // namespace

TEST_CASE("trace serializes to one json record per line") {
    EpisodeTrace t = sample_trace();
    std::string text = t.to_jsonl();

    std::vector<std::string> lines = split_lines(text);
    // header + 2 transitions + 1 prompt + 2 decisions + 1 tasklist + 1 script
    // + 2 verifies + 2 markers + final
    REQUIRE(lines.size() == 13);

    json head = json::parse(lines.front());
    CHECK(head.at("rec") == "header");
    CHECK(head.at("task_id") == "notepad_draft");
    CHECK(head.at("seed") == 42);
    CHECK(head.at("verify_recovery") == false);

    json tail = json::parse(lines.back());
    CHECK(tail.at("rec") == "final");
    CHECK(tail.at("outcome") == "success");
    CHECK(tail.at("final_tick") == 44);

    // Ticks serialize under wall_time: simulated time is the only clock.
    json tr = json::parse(lines[2]);
    CHECK(tr.at("rec") == "transition");
    CHECK(tr.at("wall_time") == 17);
    CHECK(tr.at("from") == "Verify");
    CHECK(tr.at("event") == "VerifyFail");
    CHECK(tr.at("to") == "Plan");

    for (const std::string& line : lines) CHECK_NOTHROW(json::parse(line));
}

TEST_CASE("trace round-trips through jsonl byte-identically") {
    EpisodeTrace t = sample_trace();
    std::string text = t.to_jsonl();
    CHECK(t.to_jsonl() == text); // serialization is pure

    EpisodeTrace back = EpisodeTrace::from_jsonl(text);
    CHECK(back.to_jsonl() == text);

    CHECK(back.instruction == t.instruction);
    CHECK(back.run_index == 2);
    CHECK(back.exec_recovery);
    CHECK_FALSE(back.verify_recovery);
    REQUIRE(back.transitions.size() == 2);
    CHECK(back.transitions[1].from == State::Verify);
    CHECK(back.transitions[1].event == EventKind::VerifyFail);
    CHECK(back.transitions[1].payload == "file missing");
    CHECK(back.transitions[1].tick == 17);
    REQUIRE(back.task_lists.size() == 1);
    CHECK(back.task_lists[0].spliced);
    CHECK(back.task_lists[0].tasks[1].text == "Type the draft");
    REQUIRE(back.scripts.size() == 1);
    CHECK(back.scripts[0].code.size() == 2);
    CHECK_FALSE(back.scripts[0].ok);
    REQUIRE(back.verifies.size() == 2);
    CHECK(back.verifies[1].forced);
    REQUIRE(back.markers.size() == 2);
    CHECK(back.markers[0].kind == "rr");
    CHECK(back.steps_on_path == 5);

    REQUIRE(back.final_tasks() != nullptr);
    CHECK(back.final_tasks()->current == 2);
    EpisodeTrace empty;
    CHECK(empty.final_tasks() == nullptr);
}

TEST_CASE("parser skips blank lines and rejects unknown records") {
    EpisodeTrace t = sample_trace();
    std::string text = "\n" + t.to_jsonl() + "\n  \n";
    EpisodeTrace back = EpisodeTrace::from_jsonl(text);
    CHECK(back.task_id == t.task_id);

    CHECK_THROWS(EpisodeTrace::from_jsonl("{\"rec\":\"bogus\"}\n"));
    CHECK_THROWS(EpisodeTrace::from_jsonl("not json\n"));
    CHECK_THROWS(EpisodeTrace::from_jsonl(
        "{\"rec\":\"transition\",\"index\":0,\"from\":\"Nowhere\",\"event\":\"UserRequest\","
        "\"payload\":\"\",\"to\":\"Observe\",\"attempts_used\":0,\"wall_time\":0}\n"));
}

TEST_CASE("directory sink writes one canonical file per run") {
    EpisodeTrace t = sample_trace();
    CHECK(DirTraceSink::file_name(t) == "notepad_draft_run2.trace.jsonl");

    fs::path dir = fs::temp_directory_path() / "osagent_trace_sink_test" / "nested";
    fs::remove_all(dir.parent_path());
    {
        DirTraceSink sink(dir.string()); // creates missing parents
        sink.write(t);
        EpisodeTrace other = t;
        other.run_index = 3;
        sink.write(other);
    }
    CHECK(read_file((dir / "notepad_draft_run2.trace.jsonl").string()) == t.to_jsonl());
    CHECK(fs::exists(dir / "notepad_draft_run3.trace.jsonl"));

    // Same task and run index overwrites in place.
    EpisodeTrace again = t;
    again.outcome = "fail";
    DirTraceSink sink2(dir.string());
    sink2.write(again);
    CHECK(read_file((dir / "notepad_draft_run2.trace.jsonl").string()) == again.to_jsonl());
    fs::remove_all(dir.parent_path());
}

TEST_CASE("memory sink tolerates concurrent writers") {
    MemoryTraceSink sink;
    std::vector<std::thread> workers;
    for (int w = 0; w < 8; w++) {
        workers.emplace_back([&sink, w] {
            EpisodeTrace t;
            t.task_id = "t" + std::to_string(w);
            for (int i = 0; i < 50; i++) {
                t.run_index = i;
                sink.write(t);
            }
        });
    }
    for (auto& th : workers) th.join();
    CHECK(sink.traces.size() == 400);
}
