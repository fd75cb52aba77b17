#include <algorithm>
#include <cmath>
#include <map>
#include <string>
#include <vector>

#include "doctest.h"
#include "osagent/errors.hpp"
#include "osagent/metrics.hpp"
#include "osagent/util.hpp"

using namespace osagent;

namespace {

EpisodeTrace load_fixture(const std::string& name) {
    return EpisodeTrace::from_jsonl(
        read_file(std::string(OSAGENT_TEST_DATA_DIR) + "/proxy/" + name + ".trace.jsonl"));
}

EpisodeTrace failed_trace(const std::string& outcome,
                          std::vector<MarkerRecord> markers = {}) {
    EpisodeTrace t;
    t.task_id = "f";
    t.outcome = outcome;
    t.markers = std::move(markers);
    return t;
}

} // namespace

TEST_CASE("proxy score matches the hand-counted fixtures") {
    // Numerator: per done task, the executed actions of its last attempt;
    // denominator: everything executed. Counted by hand per fixture.
    struct Row {
        const char* name;
        int path_steps;
        double score;
    };
    const Row rows[] = {
        {"proxy_10", 5, 1.0},
        {"proxy_58", 5, 0.625},
        {"proxy_47", 4, 4.0 / 7.0},
        {"proxy_45", 4, 0.8},
        {"proxy_36", 3, 0.5},
    };
    for (const Row& r : rows) {
        CAPTURE(r.name);
        EpisodeTrace t = load_fixture(r.name);
        CHECK(successful_path_steps(t) == r.path_steps);
        double got = proxy_matching_score(t);
        CHECK(std::abs(got - r.score) <= 1e-9);
        // The runner stored the same attribution it was scored with.
        CHECK(t.steps_on_path == r.path_steps);
    }
}

TEST_CASE("proxy score rejects non-success and empty traces") {
    EpisodeTrace t = load_fixture("proxy_10");
    t.outcome = "fail";
    try {
        proxy_matching_score(t);
        FAIL("expected NotApplicableError");
    } catch (const NotApplicableError& e) {
        CHECK(e.kind() == "not_applicable");
    }

    EpisodeTrace empty;
    empty.outcome = "success";
    empty.steps_total = 0;
    CHECK_THROWS_AS(proxy_matching_score(empty), DegenerateTraceError);
}

TEST_CASE("replans and executed actions read off the trace") {
    EpisodeTrace t = load_fixture("proxy_58");
    CHECK(replan_count(t) == 1);
    CHECK(t.replans == 1);

    std::vector<std::string> acts = executed_actions(t);
    REQUIRE(acts.size() == 8);
    CHECK(acts[0] == "computer.mouse.move(id=4)");
    CHECK(acts[3] == "computer.keyboard.press(key=\"backspace\")");
    CHECK(acts.back() == "computer.keyboard.press(key=\"enter\")");

    // Partial execution truncates to the executed prefix.
    EpisodeTrace part;
    ScriptRecord sc;
    sc.code = {"a1", "a2", "a3"};
    sc.executed = 2;
    part.scripts.push_back(sc);
    CHECK(executed_actions(part) == std::vector<std::string>{"a1", "a2"});

    // A lying record cannot overrun its code list.
    part.scripts[0].executed = 9;
    CHECK(executed_actions(part).size() == 3);
}

TEST_CASE("static trajectory comparison is exact") {
    EpisodeTrace t = load_fixture("proxy_10");
    std::vector<std::string> golden = executed_actions(t);
    CHECK(matches_static_trajectory(t, golden));

    std::vector<std::string> reordered = golden;
    std::swap(reordered[0], reordered[1]);
    CHECK_FALSE(matches_static_trajectory(t, reordered));

    std::vector<std::string> shorter(golden.begin(), golden.end() - 1);
    CHECK_FALSE(matches_static_trajectory(t, shorter));

    std::vector<std::string> extra = golden;
    extra.push_back("computer.mouse.single_click()");
    CHECK_FALSE(matches_static_trajectory(t, extra));
}

TEST_CASE("failures classify by marker precedence") {
    CHECK(classify_failure(failed_trace("fail", {{"ia_terminal", "x"}})).kind ==
          FailureClass::IA);
    CHECK(classify_failure(failed_trace("fail", {{"fc_unverified", "x"}})).kind ==
          FailureClass::FC);
    CHECK(classify_failure(failed_trace("fail")).kind == FailureClass::RSL);
    CHECK(classify_failure(failed_trace("error")).kind == FailureClass::RSL);

    FailureClass rr = classify_failure(failed_trace("fail", {{"rr", "repeat"}}));
    CHECK(rr.kind == FailureClass::RSL);
    CHECK(rr.rr);
    CHECK_FALSE(classify_failure(failed_trace("fail")).rr);

    // Terminal invalid action wins over the other markers.
    FailureClass both = classify_failure(
        failed_trace("fail", {{"rr", ""}, {"fc_unverified", ""}, {"ia_terminal", ""}}));
    CHECK(both.kind == FailureClass::IA);
    CHECK_FALSE(both.rr); // rr only refines RSL

    CHECK_THROWS_AS(classify_failure(failed_trace("success")), NotApplicableError);

    CHECK(std::string(failure_class_name(FailureClass::FC)) == "FC");
    CHECK(std::string(failure_class_name(FailureClass::RSL)) == "RSL");
    CHECK(std::string(failure_class_name(FailureClass::IA)) == "IA");
}

namespace {

std::vector<EpisodeTrace> mixed_suite() {
    std::vector<EpisodeTrace> traces;
    traces.push_back(load_fixture("proxy_10")); // success, proxy 1.0, 0 replans, Office
    traces.push_back(load_fixture("proxy_36")); // success, proxy 0.5, 1 replan, Professional

    EpisodeTrace f1 = failed_trace("fail", {{"rr", "repeat"}, {"splice", "rewrote task 1"}});
    f1.domain = "Office";
    f1.difficulty = "hard";
    f1.steps_total = 4;
    traces.push_back(f1);

    EpisodeTrace f2 = failed_trace("error", {{"ia_terminal", "crash"}});
    f2.domain = "OS";
    f2.difficulty = "easy";
    f2.steps_total = 2;
    traces.push_back(f2);
    return traces;
}

} // namespace

TEST_CASE("aggregation folds traces into suite stats") {
    SuiteStats s = aggregate(mixed_suite(), 2);
    CHECK(s.runs == 2);
    CHECK(s.episodes == 4);
    CHECK(s.successes == 2);
    CHECK(s.fails == 1);
    CHECK(s.errors == 1);
    REQUIRE(s.overall_sr.has_value());
    CHECK(*s.overall_sr == doctest::Approx(0.5));

    CHECK(s.by_domain.at("Office").episodes == 2);
    CHECK(s.by_domain.at("Office").successes == 1);
    CHECK(s.by_domain.at("Office").success_rate() == doctest::Approx(0.5));
    CHECK(s.by_domain.at("Professional").success_rate() == doctest::Approx(1.0));
    CHECK(s.by_domain.at("OS").successes == 0);
    CHECK(s.by_difficulty.at("easy").episodes == 2);
    CHECK(s.by_difficulty.at("medium").episodes == 1);

    CHECK(s.replan_histogram == std::map<int, int>{{0, 1}, {1, 1}});
    REQUIRE(s.mean_proxy.has_value());
    CHECK(*s.mean_proxy == doctest::Approx(0.75)); // (1.0 + 0.5) / 2

    CHECK(s.fc == 0);
    CHECK(s.ia == 1);
    CHECK(s.rsl == 1);
    CHECK(s.rr == 1);
    REQUIRE(s.rr_ratio.has_value());
    CHECK(*s.rr_ratio == doctest::Approx(0.5)); // 1 rr over 2 failed episodes
    CHECK(s.splices == 1);
    CHECK(s.total_steps == 5 + 6 + 4 + 2);
}

TEST_CASE("aggregation of nothing leaves the optionals empty") {
    SuiteStats s = aggregate({}, 0);
    CHECK(s.episodes == 0);
    CHECK_FALSE(s.overall_sr.has_value());
    CHECK_FALSE(s.mean_proxy.has_value());
    CHECK_FALSE(s.rr_ratio.has_value());

    json j = stats_to_json(s);
    CHECK(j.at("overall_sr").is_null());
    CHECK(j.at("mean_proxy").is_null());
    CHECK(j.at("rr_ratio").is_null());

    std::string text = stats_to_text(s);
    CHECK(text.find("overall SR: n/a") != std::string::npos);
    CHECK(text.find("(none)") != std::string::npos);
}

TEST_CASE("stats serialize to json and text consistently") {
    SuiteStats s = aggregate(mixed_suite(), 2);
    json j = stats_to_json(s);
    CHECK(j.at("episodes") == 4);
    CHECK(j.at("overall_sr").get<double>() == doctest::Approx(0.5));
    CHECK(j.at("by_domain").at("Office").at("sr").get<double>() == doctest::Approx(0.5));
    CHECK(j.at("replan_histogram").at("0") == 1);
    CHECK(j.at("replan_histogram").at("1") == 1);
    CHECK(j.at("failure_classes").at("ia") == 1);
    CHECK(j.at("failure_classes").at("rr") == 1);
    CHECK(j.at("rr_ratio").get<double>() == doctest::Approx(0.5));
    CHECK(j.at("splices") == 1);

    std::string text = stats_to_text(s);
    CHECK(text.find("episodes 4  runs 2  success 2  fail 1  error 1") != std::string::npos);
    CHECK(text.find("overall SR: 0.500") != std::string::npos);
    CHECK(text.find("Office: SR 0.500 (1/2)") != std::string::npos);
    CHECK(text.find("replan histogram (successes): 0:1 1:1") != std::string::npos);
    CHECK(text.find("mean proxy score: 0.750") != std::string::npos);
    CHECK(text.find("failure classes: FC 0  IA 1  RSL 1  (RR 1, ratio 0.500)") !=
          std::string::npos);
}

TEST_CASE("aggregation is permutation invariant") {
    std::vector<EpisodeTrace> traces = mixed_suite();
    SuiteStats a = aggregate(traces, 2);
    std::reverse(traces.begin(), traces.end());
    SuiteStats b = aggregate(traces, 2);
    CHECK(stats_to_json(a).dump() == stats_to_json(b).dump());
    CHECK(stats_to_text(a) == stats_to_text(b));
}
