#include "osagent/metrics.hpp"

#include <algorithm>
#include <cstdio>
#include <set>

#include "osagent/errors.hpp"
#include "osagent/util.hpp"

namespace osagent {

const char* failure_class_name(FailureClass::Kind k) {
    switch (k) {
        case FailureClass::FC: return "FC";
        case FailureClass::RSL: return "RSL";
        case FailureClass::IA: return "IA";
    }
    return "?";
}

int replan_count(const EpisodeTrace& trace) {
    int n = 0;
    for (const Transition& t : trace.transitions)
        if (t.event == EventKind::VerifyFail) n++;
    return n;
}

std::vector<std::string> executed_actions(const EpisodeTrace& trace) {
    std::vector<std::string> out;
    for (const ScriptRecord& r : trace.scripts)
        for (int i = 0; i < r.executed && i < static_cast<int>(r.code.size()); i++)
            out.push_back(r.code[static_cast<size_t>(i)]);
    return out;
}

int successful_path_steps(const EpisodeTrace& trace) {
    const TaskListRecord* fin = trace.final_tasks();
    if (!fin) return 0;

    std::set<int> done;
    for (size_t i = 0; i < fin->tasks.size(); i++)
        if (fin->tasks[i].status == "done") done.insert(static_cast<int>(i) + 1);

    std::map<int, int> last_attempt; // task index -> latest attempt touching it
    for (const ScriptRecord& r : trace.scripts)
        if (done.count(r.task_index))
            last_attempt[r.task_index] = std::max(last_attempt[r.task_index], r.attempt);

    int steps = 0;
    for (const ScriptRecord& r : trace.scripts)
        if (done.count(r.task_index) && r.attempt == last_attempt[r.task_index])
            steps += r.executed;
    return steps;
}

double proxy_matching_score(const EpisodeTrace& trace) {
    if (trace.outcome != "success")
        throw NotApplicableError("matching score is defined for successful episodes only, got " +
                                 trace.outcome);
    if (trace.steps_total == 0)
        throw DegenerateTraceError("episode executed no actions");
    return static_cast<double>(successful_path_steps(trace)) / trace.steps_total;
}

FailureClass classify_failure(const EpisodeTrace& trace) {
    if (trace.outcome == "success")
        throw NotApplicableError("cannot classify a successful episode");

    bool has_ia = false, has_fc = false, has_rr = false;
    for (const MarkerRecord& m : trace.markers) {
        if (m.kind == "ia_terminal") has_ia = true;
        if (m.kind == "fc_unverified") has_fc = true;
        if (m.kind == "rr") has_rr = true;
    }
    FailureClass fc;
    if (has_ia) {
        fc.kind = FailureClass::IA;
    } else if (has_fc) {
        fc.kind = FailureClass::FC;
    } else {
        fc.kind = FailureClass::RSL;
        fc.rr = has_rr;
    }
    return fc;
}

bool matches_static_trajectory(const EpisodeTrace& trace,
                               const std::vector<std::string>& golden) {
    return executed_actions(trace) == golden;
}

SuiteStats aggregate(const std::vector<EpisodeTrace>& traces, int runs) {
    SuiteStats s;
    s.runs = runs;
    double proxy_sum = 0;
    int proxy_n = 0;

    for (const EpisodeTrace& tr : traces) {
        s.episodes++;
        s.total_steps += tr.steps_total;
        GroupStats& dom = s.by_domain[tr.domain.empty() ? "(none)" : tr.domain];
        GroupStats& dif = s.by_difficulty[tr.difficulty.empty() ? "(none)" : tr.difficulty];
        dom.episodes++;
        dif.episodes++;
        for (const MarkerRecord& m : tr.markers)
            if (m.kind == "splice") s.splices++;

        if (tr.outcome == "success") {
            s.successes++;
            dom.successes++;
            dif.successes++;
            s.replan_histogram[replan_count(tr)]++;
            if (tr.steps_total > 0) {
                proxy_sum += proxy_matching_score(tr);
                proxy_n++;
            }
        } else {
            if (tr.outcome == "error") s.errors++;
            else s.fails++;
            FailureClass fc = classify_failure(tr);
            if (fc.kind == FailureClass::FC) s.fc++;
            if (fc.kind == FailureClass::IA) s.ia++;
            if (fc.kind == FailureClass::RSL) s.rsl++;
            if (fc.rr) s.rr++;
        }
    }

    if (s.episodes > 0) s.overall_sr = static_cast<double>(s.successes) / s.episodes;
    if (proxy_n > 0) s.mean_proxy = proxy_sum / proxy_n;
    int failed = s.fails + s.errors;
    if (failed > 0) s.rr_ratio = static_cast<double>(s.rr) / failed;
    return s;
}

json stats_to_json(const SuiteStats& s) {
    json groups_dom = json::object();
    for (const auto& [name, g] : s.by_domain)
        groups_dom[name] = {{"episodes", g.episodes},
                            {"successes", g.successes},
                            {"sr", g.success_rate()}};
    json groups_dif = json::object();
    for (const auto& [name, g] : s.by_difficulty)
        groups_dif[name] = {{"episodes", g.episodes},
                            {"successes", g.successes},
                            {"sr", g.success_rate()}};
    json hist = json::object();
    for (const auto& [replans, count] : s.replan_histogram)
        hist[std::to_string(replans)] = count;

    json j = {{"runs", s.runs},
              {"episodes", s.episodes},
              {"successes", s.successes},
              {"fails", s.fails},
              {"errors", s.errors},
              {"overall_sr", s.overall_sr ? json(*s.overall_sr) : json()},
              {"by_domain", groups_dom},
              {"by_difficulty", groups_dif},
              {"replan_histogram", hist},
              {"mean_proxy", s.mean_proxy ? json(*s.mean_proxy) : json()},
              {"failure_classes",
               {{"fc", s.fc}, {"rsl", s.rsl}, {"ia", s.ia}, {"rr", s.rr}}},
              {"rr_ratio", s.rr_ratio ? json(*s.rr_ratio) : json()},
              {"splices", s.splices},
              {"total_steps", s.total_steps}};
    return j;
}

static std::string fmt3(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.3f", v);
    return buf;
}

std::string stats_to_text(const SuiteStats& s) {
    std::string out;
    out += "episodes " + std::to_string(s.episodes) + "  runs " + std::to_string(s.runs) +
           "  success " + std::to_string(s.successes) + "  fail " + std::to_string(s.fails) +
           "  error " + std::to_string(s.errors) + "\n";
    out += "overall SR: " + (s.overall_sr ? fmt3(*s.overall_sr) : std::string("n/a")) + "\n";
    out += "by domain:\n";
    for (const auto& [name, g] : s.by_domain)
        out += "  " + name + ": SR " + fmt3(g.success_rate()) + " (" +
               std::to_string(g.successes) + "/" + std::to_string(g.episodes) + ")\n";
    out += "by difficulty:\n";
    for (const auto& [name, g] : s.by_difficulty)
        out += "  " + name + ": SR " + fmt3(g.success_rate()) + " (" +
               std::to_string(g.successes) + "/" + std::to_string(g.episodes) + ")\n";
    out += "replan histogram (successes):";
    if (s.replan_histogram.empty()) out += " (none)";
    for (const auto& [replans, count] : s.replan_histogram)
        out += " " + std::to_string(replans) + ":" + std::to_string(count);
    out += "\n";
    out += "mean proxy score: " + (s.mean_proxy ? fmt3(*s.mean_proxy) : std::string("n/a")) +
           "\n";
    out += "failure classes: FC " + std::to_string(s.fc) + "  IA " + std::to_string(s.ia) +
           "  RSL " + std::to_string(s.rsl) + "  (RR " + std::to_string(s.rr) + ", ratio " +
           (s.rr_ratio ? fmt3(*s.rr_ratio) : std::string("n/a")) + ")\n";
    out += "splices " + std::to_string(s.splices) + "  total steps " +
           std::to_string(s.total_steps) + "\n";
    return out;
}

} // namespace osagent
