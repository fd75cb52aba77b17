#pragma once

#include <map>
#include <string>
#include <vector>

#include "osagent/image.hpp"

namespace osagent {

struct ModelRequest {
    std::string system_text;
    std::string user_text;
    std::vector<const Image*> images; // raw frame first, then the marked frame
};

// A planning model. generate() returns the raw response text; transport or
// availability problems throw BackendUnavailableError.
class ModelBackend {
public:
    virtual ~ModelBackend() = default;
    virtual std::string name() const = 0;
    virtual std::string generate(const ModelRequest& req) = 0;
};

// Faults a scenario can inject into an episode.
struct FaultPlan {
    int verify_flaky_fails = 0; // first N verifications fail spuriously
    long crash_on_action = 0;   // nth environment input crashes, 0 = never
    int backend_drop_turn = 0;  // generate() fails on this turn, 0 = never
};

// Scripted model: replays canned responses from a scenario file.
//
//   mockplan/1
//   !inject verify_flaky_fail 1
//   == turn 1            (matches exactly turn 1)
//   == when "Feedback"   (matches when the user text contains the string)
//   == any               (matches always, consumed once)
//   == loop              (matches always, never consumed)
//
// Entries are tried in file order; the first unconsumed match wins and is
// consumed (except loop entries). Response bodies run until the next `== `
// line. `{{id:Label}}` placeholders resolve against the prompt's semantic
// lines to the first mark id carrying that label, so scripts survive mark
// renumbering. No match throws BackendUnavailableError.
class ScriptedMockBackend : public ModelBackend {
public:
    static ScriptedMockBackend from_file(const std::string& path);
    static ScriptedMockBackend from_text(const std::string& text, const std::string& origin);

    std::string name() const override { return "scripted"; }
    std::string generate(const ModelRequest& req) override;

    const FaultPlan& faults() const { return faults_; }
    int turn() const { return turn_; }

private:
    struct Entry {
        enum Kind { Turn, When, Any, Loop } kind = Any;
        int turn = 0;
        std::string needle;
        std::string body;
        bool consumed = false;
    };

    std::vector<Entry> entries_;
    FaultPlan faults_;
    int turn_ = 0;
    std::string origin_;
};

// Parses the `(ID: k, Label: l, ...)` lines out of a prompt and maps each
// label to its first mark id. The scripted backend and tests share this.
std::map<std::string, int> parse_semantic_labels(const std::string& user_text);

// Applies {{id:Label}} substitutions; unknown labels throw
// BackendUnavailableError naming the label.
std::string substitute_mark_ids(const std::string& body, const std::string& user_text,
                                const std::string& origin);

struct HttpBackendConfig {
    std::string endpoint = "http://127.0.0.1:8080/v1/plan";
    std::string model = "gui-planner";
    std::string auth_env;        // env var holding the bearer token, never logged
    double temperature = 0.1;
    int timeout_ms = 10000;
    int max_tries = 3;
    int backoff_base_ms = 250;   // doubles per retry, capped at 2s
    bool sleep_between_tries = true; // tests disable to stay fast
};

// JSON-over-HTTP backend. Request: {model, temperature, messages:[system,
// user]} where image parts carry base64 PPM bytes. Response: {"text": "..."}.
class HttpModelBackend : public ModelBackend {
public:
    explicit HttpModelBackend(HttpBackendConfig cfg);
    std::string name() const override { return "http"; }
    std::string generate(const ModelRequest& req) override;

    static std::string build_request_body(const ModelRequest& req, const HttpBackendConfig& cfg);

private:
    HttpBackendConfig cfg_;
    std::string host_;
    int port_ = 80;
    std::string path_;
};

} // namespace osagent
