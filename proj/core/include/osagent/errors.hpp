#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace osagent {

// Base class for recoverable agent-side failures. `kind` is a stable,
// machine-readable tag that flows into traces and feedback text; `what()`
// carries the human-readable detail.
class AgentError : public std::runtime_error {
public:
    AgentError(std::string kind, const std::string& message)
        : std::runtime_error(message), kind_(std::move(kind)) {}

    const std::string& kind() const { return kind_; }

private:
    std::string kind_;
};

// Accessibility snapshot text that does not conform to the tree grammar.
class A11yParseError : public AgentError {
public:
    A11yParseError(int line, const std::string& message)
        : AgentError("a11y_parse", "line " + std::to_string(line) + ": " + message),
          line_(line) {}

    int line() const { return line_; }

private:
    int line_;
};

// Duplicate node identity inside one accessibility snapshot; a tree must not
// reference the same node twice.
class CycleError : public AgentError {
public:
    explicit CycleError(const std::string& message) : AgentError("a11y_cycle", message) {}
};

// Screen or element geometry that cannot be normalized (zero or negative extent).
class DegenerateScreenError : public AgentError {
public:
    explicit DegenerateScreenError(const std::string& message)
        : AgentError("degenerate_screen", message) {}
};

// Model output that does not follow the response protocol.
class MalformedResponseError : public AgentError {
public:
    explicit MalformedResponseError(const std::string& message)
        : AgentError("malformed_response", message) {}
};

// Action script rejected before execution. `kind` is one of: syntax,
// unknown_action, bad_argument, invalid_target, out_of_range, unknown_key.
class ScriptError : public AgentError {
public:
    ScriptError(std::string kind, const std::string& message)
        : AgentError(std::move(kind), message) {}
};

// Environment refused or failed an action at execution time.
class ActionFailedError : public AgentError {
public:
    explicit ActionFailedError(const std::string& message)
        : AgentError("action_failed", message) {}
};

// Simulated hard crash of the environment (fault injection).
class EnvCrashError : public AgentError {
public:
    explicit EnvCrashError(const std::string& message) : AgentError("env_crash", message) {}
};

// Model backend unreachable after retries, or scenario script exhausted.
class BackendUnavailableError : public AgentError {
public:
    explicit BackendUnavailableError(const std::string& message)
        : AgentError("backend_unavailable", message) {}
};

// Prompt exceeds the configured budget even after compression.
class PromptTooLargeError : public AgentError {
public:
    explicit PromptTooLargeError(const std::string& message)
        : AgentError("prompt_too_large", message) {}
};

// Neither observation provider produced a usable snapshot.
class ObservationFailedError : public AgentError {
public:
    explicit ObservationFailedError(const std::string& message)
        : AgentError("observation_failed", message) {}
};

// Environment could not be restored to its initial state.
class ResetFailedError : public AgentError {
public:
    explicit ResetFailedError(const std::string& message)
        : AgentError("reset_failed", message) {}
};

// Task, scenario, or config file violating its schema. Programmer/config error.
class SchemaError : public AgentError {
public:
    explicit SchemaError(const std::string& message) : AgentError("schema", message) {}
};

// Metric asked of a trace it is not defined for (e.g. a matching score of a
// failed episode).
class NotApplicableError : public AgentError {
public:
    explicit NotApplicableError(const std::string& message)
        : AgentError("not_applicable", message) {}
};

// Trace too empty to score: no executed steps at all.
class DegenerateTraceError : public AgentError {
public:
    explicit DegenerateTraceError(const std::string& message)
        : AgentError("degenerate_trace", message) {}
};

// A (state, event) pair outside the legal transition table. Logic error:
// the control loop must never emit one of these.
class IllegalTransitionError : public std::logic_error {
public:
    explicit IllegalTransitionError(const std::string& message)
        : std::logic_error(message) {}
};

} // namespace osagent
