#pragma once

#include <string>
#include <vector>

namespace osagent {

enum class State {
    Init,
    Observe,
    Plan,
    Execute,
    Verify,
    Success,
    Fail,
    Reset,
    Error,
};
inline constexpr int kStateCount = 9;

enum class EventKind {
    UserRequest,
    ObservationReady,
    PlanMoreActions,
    PlanComplete,
    ExecOk,
    ExecFailed,
    VerifyPass,
    VerifyFail,
    AttemptsExhausted,
    SystemException,
    ResetDone,
    Notified,
};
inline constexpr int kEventCount = 12;

const char* state_name(State s);
const char* event_name(EventKind e);

struct Event {
    EventKind kind;
    std::string payload; // failure message or verifier feedback, else empty

    static Event make(EventKind k, std::string payload = "") { return {k, std::move(payload)}; }
};

// Pure transition function. `attempts_used` is the number of verification
// attempts already failed before this event; the budget decides whether a
// further VerifyFail re-plans or gives up:
//
//   Verify + VerifyFail -> Plan  when attempts_used + 1 < max_attempts
//   Verify + VerifyFail -> Fail  otherwise
//
// so with max_attempts = 4 the fourth VerifyFail lands in Fail. Every
// (state, event) pair outside the 15 legal ones throws
// IllegalTransitionError. AttemptsExhausted never transitions anywhere; it
// exists as a trace annotation only.
State step(State s, const Event& e, int attempts_used, int max_attempts);

bool is_legal(State s, EventKind e);

struct Transition {
    int index = 0;
    State from = State::Init;
    EventKind event = EventKind::UserRequest;
    std::string payload;
    State to = State::Init;
    int attempts_used = 0; // value before the event was applied
    long tick = 0;         // simulated clock, doubles as wall time in traces
};

// Stateful wrapper: owns the current state, the attempt budget and the
// transition log. `force_fail` reroutes a VerifyFail to Fail regardless of
// remaining budget (recovery disabled or step limit reached); the log keeps
// the real attempt count.
class AgentFsm {
public:
    explicit AgentFsm(int max_attempts);

    State state() const { return state_; }
    int attempts_used() const { return attempts_used_; }
    int max_attempts() const { return max_attempts_; }

    State apply(const Event& e, long tick, bool force_fail = false);

    const std::vector<Transition>& log() const { return log_; }

private:
    State state_ = State::Init;
    int attempts_used_ = 0;
    int max_attempts_;
    std::vector<Transition> log_;
};

} // namespace osagent
