#include "osagent/fsm.hpp"

#include "osagent/errors.hpp"

namespace osagent {

const char* state_name(State s) {
    switch (s) {
        case State::Init: return "Init";
        case State::Observe: return "Observe";
        case State::Plan: return "Plan";
        case State::Execute: return "Execute";
        case State::Verify: return "Verify";
        case State::Success: return "Success";
        case State::Fail: return "Fail";
        case State::Reset: return "Reset";
        case State::Error: return "Error";
    }
    return "?";
}

const char* event_name(EventKind e) {
    switch (e) {
        case EventKind::UserRequest: return "UserRequest";
        case EventKind::ObservationReady: return "ObservationReady";
        case EventKind::PlanMoreActions: return "PlanMoreActions";
        case EventKind::PlanComplete: return "PlanComplete";
        case EventKind::ExecOk: return "ExecOk";
        case EventKind::ExecFailed: return "ExecFailed";
        case EventKind::VerifyPass: return "VerifyPass";
        case EventKind::VerifyFail: return "VerifyFail";
        case EventKind::AttemptsExhausted: return "AttemptsExhausted";
        case EventKind::SystemException: return "SystemException";
        case EventKind::ResetDone: return "ResetDone";
        case EventKind::Notified: return "Notified";
    }
    return "?";
}

bool is_legal(State s, EventKind e) {
    switch (s) {
        case State::Init: return e == EventKind::UserRequest;
        case State::Observe: return e == EventKind::ObservationReady;
        case State::Plan:
            return e == EventKind::PlanMoreActions || e == EventKind::PlanComplete ||
                   e == EventKind::SystemException;
        case State::Execute:
            return e == EventKind::ExecOk || e == EventKind::ExecFailed ||
                   e == EventKind::SystemException;
        case State::Verify:
            return e == EventKind::VerifyPass || e == EventKind::VerifyFail ||
                   e == EventKind::SystemException;
        case State::Success: return e == EventKind::Notified;
        case State::Fail: return e == EventKind::Notified;
        case State::Error: return e == EventKind::Notified;
        case State::Reset: return e == EventKind::ResetDone;
    }
    return false;
}

State step(State s, const Event& e, int attempts_used, int max_attempts) {
    if (!is_legal(s, e.kind))
        throw IllegalTransitionError(std::string("illegal transition: ") + state_name(s) +
                                     " + " + event_name(e.kind));
    switch (e.kind) {
        case EventKind::UserRequest: return State::Observe;
        case EventKind::ObservationReady: return State::Plan;
        case EventKind::PlanMoreActions: return State::Execute;
        case EventKind::PlanComplete: return State::Verify;
        case EventKind::ExecOk: return State::Observe;
        case EventKind::ExecFailed: return State::Plan;
        case EventKind::VerifyPass: return State::Success;
        case EventKind::VerifyFail:
            return attempts_used + 1 < max_attempts ? State::Plan : State::Fail;
        case EventKind::SystemException: return State::Error;
        case EventKind::Notified: return s == State::Success ? State::Init : State::Reset;
        case EventKind::ResetDone: return State::Init;
        case EventKind::AttemptsExhausted: break; // annotation only, never legal
    }
    throw IllegalTransitionError("unreachable");
}

AgentFsm::AgentFsm(int max_attempts) : max_attempts_(max_attempts) {}

State AgentFsm::apply(const Event& e, long tick, bool force_fail) {
    int effective = attempts_used_;
    if (force_fail && e.kind == EventKind::VerifyFail) effective = max_attempts_ - 1;

    State next = step(state_, e, effective, max_attempts_);

    Transition t;
    t.index = static_cast<int>(log_.size());
    t.from = state_;
    t.event = e.kind;
    t.payload = e.payload;
    t.to = next;
    t.attempts_used = attempts_used_;
    t.tick = tick;
    log_.push_back(std::move(t));

    if (e.kind == EventKind::VerifyFail) attempts_used_++;
    state_ = next;
    return next;
}

} // namespace osagent
