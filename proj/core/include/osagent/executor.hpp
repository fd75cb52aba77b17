#pragma once

#include <string>
#include <vector>

#include "osagent/actions.hpp"
#include "osagent/env.hpp"
#include "osagent/grounding.hpp"

namespace osagent {

struct ExecOutcome {
    bool ok = true;
    bool crashed = false; // environment died mid-script (system exception)
    int executed = 0;     // actions that completed before any failure
    std::string error;    // first failure, empty when ok
};

// Runs a validated script against the environment, resolving mark ids via
// the observation the script was planned against. Stops at the first
// failing action. An environment crash sets `crashed` (the loop maps it to
// a system exception); ordinary action refusals only clear `ok`.
ExecOutcome execute_script(const std::vector<Action>& script, Environment& env,
                           const Observation& obs);

} // namespace osagent
