#pragma once

#include <string>

#include "osagent/backend.hpp"
#include "osagent/grounding.hpp"
#include "osagent/planner.hpp"
#include "osagent/resources.hpp"

namespace osagent {

// Builds the per-turn user text. Compression levels shrink long episodes:
//   0  full action history
//   1  history compressed to "(task k) verb -> result"
//   2  compressed history truncated to the last 10 entries
std::string build_user_text(const std::string& objective, const ContextMemory& mem,
                            const Observation& obs, int level);

// Assembles the full request, escalating compression until the user text
// fits the budget. Throws PromptTooLargeError when even level 2 does not.
ModelRequest assemble_prompt(const std::string& system_text, const std::string& objective,
                             const ContextMemory& mem, const Observation& obs,
                             size_t max_user_chars);

} // namespace osagent
