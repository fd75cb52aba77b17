#pragma once

#include <string>
#include <vector>

namespace osagent {

// Packaged planner prompt: base instructions, decomposition templates per
// task family, and worked examples.
struct PromptPack {
    std::string system_text;         // base + templates, ready to send
    std::vector<std::string> demos;  // worked examples, in packaged order

    // System text with the first `demo_count` examples appended.
    std::string full_system(int demo_count) const;
};

// Resolution order: OSAGENT_DATA_DIR env var, the source tree's data
// directory baked in at build time, then ./core/data. Throws when none exists.
std::string default_data_dir();

PromptPack load_prompt_pack(const std::string& data_dir);

} // namespace osagent
