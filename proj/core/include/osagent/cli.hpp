#pragma once

namespace osagent {

// Entry point behind the command-line tool. Subcommands: run (suite or
// single request), replay (re-execute a recorded trace), grounding (emit
// semantic text and a marked raster for an accessibility fixture).
// Exit codes: 0 clean, 1 episode-level errors or replay divergence,
// 2 usage or configuration problems.
int run_cli(int argc, const char* const* argv);

} // namespace osagent
