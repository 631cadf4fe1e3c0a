#pragma once

namespace rentropy {

// Full command-line entry point (subcommands gram/entropy/mi/tc/select/bench).
// Returns 0 on success, 2 on usage errors, 1 on numeric failures. Linked as a
// library function so tests can drive it in-process.
int cli_main(int argc, const char* const* argv);

}  // namespace rentropy
