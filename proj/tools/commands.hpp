#pragma once

namespace covert_mimo::cli {

// Parses argv and dispatches to a subcommand. Returns the process exit code:
// 0 on success, 1 for configuration problems, 2 for numerical failures.
int run(int argc, const char* const* argv);

}  // namespace covert_mimo::cli
