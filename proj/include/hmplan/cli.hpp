#pragma once

namespace hmplan {

// Entry point behind the hmplan binary; exposed so tests can drive the CLI
// in-process. Exit codes: 0 success, 1 planning/verification failure,
// 2 usage or parse errors.
int run_cli(int argc, const char* const* argv);

}  // namespace hmplan
