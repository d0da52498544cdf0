#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace eivtls::cli {

// Runs the command-line front end on the given arguments (program name
// excluded) and returns the process exit code. Streams are injectable so
// tests can drive the CLI in-process.
//
// Exit codes: 0 success, 1 verification violation / oracle disagreement,
// 2 input error, 3 estimation failure.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace eivtls::cli
