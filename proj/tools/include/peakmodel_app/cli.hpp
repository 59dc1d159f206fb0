#pragma once

// Command dispatch for the `peakmodel` executable.  Exit codes: 0 success,
// 1 verification failure, 2 schema/usage violation, 3 mathematical invalidity.
// Errors are written to `err` as one line of JSON:
//   {"error": {"kind": "schema|usage|math", "code": ..., "message": ..., "path": ...}}

#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "peakmodel_app/config.hpp"

namespace peakmodel::app {

enum ExitCode { exit_ok = 0, exit_verify_failed = 1, exit_schema = 2, exit_math = 3 };

// `args` excludes the program name.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

// Structural check of a command's JSON output (including re-parsing its config
// echo).  Returns a description of the first violation, or nullopt.
std::optional<std::string> output_schema_error(const json& j);

}  // namespace peakmodel::app
