// Command-line front end. run() never writes to stdout/stderr itself; the
// caller prints `text` (or the JSON block when --json was given).
#pragma once

#include <string>
#include <vector>

namespace qistk::cli {

enum Exit { Ok = 0, False = 1, Usage = 2, Unknown = 3 };

struct CommandResult {
    int code = Ok;
    std::string text;   // human-readable report, newline-terminated
    std::string json;   // machine-readable block, empty unless --json
    std::string error;  // diagnostics for stderr
};

CommandResult run(const std::vector<std::string>& args);  // args exclude the program name

}  // namespace qistk::cli
