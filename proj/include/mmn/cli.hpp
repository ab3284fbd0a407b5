#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace mmn::cli {

inline constexpr const char* kToolName = "minimax-multinom";
inline constexpr const char* kVersion = "1.0.0";
inline constexpr const char* kThreadsEnv = "MINIMAX_MULTINOM_THREADS";

/// Exit codes.
inline constexpr int kOk = 0;
inline constexpr int kCheckFailed = 1;
inline constexpr int kInvalidArguments = 2;

/// Runs one command. `args` excludes the program name. The artifact goes to
/// `out` (or the --out file); errors go to `err` as one JSON object.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace mmn::cli
