#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace liouville::cli {

// Exit codes: 0 success, 1 user/model error, 2 internal numerical failure.
inline constexpr int kExitOk = 0;
inline constexpr int kExitUserError = 1;
inline constexpr int kExitNumericalError = 2;

/// Full command-line front end; `args` excludes the program name.
/// Streams receive what stdout/stderr would.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace liouville::cli
