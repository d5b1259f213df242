#pragma once

// Command-line front end: `ppw <subcommand> [flags]`.
//
// Exit codes: 0 when every asserted check passes, 2 when a result was
// computed but a check failed, 1 on usage or runtime errors.

#include <iosfwd>
#include <string>
#include <vector>

namespace ppw {

inline constexpr const char* version = "0.1.0";

inline constexpr int exit_ok = 0;
inline constexpr int exit_error = 1;
inline constexpr int exit_check_failed = 2;

/// Runs one command; `args` starts at the subcommand. Results go to `out` (or the file named by --out),
/// diagnostics and CSV manifests to `err`.
int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// argv-style entry point for main().
int dispatch(int argc, const char* const* argv);

/// Value with 17 significant digits, '.' decimal separator, no locale.
std::string format_number(double v);

} // namespace ppw
