#pragma once

#include <iosfwd>

namespace squidqed::app {

inline constexpr int exit_ok = 0;
inline constexpr int exit_config_error = 2;
inline constexpr int exit_numerical_failure = 3;

/// Entry point of the command-line tool; diagnostics go to `err`.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace squidqed::app
