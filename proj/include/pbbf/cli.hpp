#pragma once

#include <iosfwd>

namespace pbbf {

inline constexpr const char* kToolVersion = "1.0.0";

namespace exit_code {
inline constexpr int ok = 0;
inline constexpr int config_error = 1;
inline constexpr int runtime_error = 2;
}  // namespace exit_code

// Entry point of the pbbf_sim tool. Subcommands: convergence, ber,
// tracking, oracle-check.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace pbbf
