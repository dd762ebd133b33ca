#ifndef EMFRAC_CLI_HPP
#define EMFRAC_CLI_HPP

namespace emfrac {

inline constexpr const char* kVersion = "0.1.0";

/// Entry point shared by the binary and the tests. Exit codes: 0 success,
/// 1 usage or validation error, 2 solver failure.
int run_cli(int argc, const char* const* argv);

}  // namespace emfrac

#endif
