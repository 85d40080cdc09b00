#ifndef IDLA_CLI_HPP
#define IDLA_CLI_HPP

#include <ostream>
#include <string>
#include <vector>

namespace idla::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitVerificationFailed = 1;
inline constexpr int kExitUsage = 2;

/// Entry point shared by the `idla` executable and in-process tests.
/// args[0] is the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace idla::cli

#endif  // IDLA_CLI_HPP
