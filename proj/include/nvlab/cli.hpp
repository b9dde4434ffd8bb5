// Command-line front end. Exit codes: 0 success, 2 malformed input,
// 3 verification failure (general position violated, topology FAIL,
// coverage failure).
#ifndef NVLAB_CLI_HPP
#define NVLAB_CLI_HPP

#include <iosfwd>
#include <string>
#include <vector>

namespace nvlab {

inline constexpr int kExitOk = 0;
inline constexpr int kExitInputError = 2;
inline constexpr int kExitVerificationFailure = 3;

// argv without the program name. Streams default to std::cout / std::cerr.
int run_cli(const std::vector<std::string>& argv);
int run_cli(const std::vector<std::string>& argv, std::ostream& out, std::ostream& err);

}  // namespace nvlab

#endif
