// Small shared utilities: deterministic hashing, float formatting, errors.
#ifndef NVLAB_UTIL_HPP
#define NVLAB_UTIL_HPP

#include <cstdint>
#include <stdexcept>
#include <string>

namespace nvlab {

// Raised for malformed textual input (scene files, CLI arguments). Messages
// carry the line number when one is known.
class parse_error : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

// Raised when well-formed input violates a domain invariant.
class validation_error : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

// splitmix64: cheap, well-mixed 64-bit hash used to derive per-trial seeds.
std::uint64_t splitmix64(std::uint64_t x);

// Stable seed for (base seed, delta, trial) triples; order-independent of the
// sweep schedule so parallel trials reproduce exactly.
std::uint64_t trial_seed(std::uint64_t seed, double delta, int trial);

// Round-trip formatting with 17 significant digits, trailing zeros trimmed.
std::string format_double(double v);

}  // namespace nvlab

#endif
