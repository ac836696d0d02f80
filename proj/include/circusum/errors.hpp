#pragma once

#include <stdexcept>
#include <string>

namespace circusum {

/// Bad arguments, malformed input files, violated preconditions.
class invalid_input : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A computation that could not produce a usable number: non-bracketing
/// roots, degenerate samples, exhausted horizons.
class numeric_failure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Warmup data whose variance estimate is (numerically) zero.
class ill_conditioned_warmup : public numeric_failure {
 public:
  using numeric_failure::numeric_failure;
};

}  // namespace circusum
