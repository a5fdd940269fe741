#pragma once

#include <stdexcept>
#include <string>

namespace holorecon {

/// Base class for all library errors.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// Two interpolation nodes closer than the distinctness threshold.
class DuplicateNodeError : public Error {
 public:
  using Error::Error;
};

/// Sequences that must be disjoint share a point.
class OverlapError : public Error {
 public:
  using Error::Error;
};

/// Homography pole within delta of a sequence point.
class PoleTooCloseError : public Error {
 public:
  using Error::Error;
};

/// dist(theta-set, kappa-set) precondition failed.
class GapError : public Error {
 public:
  using Error::Error;
};

/// Witness list violates monotonicity preconditions.
class WitnessOrderError : public Error {
 public:
  using Error::Error;
};

/// Permutation image exceeds what the sequence can materialize.
class IndexOverflowError : public Error {
 public:
  using Error::Error;
};

/// Input sequence failed the density heuristic and no override given.
class DensityError : public Error {
 public:
  using Error::Error;
};

/// Entire function with no finite degree and no truncation supplied.
class TruncationUnavailableError : public Error {
 public:
  using Error::Error;
};

/// Decomposition identity residual above budget at maximum precision.
class IdentityViolationError : public Error {
 public:
  using Error::Error;
};

/// Dual-precision results disagree even at maximum precision.
class PrecisionFailureError : public Error {
 public:
  using Error::Error;
};

/// Invalid configuration (CLI / experiment specs).
class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace holorecon
