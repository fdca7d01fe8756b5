#pragma once

#include <stdexcept>
#include <string>

namespace framesched {

/// Links are numbered 1..link_count everywhere in the public API; configs and
/// CSV output use the same numbering.
using LinkId = int;

/// A caller handed us something malformed (bad index, inconsistent sizes,
/// probabilities that do not sum to one, ...).
class InputError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A configured resource bound was exceeded (activation enumeration limit,
/// search node limit, DP state limit, static support limit).
class CapacityError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A component tried to read channel information it is not entitled to see
/// yet. Schedulers must never trigger this.
class VisibilityError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// Experiment configuration file could not be parsed or validated.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace framesched
