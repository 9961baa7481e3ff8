#pragma once

#include <stdexcept>
#include <string>

namespace mailnet {

/// Unusable input: malformed files, bad config values, schema violations.
/// The CLI maps it to exit code 2.
class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A statistic is undefined for the data it was given (constant vector,
/// empty cohort, zero variance). The CLI maps it to exit code 3.
class DegenerateStatistics : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Lookup of an actor that is not a node of the snapshot.
class UnknownActor : public std::out_of_range {
 public:
  explicit UnknownActor(const std::string& actor)
      : std::out_of_range("unknown actor: " + actor) {}
};

}  // namespace mailnet
