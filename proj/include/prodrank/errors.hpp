#pragma once

#include <stdexcept>
#include <string>

namespace prodrank {

enum class ErrorKind {
  Io,             // unreadable/unwritable files
  Parse,          // malformed input rows
  Integrity,      // corpus invariant violations
  Lookup,         // unknown taxonomy/indicator codes
  Domain,         // precondition failures on otherwise valid data
  Baseline,       // citation baseline cannot be built or does not cover a year
  Aggregation,    // discipline-level aggregation failures
  Comparison,     // mismatched ranking inputs
  Params,         // bad configuration or generator parameters
  EmptyAnalysis,  // exclusions left nothing to analyze
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(message), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& message) {
  throw Error(kind, message);
}

}  // namespace prodrank
