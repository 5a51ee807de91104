#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace bridge {

/// Broad failure categories. The CLI maps each onto a documented exit code.
enum class ErrorKind {
  Usage,           // bad command line or precondition violated by the caller
  Config,          // unreadable or invalid run configuration
  Corpus,          // manifest unreadable or problems invalid
  BackendMissing,  // credentials, toolchain, or mock script absent
  ReplayMiss,      // replay archive has no record for a request
  Provider,        // provider kept failing after bounded retries
  Io,              // filesystem failure
};

std::string_view to_string(ErrorKind kind);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(message), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace bridge
