#pragma once

#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace bridge::lean {

enum class Severity { Error, Warning };

struct Diagnostic {
  std::string file;
  int line = 1;
  int column = 0;
  Severity severity = Severity::Error;
  std::string message;  // continuation lines joined with '\n'
  friend bool operator==(const Diagnostic&, const Diagnostic&) = default;
};

std::string_view to_string(Severity s);

/// Parses compiler output in the `file:line:col: severity: message` format.
/// Indented or unprefixed lines continue the previous message; info messages are dropped.
std::vector<Diagnostic> parse_diagnostics(std::string_view output);

/// "file:line:col: severity: message", the compiler's own layout.
std::string format(const Diagnostic& d);

enum class ErrorClass { Syntax, Type, Termination, UnknownIdentifier, SorryPresent, Timeout, Other };

std::string_view to_string(ErrorClass c);
ErrorClass parse_error_class(std::string_view s);  // throws Error(Usage)

/// Class of one message under the ordered pattern rules; Other when nothing matches.
ErrorClass classify_message(std::string_view message);

/// Ordered textual rules over error diagnostics and the sorry warning, plus SorryPresent
/// when the comment-stripped source contains a standalone `sorry`. Pure.
/// Returns {Other} for an error diagnostic no rule recognises; non-sorry warnings are ignored.
std::set<ErrorClass> classify(const std::vector<Diagnostic>& diagnostics, std::string_view source);

/// Source with comments and string literals blanked (newlines kept).
std::string strip_comments(std::string_view source);

/// Occurrences of `sorry` as a standalone token outside comments and strings.
int sorry_count(std::string_view source);

}  // namespace bridge::lean
