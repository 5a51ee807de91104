#pragma once

#include <cstdint>
#include <memory>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace bridge::corpus {

/// A test value in the restricted literal grammar shared by the Lean and Python harnesses:
///   literal := integer | "true" | "false" | string | "[" [literal {"," literal}] "]"
/// Strings use JSON escapes.
struct Literal {
  using List = std::vector<Literal>;
  std::variant<std::int64_t, bool, std::string, List> value;

  bool is_int() const { return std::holds_alternative<std::int64_t>(value); }
  bool is_bool() const { return std::holds_alternative<bool>(value); }
  bool is_string() const { return std::holds_alternative<std::string>(value); }
  bool is_list() const { return std::holds_alternative<List>(value); }

  friend bool operator==(const Literal&, const Literal&) = default;
};

class LiteralError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Throws LiteralError on anything outside the grammar.
Literal parse_literal(std::string_view text);

/// Canonical literal text (no insignificant whitespace).
std::string to_text(const Literal& lit);

/// Python source expression for the literal.
std::string to_python(const Literal& lit);

/// Semantic (Lean-flavoured) parameter type: Int, Nat, Bool, String, List T, Array T.
struct SemanticType {
  enum class Kind { Int, Nat, Bool, String, List, Array };
  Kind kind = Kind::Int;
  std::shared_ptr<const SemanticType> elem;  // List/Array only
};

/// Throws LiteralError for unsupported type text such as "Option Int".
SemanticType parse_type(std::string_view text);
std::string to_lean(const SemanticType& type);
std::string to_python_hint(const SemanticType& type);

bool conforms(const Literal& lit, const SemanticType& type);

/// Lean term for the literal at the given type; arrays use #[...], negatives are parenthesised.
std::string to_lean(const Literal& lit, const SemanticType& type);

}  // namespace bridge::corpus
