#include "bridge/lean/diagnostics.hpp"
#include "bridge/util/error.hpp"
#include "bridge/util/text.hpp"

#include <array>
#include <cctype>
#include <utility>

namespace bridge::lean {

namespace {

struct Rule {
  std::string_view pattern;
  ErrorClass cls;
};

// First match wins.
constexpr std::array kRules = {
    Rule{"unexpected token", ErrorClass::Syntax},
    Rule{"unexpected identifier", ErrorClass::Syntax},
    Rule{"unknown constant parse", ErrorClass::Syntax},
    Rule{"unexpected end of input", ErrorClass::Syntax},
    Rule{"type mismatch", ErrorClass::Type},
    Rule{"expected type", ErrorClass::Type},
    Rule{"failed to synthesize", ErrorClass::Type},
    Rule{"fail to show termination", ErrorClass::Termination},
    Rule{"structural recursion cannot", ErrorClass::Termination},
    Rule{"failed to prove termination", ErrorClass::Termination},
    Rule{"unknown identifier", ErrorClass::UnknownIdentifier},
    Rule{"unknown constant", ErrorClass::UnknownIdentifier},
    Rule{"declaration uses 'sorry'", ErrorClass::SorryPresent},
};

constexpr std::array<std::pair<ErrorClass, std::string_view>, 7> kNames = {{
    {ErrorClass::Syntax, "Syntax"},
    {ErrorClass::Type, "Type"},
    {ErrorClass::Termination, "Termination"},
    {ErrorClass::UnknownIdentifier, "UnknownIdentifier"},
    {ErrorClass::SorryPresent, "SorryPresent"},
    {ErrorClass::Timeout, "Timeout"},
    {ErrorClass::Other, "Other"},
}};

bool ident_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '\'' || c == '.' ||
         static_cast<unsigned char>(c) >= 0x80;
}

}  // namespace

std::string_view to_string(ErrorClass c) {
  for (const auto& [cls, name] : kNames)
    if (cls == c) return name;
  return "?";
}

ErrorClass parse_error_class(std::string_view s) {
  for (const auto& [cls, name] : kNames)
    if (name == s) return cls;
  throw Error(ErrorKind::Usage, "unknown error class '" + std::string(s) + "'");
}

ErrorClass classify_message(std::string_view message) {
  for (const auto& rule : kRules)
    if (text::contains(message, rule.pattern)) return rule.cls;
  return ErrorClass::Other;
}

std::set<ErrorClass> classify(const std::vector<Diagnostic>& diagnostics, std::string_view source) {
  std::set<ErrorClass> out;
  for (const auto& d : diagnostics) {
    ErrorClass c = classify_message(d.message);
    if (d.severity == Severity::Warning) {
      if (c == ErrorClass::SorryPresent) out.insert(c);
      continue;
    }
    out.insert(c);
  }
  if (sorry_count(source) > 0) out.insert(ErrorClass::SorryPresent);
  return out;
}

std::string strip_comments(std::string_view src) {
  std::string out(src);
  std::size_t i = 0;
  int depth = 0;
  auto blank = [&](std::size_t pos) {
    if (out[pos] != '\n') out[pos] = ' ';
  };
  while (i < src.size()) {
    if (depth > 0) {
      if (src.compare(i, 2, "/-") == 0) {
        ++depth;
        blank(i), blank(i + 1);
        i += 2;
      } else if (src.compare(i, 2, "-/") == 0) {
        --depth;
        blank(i), blank(i + 1);
        i += 2;
      } else {
        blank(i++);
      }
      continue;
    }
    if (src.compare(i, 2, "/-") == 0) {
      depth = 1;
      blank(i), blank(i + 1);
      i += 2;
    } else if (src.compare(i, 2, "--") == 0) {
      while (i < src.size() && src[i] != '\n') blank(i++);
    } else if (src[i] == '"') {
      blank(i++);
      while (i < src.size() && src[i] != '"') {
        if (src[i] == '\\' && i + 1 < src.size()) blank(i++);
        blank(i++);
      }
      if (i < src.size()) blank(i++);
    } else if (src[i] == '\'' && (i == 0 || !ident_char(src[i - 1]))) {
      // char literal such as '"' or '\n'; a lone quote is left alone
      std::size_t close = src[i + 1 < src.size() ? i + 1 : i] == '\\' ? i + 3 : i + 2;
      if (close < src.size() && src[close] == '\'') {
        while (i <= close) blank(i++);
      } else {
        ++i;
      }
    } else {
      ++i;
    }
  }
  return out;
}

int sorry_count(std::string_view source) {
  std::string s = strip_comments(source);
  int n = 0;
  for (std::size_t pos = s.find("sorry"); pos != std::string::npos; pos = s.find("sorry", pos + 5)) {
    bool left = pos == 0 || !ident_char(s[pos - 1]);
    bool right = pos + 5 >= s.size() || !ident_char(s[pos + 5]);
    if (left && right) ++n;
  }
  return n;
}

}  // namespace bridge::lean
