#include "bridge/corpus/literal.hpp"
#include "bridge/util/text.hpp"

#include <cctype>
#include <charconv>

namespace bridge::corpus {

namespace {

class LiteralParser {
 public:
  explicit LiteralParser(std::string_view src) : src_(src) {}

  Literal parse_all() {
    Literal lit = parse();
    skip_ws();
    if (pos_ != src_.size()) fail("trailing characters");
    return lit;
  }

 private:
  [[noreturn]] void fail(const std::string& what) const {
    throw LiteralError(what + " at offset " + std::to_string(pos_) + " in literal '" +
                       std::string(src_) + "'");
  }

  void skip_ws() {
    while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_]))) ++pos_;
  }

  bool consume(std::string_view word) {
    if (src_.substr(pos_, word.size()) != word) return false;
    std::size_t end = pos_ + word.size();
    if (end < src_.size() && (std::isalnum(static_cast<unsigned char>(src_[end])) || src_[end] == '_'))
      return false;
    pos_ = end;
    return true;
  }

  Literal parse() {
    skip_ws();
    if (pos_ >= src_.size()) fail("unexpected end");
    char c = src_[pos_];
    if (c == '[') return parse_list();
    if (c == '"') return Literal{parse_string()};
    if (c == '-' || std::isdigit(static_cast<unsigned char>(c))) return parse_int();
    if (consume("true")) return Literal{true};
    if (consume("false")) return Literal{false};
    fail("unexpected character");
  }

  Literal parse_list() {
    ++pos_;  // '['
    Literal::List items;
    skip_ws();
    if (pos_ < src_.size() && src_[pos_] == ']') {
      ++pos_;
      return Literal{std::move(items)};
    }
    while (true) {
      items.push_back(parse());
      skip_ws();
      if (pos_ >= src_.size()) fail("unterminated list");
      if (src_[pos_] == ',') {
        ++pos_;
        continue;
      }
      if (src_[pos_] == ']') {
        ++pos_;
        break;
      }
      fail("expected ',' or ']'");
    }
    return Literal{std::move(items)};
  }

  Literal parse_int() {
    std::size_t start = pos_;
    if (src_[pos_] == '-') ++pos_;
    std::size_t digits = pos_;
    while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) ++pos_;
    if (pos_ == digits) fail("expected digits");
    if (pos_ < src_.size() && (src_[pos_] == '.' || src_[pos_] == 'e' || src_[pos_] == 'E'))
      fail("non-integer number");
    std::int64_t v = 0;
    auto [ptr, ec] = std::from_chars(src_.data() + start, src_.data() + pos_, v);
    if (ec != std::errc{} || ptr != src_.data() + pos_) fail("integer out of range");
    return Literal{v};
  }

  static void append_utf8(std::string& out, unsigned cp) {
    if (cp < 0x80) {
      out.push_back(static_cast<char>(cp));
    } else if (cp < 0x800) {
      out.push_back(static_cast<char>(0xC0 | (cp >> 6)));
      out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    } else if (cp < 0x10000) {
      out.push_back(static_cast<char>(0xE0 | (cp >> 12)));
      out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
      out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    } else {
      out.push_back(static_cast<char>(0xF0 | (cp >> 18)));
      out.push_back(static_cast<char>(0x80 | ((cp >> 12) & 0x3F)));
      out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
      out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    }
  }

  unsigned parse_hex4() {
    if (pos_ + 4 > src_.size()) fail("short \\u escape");
    unsigned v = 0;
    for (int i = 0; i < 4; ++i) {
      char h = src_[pos_++];
      v <<= 4;
      if (h >= '0' && h <= '9') v |= static_cast<unsigned>(h - '0');
      else if (h >= 'a' && h <= 'f') v |= static_cast<unsigned>(h - 'a' + 10);
      else if (h >= 'A' && h <= 'F') v |= static_cast<unsigned>(h - 'A' + 10);
      else fail("bad hex digit");
    }
    return v;
  }

  std::string parse_string() {
    ++pos_;  // opening quote
    std::string out;
    while (true) {
      if (pos_ >= src_.size()) fail("unterminated string");
      char c = src_[pos_++];
      if (c == '"') break;
      if (static_cast<unsigned char>(c) < 0x20) fail("control character in string");
      if (c != '\\') {
        out.push_back(c);
        continue;
      }
      if (pos_ >= src_.size()) fail("dangling escape");
      char e = src_[pos_++];
      switch (e) {
        case '"': out.push_back('"'); break;
        case '\\': out.push_back('\\'); break;
        case '/': out.push_back('/'); break;
        case 'n': out.push_back('\n'); break;
        case 't': out.push_back('\t'); break;
        case 'r': out.push_back('\r'); break;
        case 'b': out.push_back('\b'); break;
        case 'f': out.push_back('\f'); break;
        case 'u': {
          unsigned cp = parse_hex4();
          if (cp >= 0xD800 && cp <= 0xDBFF) {
            if (src_.substr(pos_, 2) != "\\u") fail("unpaired surrogate");
            pos_ += 2;
            unsigned lo = parse_hex4();
            if (lo < 0xDC00 || lo > 0xDFFF) fail("bad low surrogate");
            cp = 0x10000 + ((cp - 0xD800) << 10) + (lo - 0xDC00);
          } else if (cp >= 0xDC00 && cp <= 0xDFFF) {
            fail("unpaired surrogate");
          }
          append_utf8(out, cp);
          break;
        }
        default: fail("unknown escape");
      }
    }
    return out;
  }

  std::string_view src_;
  std::size_t pos_ = 0;
};

std::string quote(std::string_view s, bool python) {
  std::string out = "\"";
  for (char c : s) {
    switch (c) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\t': out += "\\t"; break;
      case '\r': out += "\\r"; break;
      default:
        if (static_cast<unsigned char>(c) < 0x20) {
          char buf[8];
          std::snprintf(buf, sizeof buf, python ? "\\x%02x" : "\\x%02x", static_cast<unsigned char>(c));
          out += buf;
        } else {
          out.push_back(c);
        }
    }
  }
  out.push_back('"');
  return out;
}

template <class Leaf>
std::string render_list(const Literal::List& items, std::string_view open, Leaf&& leaf) {
  std::string out(open);
  for (std::size_t i = 0; i < items.size(); ++i) {
    if (i) out += ", ";
    out += leaf(items[i]);
  }
  out += "]";
  return out;
}

}  // namespace

Literal parse_literal(std::string_view text) { return LiteralParser(text).parse_all(); }

std::string to_text(const Literal& lit) {
  if (const auto* i = std::get_if<std::int64_t>(&lit.value)) return std::to_string(*i);
  if (const auto* b = std::get_if<bool>(&lit.value)) return *b ? "true" : "false";
  if (const auto* s = std::get_if<std::string>(&lit.value)) return quote(*s, false);
  const auto& items = std::get<Literal::List>(lit.value);
  std::string out = "[";
  for (std::size_t i = 0; i < items.size(); ++i) {
    if (i) out += ",";
    out += to_text(items[i]);
  }
  return out + "]";
}

std::string to_python(const Literal& lit) {
  if (const auto* i = std::get_if<std::int64_t>(&lit.value)) return std::to_string(*i);
  if (const auto* b = std::get_if<bool>(&lit.value)) return *b ? "True" : "False";
  if (const auto* s = std::get_if<std::string>(&lit.value)) return quote(*s, true);
  return render_list(std::get<Literal::List>(lit.value), "[",
                     [](const Literal& l) { return to_python(l); });
}

namespace {

SemanticType parse_type_expr(std::string_view& rest);

SemanticType parse_type_atom(std::string_view& rest) {
  rest = text::trim(rest);
  if (rest.empty()) throw LiteralError("empty type");
  if (rest.front() == '(') {
    int depth = 0;
    std::size_t i = 0;
    for (; i < rest.size(); ++i) {
      if (rest[i] == '(') ++depth;
      if (rest[i] == ')' && --depth == 0) break;
    }
    if (i == rest.size()) throw LiteralError("unbalanced parentheses in type");
    std::string_view inner = rest.substr(1, i - 1);
    rest.remove_prefix(i + 1);
    SemanticType t = parse_type_expr(inner);
    if (!text::trim(inner).empty()) throw LiteralError("unexpected text in type");
    return t;
  }
  std::size_t end = 0;
  while (end < rest.size() && (std::isalnum(static_cast<unsigned char>(rest[end])) || rest[end] == '_'))
    ++end;
  std::string_view word = rest.substr(0, end);
  rest.remove_prefix(end);
  using K = SemanticType::Kind;
  if (word == "Int") return {K::Int, nullptr};
  if (word == "Nat") return {K::Nat, nullptr};
  if (word == "Bool") return {K::Bool, nullptr};
  if (word == "String") return {K::String, nullptr};
  if (word == "List" || word == "Array") {
    SemanticType elem = parse_type_atom(rest);
    return {word == "List" ? K::List : K::Array, std::make_shared<const SemanticType>(std::move(elem))};
  }
  throw LiteralError("unsupported type '" + std::string(word) + "'");
}

SemanticType parse_type_expr(std::string_view& rest) { return parse_type_atom(rest); }

}  // namespace

SemanticType parse_type(std::string_view text) {
  std::string_view rest = text;
  SemanticType t = parse_type_expr(rest);
  if (!text::trim(rest).empty())
    throw LiteralError("unexpected text after type in '" + std::string(text) + "'");
  return t;
}

std::string to_lean(const SemanticType& type) {
  using K = SemanticType::Kind;
  switch (type.kind) {
    case K::Int: return "Int";
    case K::Nat: return "Nat";
    case K::Bool: return "Bool";
    case K::String: return "String";
    case K::List:
    case K::Array: {
      std::string inner = to_lean(*type.elem);
      if (inner.find(' ') != std::string::npos) inner = "(" + inner + ")";
      return std::string(type.kind == K::List ? "List " : "Array ") + inner;
    }
  }
  return "?";
}

std::string to_python_hint(const SemanticType& type) {
  using K = SemanticType::Kind;
  switch (type.kind) {
    case K::Int:
    case K::Nat: return "int";
    case K::Bool: return "bool";
    case K::String: return "str";
    case K::List:
    case K::Array: return "List[" + to_python_hint(*type.elem) + "]";
  }
  return "object";
}

bool conforms(const Literal& lit, const SemanticType& type) {
  using K = SemanticType::Kind;
  switch (type.kind) {
    case K::Int: return lit.is_int();
    case K::Nat: return lit.is_int() && std::get<std::int64_t>(lit.value) >= 0;
    case K::Bool: return lit.is_bool();
    case K::String: return lit.is_string();
    case K::List:
    case K::Array: {
      if (!lit.is_list()) return false;
      for (const auto& item : std::get<Literal::List>(lit.value))
        if (!conforms(item, *type.elem)) return false;
      return true;
    }
  }
  return false;
}

std::string to_lean(const Literal& lit, const SemanticType& type) {
  if (!conforms(lit, type))
    throw LiteralError("literal " + to_text(lit) + " does not conform to type " + to_lean(type));
  using K = SemanticType::Kind;
  switch (type.kind) {
    case K::Int: {
      auto v = std::get<std::int64_t>(lit.value);
      return v < 0 ? "(" + std::to_string(v) + ")" : std::to_string(v);
    }
    case K::Nat: return std::to_string(std::get<std::int64_t>(lit.value));
    case K::Bool: return std::get<bool>(lit.value) ? "true" : "false";
    case K::String: return quote(std::get<std::string>(lit.value), false);
    case K::List:
    case K::Array: {
      const auto& elem = *type.elem;
      std::string out = render_list(std::get<Literal::List>(lit.value), type.kind == K::List ? "[" : "#[",
                                    [&](const Literal& l) { return to_lean(l, elem); });
      // Empty collections need a type ascription for elaboration.
      if (std::get<Literal::List>(lit.value).empty()) out = "(" + out + " : " + to_lean(type) + ")";
      return out;
    }
  }
  return "?";
}

}  // namespace bridge::corpus
