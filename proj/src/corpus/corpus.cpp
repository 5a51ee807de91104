#include "bridge/corpus/corpus.hpp"
#include "bridge/util/error.hpp"
#include "bridge/util/fs.hpp"
#include "bridge/util/text.hpp"

#include <json.hpp>

#include <algorithm>
#include <set>
#include <unordered_set>

namespace bridge::corpus {

using nlohmann::json;
using ordered_json = nlohmann::ordered_json;

const Problem* ProblemSet::find(std::string_view id) const {
  for (const auto& p : *items_)
    if (p.id == id) return &p;
  return nullptr;
}

namespace {

bool has_placeholder_syntax(std::string_view s) {
  return text::contains(s, "{{") || text::contains(s, "}}") || text::contains(s, "[SWAP:");
}

}  // namespace

std::vector<std::string> validate_problem(const Problem& p) {
  std::vector<std::string> v;
  if (p.id.empty()) v.push_back("id: must be non-empty");
  if (p.title.empty()) v.push_back("title: must be non-empty");
  if (p.statement.empty()) v.push_back("statement: must be non-empty");
  if (!text::is_identifier(p.function_name))
    v.push_back("function_name: '" + p.function_name + "' is not a valid identifier");
  for (auto [field, value] : {std::pair<const char*, const std::string*>{"title", &p.title},
                              {"statement", &p.statement}}) {
    if (has_placeholder_syntax(*value))
      v.push_back(std::string(field) + ": contains template placeholder syntax");
  }
  if (std::find(std::begin(kCategories), std::end(kCategories), p.category) == std::end(kCategories))
    v.push_back("category: unknown tag '" + p.category + "'");

  std::vector<std::optional<SemanticType>> types;
  std::set<std::string> names;
  for (std::size_t i = 0; i < p.params.size(); ++i) {
    const auto& param = p.params[i];
    std::string where = "params[" + std::to_string(i) + "]";
    if (!text::is_identifier(param.name)) v.push_back(where + ".name: '" + param.name + "' is not a valid identifier");
    if (!names.insert(param.name).second) v.push_back(where + ".name: duplicate parameter '" + param.name + "'");
    try {
      types.emplace_back(parse_type(param.semantic_type));
    } catch (const LiteralError& e) {
      types.emplace_back(std::nullopt);
      v.push_back(where + ".type: " + e.what());
    }
  }
  std::optional<SemanticType> ret;
  try {
    ret = parse_type(p.return_type);
  } catch (const LiteralError& e) {
    v.push_back(std::string("return_type: ") + e.what());
  }

  if (p.tests.empty()) v.push_back("tests: must be non-empty");
  for (std::size_t t = 0; t < p.tests.size(); ++t) {
    const auto& test = p.tests[t];
    std::string where = "tests[" + std::to_string(t) + "]";
    if (test.inputs.size() != p.params.size()) {
      v.push_back(where + ": arity " + std::to_string(test.inputs.size()) + " does not match " +
                  std::to_string(p.params.size()) + " params");
    }
    if (has_placeholder_syntax(test.expected) ||
        std::any_of(test.inputs.begin(), test.inputs.end(), has_placeholder_syntax))
      v.push_back(where + ": literal contains template placeholder syntax");
    for (std::size_t i = 0; i < test.inputs.size(); ++i) {
      std::string at = where + ".inputs[" + std::to_string(i) + "]";
      try {
        Literal lit = parse_literal(test.inputs[i]);
        if (i < types.size() && types[i] && !conforms(lit, *types[i]))
          v.push_back(at + ": literal does not conform to " + p.params[i].semantic_type);
      } catch (const LiteralError& e) {
        v.push_back(at + ": " + e.what());
      }
    }
    if (test.expected.empty()) {
      v.push_back(where + ".expected: missing");
    } else {
      try {
        Literal lit = parse_literal(test.expected);
        if (ret && !conforms(lit, *ret)) v.push_back(where + ".expected: literal does not conform to " + p.return_type);
      } catch (const LiteralError& e) {
        v.push_back(where + ".expected: " + e.what());
      }
    }
  }
  return v;
}

Problem problem_from_json(std::string_view json_line, std::vector<std::string>& violations) {
  Problem p;
  json j = json::parse(json_line);  // parse_error propagates to the caller
  if (!j.is_object()) {
    violations.push_back("record: not a JSON object");
    return p;
  }
  auto get_string = [&](const char* key, std::string& out, bool required) {
    auto it = j.find(key);
    if (it == j.end() || it->is_null()) {
      if (required) violations.push_back(std::string(key) + ": missing required field");
      return;
    }
    if (!it->is_string()) {
      violations.push_back(std::string(key) + ": must be a string");
      return;
    }
    out = it->get<std::string>();
  };
  get_string("id", p.id, true);
  get_string("title", p.title, true);
  get_string("statement", p.statement, true);
  get_string("function_name", p.function_name, true);
  get_string("return_type", p.return_type, true);
  get_string("category", p.category, true);
  if (auto it = j.find("difficulty"); it != j.end() && !it->is_null()) {
    if (it->is_string()) p.difficulty = it->get<std::string>();
    else violations.push_back("difficulty: must be a string");
  }

  if (auto it = j.find("params"); it == j.end() || !it->is_array()) {
    violations.push_back("params: missing required list");
  } else {
    for (const auto& item : *it) {
      if (!item.is_object() || !item.contains("name") || !item.contains("type") ||
          !item["name"].is_string() || !item["type"].is_string()) {
        violations.push_back("params: each entry needs string 'name' and 'type'");
        continue;
      }
      p.params.push_back({item["name"].get<std::string>(), item["type"].get<std::string>()});
    }
  }

  if (auto it = j.find("tests"); it == j.end() || !it->is_array()) {
    violations.push_back("tests: missing required list");
  } else {
    for (const auto& item : *it) {
      UnitTest t;
      if (!item.is_object() || !item.contains("inputs") || !item["inputs"].is_array()) {
        violations.push_back("tests: each entry needs an 'inputs' list");
        continue;
      }
      for (const auto& in : item["inputs"]) {
        if (in.is_string()) t.inputs.push_back(in.get<std::string>());
        else violations.push_back("tests: inputs must be literal strings");
      }
      if (auto e = item.find("expected"); e != item.end() && e->is_string()) t.expected = e->get<std::string>();
      if (auto u = item.find("unordered"); u != item.end() && u->is_boolean()) t.unordered = u->get<bool>();
      p.tests.push_back(std::move(t));
    }
  }
  return p;
}

std::string problem_to_json(const Problem& p) {
  ordered_json j;
  j["id"] = p.id;
  j["title"] = p.title;
  j["statement"] = p.statement;
  j["function_name"] = p.function_name;
  j["params"] = ordered_json::array();
  for (const auto& param : p.params) j["params"].push_back({{"name", param.name}, {"type", param.semantic_type}});
  j["return_type"] = p.return_type;
  j["tests"] = ordered_json::array();
  for (const auto& t : p.tests) {
    ordered_json tj;
    tj["inputs"] = t.inputs;
    tj["expected"] = t.expected;
    if (t.unordered) tj["unordered"] = true;
    j["tests"].push_back(std::move(tj));
  }
  j["category"] = p.category;
  if (p.difficulty) j["difficulty"] = *p.difficulty;
  return j.dump();
}

ProblemSet parse_manifest(std::string_view contents, std::string_view origin) {
  std::vector<Problem> problems;
  std::vector<std::string> errors;
  std::unordered_set<std::string> seen;
  auto lines = text::split_lines(contents);
  for (std::size_t n = 0; n < lines.size(); ++n) {
    std::string_view line = text::trim(lines[n]);
    if (line.empty()) continue;
    std::string where = std::string(origin) + ":" + std::to_string(n + 1);
    std::vector<std::string> violations;
    Problem p;
    try {
      p = problem_from_json(line, violations);
    } catch (const nlohmann::json::parse_error& e) {
      errors.push_back(where + ": malformed record: " + e.what());
      continue;
    }
    if (violations.empty()) {
      auto more = validate_problem(p);
      violations.insert(violations.end(), more.begin(), more.end());
    }
    std::string label = p.id.empty() ? "<no id>" : p.id;
    if (!p.id.empty() && !seen.insert(p.id).second)
      violations.push_back("id: duplicate id '" + p.id + "'");
    for (const auto& v : violations) errors.push_back(where + " (" + label + "): " + v);
    problems.push_back(std::move(p));
  }
  if (!errors.empty()) throw Error(ErrorKind::Corpus, text::join(errors, "\n"));
  return ProblemSet(std::move(problems));
}

ProblemSet load_manifest(const std::filesystem::path& path) {
  std::string contents;
  try {
    contents = fs::read_file(path);
  } catch (const Error& e) {
    throw Error(ErrorKind::Corpus, e.what());
  }
  return parse_manifest(contents, path.string());
}

std::string serialize_manifest(const ProblemSet& set) {
  std::string out;
  for (const auto& p : set) out += problem_to_json(p) + "\n";
  return out;
}

void save_manifest(const ProblemSet& set, const std::filesystem::path& path) {
  fs::write_file_atomic(path, serialize_manifest(set));
}

ProblemSet filter_by_category(const ProblemSet& set, std::string_view category) {
  std::vector<Problem> out;
  for (const auto& p : set)
    if (p.category == category) out.push_back(p);
  return ProblemSet(std::move(out));
}

ProblemSet filter_by_ids(const ProblemSet& set, const std::vector<std::string>& ids) {
  std::unordered_set<std::string> wanted(ids.begin(), ids.end());
  std::vector<Problem> out;
  for (const auto& p : set)
    if (wanted.count(p.id)) out.push_back(p);
  return ProblemSet(std::move(out));
}

std::vector<SemanticType> param_types(const Problem& p) {
  std::vector<SemanticType> out;
  for (const auto& param : p.params) out.push_back(parse_type(param.semantic_type));
  return out;
}

}  // namespace bridge::corpus
