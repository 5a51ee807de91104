#include "bridge/prompt/template.hpp"
#include "bridge/util/digest.hpp"
#include "bridge/util/error.hpp"
#include "bridge/util/fs.hpp"
#include "bridge/util/text.hpp"

#include <cstdlib>

namespace bridge::prompt {

namespace {

constexpr std::string_view kSwapOpen = "[SWAP:";
constexpr int kMaxSwapDepth = 8;

std::string domain_dir(Domain d) { return text::to_lower(to_string(d)); }

std::string read_template(const std::filesystem::path& path, std::string& digest_input) {
  if (!std::filesystem::exists(path))
    throw Error(ErrorKind::Config, "template missing: " + path.string());
  std::string body = fs::read_file(path);
  digest_input += path.filename().string();
  digest_input += '\0';
  digest_input += body;
  digest_input += '\0';
  return body;
}

/// Drops one trailing newline so files can end with a newline without it leaking into prompts.
std::string chomp(std::string s) {
  if (!s.empty() && s.back() == '\n') s.pop_back();
  return s;
}

std::map<std::string, std::string> parse_sections(const std::string& contents, const std::string& origin) {
  std::map<std::string, std::string> sections;
  std::string* current = nullptr;
  std::vector<std::string> buffer;
  auto flush = [&] {
    if (!current) return;
    while (!buffer.empty() && text::trim(buffer.back()).empty()) buffer.pop_back();
    *current = text::join(buffer, "\n");
    buffer.clear();
  };
  for (const auto& line : text::split_lines(contents)) {
    if (text::starts_with(line, "@@ ")) {
      flush();
      std::string name(text::trim(std::string_view(line).substr(3)));
      if (name.empty()) throw Error(ErrorKind::Config, origin + ": empty section name");
      auto [it, inserted] = sections.emplace(name, std::string{});
      if (!inserted) throw Error(ErrorKind::Config, origin + ": duplicate section " + name);
      current = &it->second;
      continue;
    }
    if (current) buffer.push_back(line);
  }
  flush();
  return sections;
}

std::string lean_binders(const corpus::Problem& p) {
  std::vector<std::string> parts;
  for (const auto& param : p.params)
    parts.push_back("(" + param.name + " : " + corpus::to_lean(corpus::parse_type(param.semantic_type)) + ")");
  return text::join(parts, " ");
}

}  // namespace

std::filesystem::path TemplateCatalog::default_dir() {
  if (const char* env = std::getenv("BRIDGE_TEMPLATES"); env && *env) return env;
  return BRIDGE_DEFAULT_TEMPLATE_DIR;
}

TemplateCatalog TemplateCatalog::load_default() { return TemplateCatalog(default_dir()); }

TemplateCatalog::TemplateCatalog(const std::filesystem::path& dir) {
  std::string digest_input;
  for (Domain d : {Domain::Code, Domain::Spec, Domain::Proof}) {
    unified_[d] = chomp(read_template(dir / domain_dir(d) / "_unified.tmpl", digest_input));
    for (StrategyId s : list_strategies(d)) {
      auto path = dir / domain_dir(d) / (std::string(s.name()) + ".tmpl");
      strategies_.emplace(s, StrategyFile{parse_sections(read_template(path, digest_input), path.string())});
    }
  }
  retry_ = chomp(read_template(dir / "feedback" / "retry.tmpl", digest_input));
  lean_translation_ = chomp(read_template(dir / "feedback" / "lean_translation.tmpl", digest_input));
  tool_context_ = chomp(read_template(dir / "feedback" / "tool_context.tmpl", digest_input));
  digest_ = sha256_hex(digest_input);
}

std::string TemplateCatalog::expand_swaps(std::string body, const StrategyFile& file, StrategyId strategy) const {
  for (int depth = 0; depth < kMaxSwapDepth; ++depth) {
    if (body.find(kSwapOpen) == std::string::npos) return body;
    std::string out;
    std::size_t pos = 0;
    while (true) {
      auto open = body.find(kSwapOpen, pos);
      if (open == std::string::npos) {
        out.append(body, pos, std::string::npos);
        break;
      }
      auto close = body.find(']', open);
      if (close == std::string::npos)
        throw Error(ErrorKind::Config, "unterminated [SWAP: slot in template for " + strategy.qualified());
      std::string name = body.substr(open + kSwapOpen.size(), close - open - kSwapOpen.size());
      auto it = file.sections.find(name);
      if (it == file.sections.end())
        throw Error(ErrorKind::Usage,
                    "missing placeholder value [SWAP:" + name + "] for strategy " + strategy.qualified());
      out.append(body, pos, open - pos);
      out += it->second;
      pos = close + 1;
    }
    body = std::move(out);
  }
  throw Error(ErrorKind::Config, "[SWAP:] expansion too deep for " + strategy.qualified());
}

PromptTemplate TemplateCatalog::resolve(StrategyId strategy) const {
  const auto& file = strategies_.at(strategy);
  auto override_body = file.sections.find("BODY");
  std::string body = override_body != file.sections.end() ? override_body->second : unified_.at(strategy.domain());
  body = expand_swaps(std::move(body), file, strategy);
  return PromptTemplate{strategy, body, placeholders_in(body)};
}

std::string TemplateCatalog::render(StrategyId strategy, const corpus::Problem& problem,
                                    const RenderOptions& options) const {
  PromptTemplate tmpl = resolve(strategy);
  auto values = problem_variables(problem);
  values["strategy_name"] = std::string(strategy.name());
  values["tool_context"] = options.tool_context ? "\n" + tool_context_ + "\n" : "";
  std::string out = substitute(tmpl.body, values);
  if (has_surviving_placeholder(out))
    throw Error(ErrorKind::Usage, "placeholder survived rendering for " + strategy.qualified() + " / " + problem.id);
  return out;
}

std::string TemplateCatalog::render_retry(std::string_view previous_artifact, const std::vector<std::string>& errors,
                                          int round, int max_rounds, ArtifactLanguage language) const {
  if (max_rounds < 1 || round < 1 || round > max_rounds) {
    throw Error(ErrorKind::Usage, "retry round " + std::to_string(round) + " outside 1.." + std::to_string(max_rounds));
  }
  std::map<std::string, std::string> values;
  values["retry_attempt"] = std::to_string(round);
  values["max_retries"] = std::to_string(max_rounds);
  values["artifact_language"] = language == ArtifactLanguage::Lean ? "Lean" : "Python";
  values["fence_language"] = language == ArtifactLanguage::Lean ? "lean" : "python";
  values["previous_code"] = std::string(previous_artifact);
  values["errors"] = errors.empty() ? "(no diagnostics captured)" : text::join(errors, "\n");
  values["output_instruction"] =
      language == ArtifactLanguage::Lean
          ? "Return the complete corrected Lean4 file in a single fenced ```lean block."
          : "Return the complete corrected Python solution between <python> and </python> tags.";
  return substitute(retry_, values);
}

std::string TemplateCatalog::render_lean_translation(const corpus::Problem& problem,
                                                     std::string_view python_source) const {
  auto values = problem_variables(problem);
  values["python_source"] = std::string(python_source);
  return substitute(lean_translation_, values);
}

std::map<std::string, std::string> problem_variables(const corpus::Problem& problem) {
  std::map<std::string, std::string> v;
  v["problem_id"] = problem.id;
  v["problem_title"] = problem.title;
  v["problem_statement"] = problem.statement;
  v["category"] = problem.category;
  v["function_name"] = problem.function_name;
  v["function_params"] = lean_binders(problem);

  std::vector<std::string> names;
  std::vector<std::string> lean_types;
  std::vector<std::string> py_params;
  std::vector<corpus::SemanticType> types;
  for (const auto& param : problem.params) {
    auto t = corpus::parse_type(param.semantic_type);
    names.push_back(param.name);
    lean_types.push_back(corpus::to_lean(t));
    py_params.push_back(param.name + ": " + corpus::to_python_hint(t));
    types.push_back(std::move(t));
  }
  auto ret = corpus::parse_type(problem.return_type);
  v["param_names"] = text::join(names, " ");
  v["return_type"] = corpus::to_lean(ret);
  v["input_type"] = lean_types.size() == 1 ? lean_types.front() : "(" + text::join(lean_types, " × ") + ")";
  v["lean_signature"] = "def " + problem.function_name + " " + v["function_params"] + " : " + v["return_type"];
  v["python_signature"] =
      "def " + problem.function_name + "(" + text::join(py_params, ", ") + ") -> " + corpus::to_python_hint(ret) + ":";

  std::vector<std::string> lean_examples;
  std::vector<std::string> py_examples;
  for (const auto& test : problem.tests) {
    std::vector<std::string> lean_args;
    std::vector<std::string> py_args;
    for (std::size_t i = 0; i < test.inputs.size() && i < types.size(); ++i) {
      auto lit = corpus::parse_literal(test.inputs[i]);
      lean_args.push_back(corpus::to_lean(lit, types[i]));
      py_args.push_back(corpus::to_python(lit));
    }
    auto expected = corpus::parse_literal(test.expected);
    std::string order_note = test.unordered ? "  (any order)" : "";
    lean_examples.push_back("- " + problem.function_name + " " + text::join(lean_args, " ") + " = " +
                            corpus::to_lean(expected, ret) + order_note);
    py_examples.push_back("- " + problem.function_name + "(" + text::join(py_args, ", ") + ") == " +
                          corpus::to_python(expected) + order_note);
  }
  v["test_examples_lean"] = text::join(lean_examples, "\n");
  v["test_examples_python"] = text::join(py_examples, "\n");
  return v;
}

std::string substitute(std::string_view body, const std::map<std::string, std::string>& values) {
  std::string out;
  out.reserve(body.size());
  std::size_t pos = 0;
  while (true) {
    auto open = body.find("{{", pos);
    if (open == std::string_view::npos) {
      out.append(body.substr(pos));
      break;
    }
    auto close = body.find("}}", open + 2);
    if (close == std::string_view::npos) {
      out.append(body.substr(pos));
      break;
    }
    std::string name(text::trim(body.substr(open + 2, close - open - 2)));
    auto it = values.find(name);
    if (it == values.end()) throw Error(ErrorKind::Usage, "missing placeholder value {{ " + name + " }}");
    out.append(body.substr(pos, open - pos));
    out += it->second;
    pos = close + 2;
  }
  return out;
}

std::set<std::string> placeholders_in(std::string_view body) {
  std::set<std::string> names;
  std::size_t pos = 0;
  while (true) {
    auto open = body.find("{{", pos);
    if (open == std::string_view::npos) break;
    auto close = body.find("}}", open + 2);
    if (close == std::string_view::npos) break;
    names.emplace(text::trim(body.substr(open + 2, close - open - 2)));
    pos = close + 2;
  }
  return names;
}

bool has_surviving_placeholder(std::string_view text) {
  return text::contains(text, "{{") || text::contains(text, "}}") || text::contains(text, kSwapOpen);
}

}  // namespace bridge::prompt
