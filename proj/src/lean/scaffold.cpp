#include "bridge/lean/scaffold.hpp"
#include "bridge/util/error.hpp"
#include "bridge/util/fs.hpp"
#include "bridge/util/text.hpp"

#include <algorithm>

namespace bridge::lean {

namespace {

std::string guard_line(const corpus::Problem& p, const corpus::UnitTest& t, std::size_t index,
                       const std::vector<corpus::SemanticType>& types, const corpus::SemanticType& ret) {
  try {
    std::string call = p.function_name;
    for (std::size_t i = 0; i < t.inputs.size(); ++i) {
      if (i >= types.size()) throw corpus::LiteralError("more inputs than parameters");
      call += " " + corpus::to_lean(corpus::parse_literal(t.inputs[i]), types[i]);
    }
    std::string expected = corpus::to_lean(corpus::parse_literal(t.expected), ret);
    bool sortable = ret.kind == corpus::SemanticType::Kind::List && ret.elem &&
                    (ret.elem->kind == corpus::SemanticType::Kind::Int ||
                     ret.elem->kind == corpus::SemanticType::Kind::Nat);
    if (t.unordered && sortable) {
      // compare as multisets: sort both sides
      std::string sort = ".mergeSort (fun a b => decide (a ≤ b))";
      return "#guard (" + call + ")" + sort + " == (" + expected + ")" + sort;
    }
    return "#guard (" + call + ") == " + expected;
  } catch (const corpus::LiteralError& e) {
    throw Error(ErrorKind::Usage, "tests[" + std::to_string(index) + "] of " + p.id + ": cannot encode literal: " + e.what());
  }
}

}  // namespace

DirectoryFactory temp_directory_factory() {
  return [] { return fs::make_unique_dir(std::filesystem::temp_directory_path(), "bridge-lean-"); };
}

ScaffoldText scaffold_source(std::string_view artifact, const corpus::Problem& problem, const ScaffoldOptions& options) {
  if (text::trim(artifact).empty()) throw Error(ErrorKind::Usage, "cannot scaffold an empty Lean artifact");

  std::vector<std::string> imports = {"import Std"};
  if (options.mathlib) imports.push_back("import Mathlib");
  std::vector<std::string> body;
  bool in_header = true;
  for (const auto& line : text::split_lines(artifact)) {
    std::string_view t = text::trim(line);
    if (in_header && text::starts_with(t, "import ")) {
      std::string imp(t);
      if (imp == "import Mathlib" && !options.mathlib) continue;
      if (std::find(imports.begin(), imports.end(), imp) == imports.end()) imports.push_back(imp);
      continue;
    }
    if (in_header && t.empty()) continue;
    in_header = false;
    body.push_back(line);
  }
  while (!body.empty() && text::trim(body.back()).empty()) body.pop_back();

  ScaffoldText out;
  std::vector<std::string> lines = imports;
  lines.emplace_back();
  lines.insert(lines.end(), body.begin(), body.end());
  if (options.include_tests) {
    auto types = corpus::param_types(problem);
    auto ret = corpus::parse_type(problem.return_type);
    lines.emplace_back();
    for (std::size_t i = 0; i < problem.tests.size(); ++i) {
      lines.push_back(guard_line(problem, problem.tests[i], i, types, ret));
      out.guard_lines.push_back(static_cast<int>(lines.size()));
    }
  }
  out.source = text::join(lines, "\n") + "\n";
  return out;
}

LeanProject scaffold(std::string_view artifact, const corpus::Problem& problem, const ScaffoldOptions& options) {
  ScaffoldText st = scaffold_source(artifact, problem, options);
  LeanProject project;
  if (options.directories) {
    project.dir = options.directories();
  } else {
    project.dir = temp_directory_factory()();
    project.owner = std::make_shared<fs::ScopedDir>(project.dir);
  }
  project.file = project.dir / kSourceFileName;
  project.source = std::move(st.source);
  project.guard_lines = std::move(st.guard_lines);
  fs::write_file_atomic(project.file, project.source);
  return project;
}

}  // namespace bridge::lean
