#include "bridge/prompt/strategy.hpp"
#include "bridge/util/error.hpp"

#include <array>
#include <span>

namespace bridge::prompt {

namespace {

constexpr std::array<std::string_view, 9> kCode = {
    "Direct",     "PythonBridge",  "HaskellFunctional", "OCamlTypeGuided",     "DoubleLean",
    "CppImperative", "LiterateTutorial", "LiterateProof", "LiterateMathematical"};
constexpr std::array<std::string_view, 8> kSpec = {
    "Direct",         "DesignByContract",     "DafnyStyle",          "PropertyBased",
    "FunctionalProgramming", "DefensiveProgramming", "AlgorithmicThinking", "TestDriven"};
constexpr std::array<std::string_view, 5> kProof = {
    "NaturalLanguage", "UnitTests", "CodeAnalysis", "TypeGuided", "Termination"};

std::span<const std::string_view> names_for(Domain d) {
  switch (d) {
    case Domain::Code: return kCode;
    case Domain::Spec: return kSpec;
    case Domain::Proof: return kProof;
  }
  return {};
}

}  // namespace

std::string_view to_string(Domain d) {
  switch (d) {
    case Domain::Code: return "Code";
    case Domain::Spec: return "Spec";
    case Domain::Proof: return "Proof";
  }
  return "?";
}

Domain parse_domain(std::string_view s) {
  if (s == "Code" || s == "code") return Domain::Code;
  if (s == "Spec" || s == "spec") return Domain::Spec;
  if (s == "Proof" || s == "proof") return Domain::Proof;
  throw Error(ErrorKind::Usage, "unknown domain '" + std::string(s) + "'");
}

StrategyId StrategyId::of(Domain domain, std::string_view name) {
  auto names = names_for(domain);
  for (std::size_t i = 0; i < names.size(); ++i)
    if (names[i] == name) return StrategyId(domain, static_cast<std::uint8_t>(i));
  throw Error(ErrorKind::Usage,
              "unknown strategy '" + std::string(name) + "' in domain " + std::string(to_string(domain)));
}

StrategyId StrategyId::parse(std::string_view qualified) {
  auto slash = qualified.find('/');
  if (slash == std::string_view::npos)
    throw Error(ErrorKind::Usage, "strategy must be Domain/Name, got '" + std::string(qualified) + "'");
  return of(parse_domain(qualified.substr(0, slash)), qualified.substr(slash + 1));
}

std::string_view StrategyId::name() const { return names_for(domain_)[index_]; }

std::string StrategyId::qualified() const {
  return std::string(to_string(domain_)) + "/" + std::string(name());
}

std::vector<StrategyId> list_strategies(Domain domain) {
  std::vector<StrategyId> out;
  for (auto name : names_for(domain)) out.push_back(StrategyId::of(domain, name));
  return out;
}

std::vector<StrategyId> all_strategies() {
  std::vector<StrategyId> out;
  for (Domain d : {Domain::Code, Domain::Spec, Domain::Proof}) {
    auto part = list_strategies(d);
    out.insert(out.end(), part.begin(), part.end());
  }
  return out;
}

}  // namespace bridge::prompt
