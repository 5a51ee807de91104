#pragma once

#include <compare>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace bridge::prompt {

enum class Domain : std::uint8_t { Code, Spec, Proof };

std::string_view to_string(Domain d);
/// Accepts "Code"/"code", "Spec"/"spec", "Proof"/"proof".
Domain parse_domain(std::string_view s);

/// One reasoning strategy: a (domain, name) pair drawn from the fixed taxonomy.
/// Only constructible through the factories, so invalid pairs cannot exist.
class StrategyId {
 public:
  static StrategyId of(Domain domain, std::string_view name);  // throws Error(Usage)
  /// Parses "Domain/Name", e.g. "Code/OCamlTypeGuided".
  static StrategyId parse(std::string_view qualified);

  Domain domain() const { return domain_; }
  std::string_view name() const;
  std::string qualified() const;  // "Code/OCamlTypeGuided"

  friend auto operator<=>(const StrategyId&, const StrategyId&) = default;

 private:
  StrategyId(Domain d, std::uint8_t index) : domain_(d), index_(index) {}
  Domain domain_;
  std::uint8_t index_;
};

/// The fixed enumeration for `domain` in declaration order.
std::vector<StrategyId> list_strategies(Domain domain);
/// All 22 strategies: Code, then Spec, then Proof.
std::vector<StrategyId> all_strategies();

}  // namespace bridge::prompt
