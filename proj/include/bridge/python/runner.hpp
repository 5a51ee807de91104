#pragma once

#include "bridge/corpus/corpus.hpp"

#include <chrono>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace bridge::python {

enum class Fault { RuntimeError, Timeout, Crash };
std::string_view to_string(Fault f);

struct TestFailure {
  std::size_t index = 0;
  std::string observed;  // literal text, or the exception for errored tests
  std::string expected;
};

struct TestOutcome {
  std::size_t total = 0;
  std::size_t passed = 0;
  std::vector<TestFailure> failures;
  std::optional<Fault> fault;
  std::string fault_detail;
  std::chrono::milliseconds elapsed{0};

  bool all_passed() const { return !fault && total > 0 && passed == total; }
};

struct ContractReport {
  std::size_t trials = 0;
  std::size_t precondition_rejections = 0;
  std::size_t postcondition_violations = 0;
  std::size_t invariant_violations = 0;
  /// Exceptions raised outside the contract machinery; not violations.
  std::size_t faults = 0;
  std::optional<Fault> fault;  // whole-run fault (load failure, timeout, crash)
  std::string fault_detail;

  friend bool operator==(const ContractReport&, const ContractReport&) = default;
};

enum class Vacuity { NonVacuous, Vacuous, InconsistentSpec };
std::string_view to_string(Vacuity v);

struct VacuityVerdict {
  Vacuity verdict = Vacuity::Vacuous;
  std::size_t mutants_total = 0;
  std::size_t mutants_rejected = 0;
  std::vector<std::string> mutants;           // in pool order
  std::vector<std::string> rejected_mutants;
  std::string detail;
};

inline constexpr std::size_t kDefaultMutants = 6;
inline constexpr std::size_t kDefaultVacuityTrials = 50;

struct RunnerOptions {
  /// Interpreter command; empty means $BRIDGE_PYTHON_CMD, else "python3".
  std::string interpreter;
  /// Per-test (and per-record) timeout; the deadline restarts with each result record.
  std::chrono::milliseconds timeout{std::chrono::seconds(5)};
  /// Budget for one call during contract trials and mutant checks.
  std::chrono::milliseconds call_budget{std::chrono::seconds(1)};
};

/// Executes Python candidates in a scratch directory with a scrubbed environment.
/// Each call spawns its own interpreter; safe for concurrent use.
class Runner {
 public:
  explicit Runner(RunnerOptions options = {});

  bool available() const;
  const std::vector<std::string>& interpreter() const { return argv_; }

  /// Throws Error(BackendMissing) without an interpreter, Error(Usage) for unencodable literals.
  TestOutcome run_tests(std::string_view artifact, const corpus::Problem& problem) const;

  /// `trials` inputs drawn from the parameter types with random.Random(seed).
  ContractReport check_contracts(std::string_view artifact, const corpus::Problem& problem, std::size_t trials,
                                 std::uint64_t seed) const;

  /// Mutation-based vacuity verdict. Throws Error(Usage) when no mutant can be built.
  VacuityVerdict vacuity_check(std::string_view artifact, const corpus::Problem& problem,
                               std::size_t mutants = kDefaultMutants, std::uint64_t seed = 0,
                               std::size_t trials = kDefaultVacuityTrials) const;

 private:
  struct Raw;
  Raw execute(std::string_view artifact, const std::string& job) const;

  RunnerOptions options_;
  std::vector<std::string> argv_;
};

/// Embedded harness sources, exposed for inspection in tests.
std::string_view harness_source();
std::string_view deal_shim_source();

}  // namespace bridge::python
