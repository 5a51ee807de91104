#include "support.hpp"

#include "bridge/python/runner.hpp"
#include "bridge/util/error.hpp"
#include "bridge/util/text.hpp"

#include <doctest.h>

using namespace bridge;
using namespace bridge::python;
using namespace std::chrono_literals;

namespace {

const corpus::ProblemSet& contract_problems() {
  static const auto set = corpus::load_manifest(testsupport::fixtures() / "contracts" / "problems.jsonl");
  return set;
}

std::string contract_fixture(const char* name) {
  return testsupport::read(testsupport::fixtures() / "contracts" / name);
}

}  // namespace

TEST_CASE("reference solutions pass every fixture test") {
  if (!testsupport::python_available()) return;
  Runner runner;
  for (const auto& p : testsupport::corpus()) {
    auto o = runner.run_tests(testsupport::read(testsupport::fixtures() / "python" / (p.id + ".py")), p);
    CHECK_MESSAGE(o.all_passed(), p.id << " " << o.fault_detail);
    CHECK(o.total == p.tests.size());
  }
}

TEST_CASE("wrong answers are reported per test") {
  if (!testsupport::python_available()) return;
  Runner runner;
  const auto& p = testsupport::problem("arrays-001");
  auto o = runner.run_tests(testsupport::read(testsupport::fixtures() / "python_bad" / "wrong_constant.py"), p);
  CHECK_FALSE(o.fault);
  CHECK(o.passed < o.total);
  REQUIRE_FALSE(o.failures.empty());
  CHECK(o.failures[0].observed == "[]");
}

TEST_CASE("an infinite loop times out within the budget") {
  if (!testsupport::python_available()) return;
  Runner runner({.timeout = 1s});
  const auto& p = testsupport::problem("arrays-001");
  auto start = std::chrono::steady_clock::now();
  auto o = runner.run_tests(testsupport::read(testsupport::fixtures() / "python_bad" / "infinite_loop.py"), p);
  CHECK(o.fault == Fault::Timeout);
  CHECK(std::chrono::steady_clock::now() - start < 4s);
}

TEST_CASE("syntax errors and exceptions are runtime faults") {
  if (!testsupport::python_available()) return;
  Runner runner;
  const auto& p = testsupport::problem("numerical-001");
  auto broken = runner.run_tests("def gcd(a, b) return a", p);
  CHECK(broken.fault == Fault::RuntimeError);
  auto raises = runner.run_tests("def gcd(a: int, b: int) -> int:\n    raise ValueError('x')\n", p);
  CHECK_FALSE(raises.all_passed());
  CHECK(raises.passed == 0);
  auto missing = runner.run_tests("def other(): pass\n", p);
  CHECK_FALSE(missing.all_passed());
}

TEST_CASE("candidates cannot see the parent environment") {
  if (!testsupport::python_available()) return;
  ::setenv("BRIDGE_SECRET_PROBE", "leak", 1);
  Runner runner;
  const auto& p = testsupport::problem("numerical-001");
  auto o = runner.run_tests(
      "import os\ndef gcd(a: int, b: int) -> int:\n    return 1 if 'BRIDGE_SECRET_PROBE' in os.environ else 0\n", p);
  for (const auto& f : o.failures) CHECK(f.observed == "0");
  ::unsetenv("BRIDGE_SECRET_PROBE");
}

TEST_CASE("missing interpreter is a backend error") {
  Runner runner({.interpreter = "/nonexistent/python"});
  CHECK_FALSE(runner.available());
  try {
    runner.run_tests("def f(): pass", testsupport::problem("arrays-001"));
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::BackendMissing);
  }
}

TEST_CASE("contract fixtures pass their tests") {
  if (!testsupport::python_available()) return;
  Runner runner;
  const auto* sorted = contract_problems().find("abs-sorted");
  REQUIRE(sorted);
  CHECK(runner.run_tests(contract_fixture("dafny_sorted.py"), *sorted).all_passed());
  CHECK(runner.run_tests(contract_fixture("contract_free.py"), *sorted).all_passed());
}

TEST_CASE("contract checking is deterministic for a seed") {
  if (!testsupport::python_available()) return;
  Runner runner;
  const auto* sum = contract_problems().find("positive-sum");
  REQUIRE(sum);
  auto a = runner.check_contracts(contract_fixture("property_sum.py"), *sum, 30, 11);
  auto b = runner.check_contracts(contract_fixture("property_sum.py"), *sum, 30, 11);
  CHECK(a == b);
  CHECK(a.trials == 30);
  CHECK(a.postcondition_violations == 0);
  CHECK_FALSE(a.fault);

  const auto* sorted = contract_problems().find("abs-sorted");
  auto c = runner.check_contracts(contract_fixture("dafny_sorted.py"), *sorted, 40, 3);
  CHECK(c.precondition_rejections > 0);
  CHECK(c.postcondition_violations == 0);
}

TEST_CASE("self violating contract reports violations") {
  if (!testsupport::python_available()) return;
  Runner runner;
  const auto* sorted = contract_problems().find("abs-sorted");
  auto c = runner.check_contracts(contract_fixture("self_violating.py"), *sorted, 40, 3);
  CHECK(c.postcondition_violations + c.invariant_violations + c.faults > 0);
}

TEST_CASE("vacuity verdicts on the contract fixtures") {
  if (!testsupport::python_available()) return;
  Runner runner;
  const auto* sorted = contract_problems().find("abs-sorted");
  REQUIRE(sorted);
  auto free = runner.vacuity_check(contract_fixture("contract_free.py"), *sorted);
  CHECK(free.verdict == Vacuity::Vacuous);

  auto dafny = runner.vacuity_check(contract_fixture("dafny_sorted.py"), *sorted);
  CHECK(dafny.verdict == Vacuity::NonVacuous);
  CHECK(dafny.mutants_total == kDefaultMutants);
  CHECK(dafny.mutants_rejected >= 1);
  CHECK(dafny.rejected_mutants.size() == dafny.mutants_rejected);

  auto bad = runner.vacuity_check(contract_fixture("self_violating.py"), *sorted);
  CHECK(bad.verdict == Vacuity::InconsistentSpec);

  auto again = runner.vacuity_check(contract_fixture("dafny_sorted.py"), *sorted);
  CHECK(again.rejected_mutants == dafny.rejected_mutants);
}

TEST_CASE("embedded harness sources are present") {
  CHECK(text::contains(harness_source(), "def "));
  CHECK(text::contains(deal_shim_source(), "def pre"));
}

TEST_CASE("adding post clauses never loses rejected mutants") {
  if (!testsupport::python_available()) return;
  Runner runner;
  const auto* sorted = contract_problems().find("abs-sorted");
  REQUIRE(sorted);
  auto base = contract_fixture("dafny_sorted.py");
  auto stronger = text::replace_all(base, "@deal.chain(\n",
                                    "@deal.chain(\n    deal.post(lambda result: len(result) >= 0),\n"
                                    "    deal.ensure(lambda data, result: len(result) == len(data)),\n");
  REQUIRE(stronger != base);
  auto a = runner.vacuity_check(base, *sorted, kDefaultMutants, 9);
  auto b = runner.vacuity_check(stronger, *sorted, kDefaultMutants, 9);
  CHECK(a.mutants == b.mutants);
  for (const auto& m : a.rejected_mutants)
    CHECK(std::find(b.rejected_mutants.begin(), b.rejected_mutants.end(), m) != b.rejected_mutants.end());
  CHECK(b.mutants_rejected >= a.mutants_rejected);
}
