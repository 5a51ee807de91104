#include "bridge/python/runner.hpp"
#include "bridge/util/error.hpp"
#include "bridge/util/fs.hpp"
#include "bridge/util/subprocess.hpp"
#include "bridge/util/text.hpp"

#include <json.hpp>

#include <cstdlib>

namespace bridge::python {

using nlohmann::json;

namespace {

json literal_json(const corpus::Literal& lit) {
  return std::visit(
      [](const auto& v) -> json {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, corpus::Literal::List>) {
          json arr = json::array();
          for (const auto& x : v) arr.push_back(literal_json(x));
          return arr;
        } else {
          return json(v);
        }
      },
      lit.value);
}

json type_json(const corpus::SemanticType& t) {
  static const char* kNames[] = {"Int", "Nat", "Bool", "String", "List", "Array"};
  json j = {{"kind", kNames[static_cast<int>(t.kind)]}};
  if (t.elem) j["elem"] = type_json(*t.elem);
  return j;
}

json base_job(const corpus::Problem& p, std::string_view mode) {
  json job;
  job["mode"] = mode;
  job["function"] = p.function_name;
  json params = json::array();
  try {
    for (const auto& t : corpus::param_types(p)) params.push_back(type_json(t));
    job["return_type"] = type_json(corpus::parse_type(p.return_type));
  } catch (const corpus::LiteralError& e) {
    throw Error(ErrorKind::Usage, p.id + ": unsupported type: " + e.what());
  }
  job["params"] = params;
  json tests = json::array();
  for (std::size_t i = 0; i < p.tests.size(); ++i) {
    const auto& t = p.tests[i];
    try {
      json inputs = json::array();
      for (const auto& in : t.inputs) inputs.push_back(literal_json(corpus::parse_literal(in)));
      tests.push_back({{"inputs", inputs},
                       {"expected", literal_json(corpus::parse_literal(t.expected))},
                       {"unordered", t.unordered}});
    } catch (const corpus::LiteralError& e) {
      throw Error(ErrorKind::Usage, "tests[" + std::to_string(i) + "] of " + p.id + ": cannot encode literal: " + e.what());
    }
  }
  job["tests"] = tests;
  return job;
}

std::vector<std::string> scrubbed_env(const std::filesystem::path& workdir) {
  std::vector<std::string> env;
  for (const char* key : {"PATH", "LANG", "LC_ALL", "LC_CTYPE", "TZ"}) {
    if (const char* v = std::getenv(key)) env.push_back(std::string(key) + "=" + v);
  }
  env.push_back("HOME=" + workdir.string());
  env.push_back("TMPDIR=" + workdir.string());
  env.push_back("PYTHONHASHSEED=0");
  env.push_back("PYTHONIOENCODING=utf-8");
  return env;
}

}  // namespace

std::string_view to_string(Fault f) {
  switch (f) {
    case Fault::RuntimeError: return "RuntimeError";
    case Fault::Timeout: return "Timeout";
    case Fault::Crash: return "Crash";
  }
  return "?";
}

std::string_view to_string(Vacuity v) {
  switch (v) {
    case Vacuity::NonVacuous: return "NonVacuous";
    case Vacuity::Vacuous: return "Vacuous";
    case Vacuity::InconsistentSpec: return "InconsistentSpec";
  }
  return "?";
}

struct Runner::Raw {
  std::vector<json> records;
  bool done = false;
  bool timed_out = false;
  std::string err;
  int exit_code = 0;
  std::chrono::milliseconds elapsed{0};
};

Runner::Runner(RunnerOptions options) : options_(std::move(options)) {
  std::string cmd = options_.interpreter;
  if (cmd.empty()) {
    const char* env = std::getenv("BRIDGE_PYTHON_CMD");
    cmd = env && *env ? env : "python3";
  }
  argv_ = text::split_whitespace(cmd);
}

bool Runner::available() const { return !argv_.empty() && !find_executable(argv_.front()).empty(); }

Runner::Raw Runner::execute(std::string_view artifact, const std::string& job) const {
  std::string exe = argv_.empty() ? std::string() : find_executable(argv_.front());
  if (exe.empty())
    throw Error(ErrorKind::BackendMissing,
                "Python interpreter not found: " + (argv_.empty() ? std::string("(empty)") : argv_.front()));

  fs::ScopedDir dir(fs::make_unique_dir(std::filesystem::temp_directory_path(), "bridge-py-"));
  fs::write_file_atomic(dir.path() / "candidate.py", artifact);
  fs::write_file_atomic(dir.path() / "deal.py", deal_shim_source());
  fs::write_file_atomic(dir.path() / "harness.py", harness_source());
  fs::write_file_atomic(dir.path() / "job.json", job);

  ProcessSpec spec;
  spec.argv = argv_;
  spec.argv[0] = exe;
  for (const char* flag : {"-I", "-B", "harness.py"}) spec.argv.emplace_back(flag);
  spec.cwd = dir.path();
  spec.env = scrubbed_env(dir.path());
  spec.timeout = options_.timeout;
  spec.timeout_resets_on_line = true;

  Raw raw;
  ProcessResult r = run_process(spec, [&](std::string_view line) {
    if (text::trim(line).empty()) return;
    try {
      auto rec = json::parse(line);
      if (rec.value("kind", "") == "done") raw.done = true;
      raw.records.push_back(std::move(rec));
    } catch (const json::exception&) {
      // stray output from the candidate; ignored
    }
  });
  if (r.spawn_failed) throw Error(ErrorKind::BackendMissing, "failed to start Python: " + r.err);
  raw.timed_out = r.timed_out;
  raw.err = r.err;
  raw.exit_code = r.signaled ? 128 + r.term_signal : r.exit_code;
  raw.elapsed = r.elapsed;
  return raw;
}

TestOutcome Runner::run_tests(std::string_view artifact, const corpus::Problem& problem) const {
  json job = base_job(problem, "tests");
  Raw raw = execute(artifact, job.dump());
  TestOutcome out;
  out.total = problem.tests.size();
  out.elapsed = raw.elapsed;
  std::vector<bool> seen(out.total, false);
  for (const auto& rec : raw.records) {
    std::string kind = rec.value("kind", "");
    if (kind == "load_error") {
      out.fault = Fault::RuntimeError;
      out.fault_detail = rec.value("error", "");
    }
    if (kind != "test") continue;
    std::size_t i = rec.value("index", std::size_t{0});
    if (i >= out.total || seen[i]) continue;
    seen[i] = true;
    std::string status = rec.value("status", "");
    if (status == "pass") {
      ++out.passed;
      continue;
    }
    std::string observed = status == "error" ? rec.value("error", "") : rec.value("observed", "");
    out.failures.push_back({i, observed, problem.tests[i].expected});
    if (status == "error" && !out.fault) {
      out.fault = Fault::RuntimeError;
      out.fault_detail = "tests[" + std::to_string(i) + "]: " + observed;
    }
  }
  if (raw.timed_out && out.passed < out.total) {
    out.fault = Fault::Timeout;
    out.fault_detail = "no result within " + std::to_string(options_.timeout.count()) + " ms";
  } else if (!raw.done && !out.fault && out.passed < out.total) {
    out.fault = Fault::Crash;
    out.fault_detail = "interpreter exited with status " + std::to_string(raw.exit_code) +
                       (raw.err.empty() ? "" : ": " + std::string(text::trim(raw.err)));
  }
  for (std::size_t i = 0; i < out.total; ++i) {
    if (!seen[i]) out.failures.push_back({i, "(not run)", problem.tests[i].expected});
  }
  return out;
}

ContractReport Runner::check_contracts(std::string_view artifact, const corpus::Problem& problem, std::size_t trials,
                                       std::uint64_t seed) const {
  ContractReport report;
  if (trials == 0) return report;
  json job = base_job(problem, "contracts");
  job["trials"] = trials;
  job["seed"] = seed;
  job["call_budget"] = options_.call_budget.count() / 1000.0;
  Raw raw = execute(artifact, job.dump());
  for (const auto& rec : raw.records) {
    std::string kind = rec.value("kind", "");
    if (kind == "load_error") {
      report.fault = Fault::RuntimeError;
      report.fault_detail = rec.value("error", "");
    }
    if (kind != "trial") continue;
    ++report.trials;
    std::string o = rec.value("outcome", "");
    if (o == "pre") ++report.precondition_rejections;
    else if (o == "post") ++report.postcondition_violations;
    else if (o == "inv") ++report.invariant_violations;
    else if (o == "fault") ++report.faults;
  }
  if (raw.timed_out) {
    report.fault = Fault::Timeout;
    report.fault_detail = "trial exceeded " + std::to_string(options_.timeout.count()) + " ms";
  } else if (!raw.done && !report.fault) {
    report.fault = Fault::Crash;
    report.fault_detail = "interpreter exited with status " + std::to_string(raw.exit_code);
  }
  return report;
}

VacuityVerdict Runner::vacuity_check(std::string_view artifact, const corpus::Problem& problem, std::size_t mutants,
                                     std::uint64_t seed, std::size_t trials) const {
  if (mutants == 0) throw Error(ErrorKind::Usage, "vacuity check needs at least one mutant");
  VacuityVerdict v;
  TestOutcome tests = run_tests(artifact, problem);
  if (!tests.all_passed()) {
    v.verdict = Vacuity::InconsistentSpec;
    v.detail = "reference fails its tests (" + std::to_string(tests.passed) + "/" + std::to_string(tests.total) + ")";
    return v;
  }
  json job = base_job(problem, "vacuity");
  job["trials"] = trials;
  job["seed"] = seed;
  job["mutants"] = mutants;
  job["call_budget"] = options_.call_budget.count() / 1000.0;
  Raw raw = execute(artifact, job.dump());
  bool reference_seen = false;
  for (const auto& rec : raw.records) {
    std::string kind = rec.value("kind", "");
    if (kind == "load_error") throw Error(ErrorKind::Usage, "vacuity check could not load artifact: " + rec.value("error", ""));
    if (kind == "mutant_error") throw Error(ErrorKind::Usage, "mutant construction failed: " + rec.value("error", ""));
    if (kind == "reference") {
      reference_seen = true;
      if (rec.value("inconsistent", false)) {
        v.verdict = Vacuity::InconsistentSpec;
        v.detail = rec.value("detail", "");
        return v;
      }
    }
    if (kind != "mutant") continue;
    std::string name = rec.value("name", "");
    v.mutants.push_back(name);
    if (rec.value("rejected", false)) v.rejected_mutants.push_back(name);
  }
  if (!raw.done || !reference_seen) {
    throw Error(ErrorKind::Usage, std::string("vacuity check did not complete") +
                                      (raw.timed_out ? " (timeout)" : "") +
                                      (raw.err.empty() ? "" : ": " + std::string(text::trim(raw.err))));
  }
  v.mutants_total = v.mutants.size();
  v.mutants_rejected = v.rejected_mutants.size();
  v.verdict = v.mutants_rejected > 0 ? Vacuity::NonVacuous : Vacuity::Vacuous;
  return v;
}

}  // namespace bridge::python
