#include "bridge/pipeline/chain.hpp"
#include "bridge/util/error.hpp"

#include <json.hpp>

namespace bridge::pipeline {

using nlohmann::json;
using ordered_json = nlohmann::ordered_json;

LeanResult LeanResult::from(const lean::VerificationOutcome& o) {
  LeanResult r;
  r.status = o.status;
  r.compiled = o.compiled;
  for (auto c : o.error_classes) r.error_classes.emplace_back(lean::to_string(c));
  for (const auto& d : o.diagnostics)
    if (d.severity == lean::Severity::Error) r.diagnostics.push_back(lean::format(d));
  r.sorry_count = o.sorry_count;
  r.guard_failures = o.guard_failures;
  r.note = o.note;
  return r;
}

PythonResult PythonResult::from(const python::TestOutcome& o) {
  PythonResult r;
  r.total = o.total;
  r.passed = o.passed;
  if (o.fault) r.fault = std::string(python::to_string(*o.fault));
  r.fault_detail = o.fault_detail;
  for (const auto& f : o.failures)
    r.failures.push_back("test " + std::to_string(f.index) + ": expected " + f.expected + ", got " + f.observed);
  return r;
}

namespace {

lean::Status parse_status(std::string_view s) {
  for (auto st : {lean::Status::Verified, lean::Status::CompileFailed, lean::Status::Timeout, lean::Status::ToolMissing})
    if (lean::to_string(st) == s) return st;
  throw Error(ErrorKind::Io, "unknown Lean status '" + std::string(s) + "'");
}

python::Vacuity parse_vacuity(std::string_view s) {
  for (auto v : {python::Vacuity::NonVacuous, python::Vacuity::Vacuous, python::Vacuity::InconsistentSpec})
    if (python::to_string(v) == s) return v;
  throw Error(ErrorKind::Io, "unknown vacuity verdict '" + std::string(s) + "'");
}

python::Fault parse_fault(std::string_view s) {
  for (auto f : {python::Fault::RuntimeError, python::Fault::Timeout, python::Fault::Crash})
    if (python::to_string(f) == s) return f;
  throw Error(ErrorKind::Io, "unknown fault '" + std::string(s) + "'");
}

FinalStatus parse_final(std::string_view s) {
  for (auto f : {FinalStatus::Success, FinalStatus::Failure, FinalStatus::ExtractedNoArtifact})
    if (to_string(f) == s) return f;
  throw Error(ErrorKind::Io, "unknown final status '" + std::string(s) + "'");
}

template <typename T>
ordered_json opt(const std::optional<T>& v) {
  return v ? ordered_json(*v) : ordered_json(nullptr);
}

template <typename T>
std::optional<T> opt_get(const json& j, const char* key) {
  auto it = j.find(key);
  if (it == j.end() || it->is_null()) return std::nullopt;
  return it->get<T>();
}

ordered_json completion_json(const gateway::CompletionRecord& c) {
  ordered_json j;
  j["model_id"] = c.model_id;
  j["prompt_digest"] = c.prompt_digest;
  j["sample_index"] = c.sample_index;
  j["text"] = c.text;
  j["reported_tokens"] = opt(c.reported_tokens);
  return j;
}

gateway::CompletionRecord completion_from(const json& j) {
  gateway::CompletionRecord c;
  c.model_id = j.at("model_id").get<std::string>();
  c.prompt_digest = j.at("prompt_digest").get<std::string>();
  c.sample_index = j.at("sample_index").get<int>();
  c.text = j.at("text").get<std::string>();
  c.reported_tokens = opt_get<std::size_t>(j, "reported_tokens");
  return c;
}

ordered_json lean_json(const LeanResult& l) {
  ordered_json j;
  j["status"] = lean::to_string(l.status);
  j["compiled"] = l.compiled;
  j["error_classes"] = l.error_classes;
  j["diagnostics"] = l.diagnostics;
  j["sorry_count"] = l.sorry_count;
  j["guard_failures"] = l.guard_failures;
  j["note"] = l.note;
  return j;
}

LeanResult lean_from(const json& j) {
  LeanResult l;
  l.status = parse_status(j.at("status").get<std::string>());
  l.compiled = j.at("compiled").get<bool>();
  l.error_classes = j.at("error_classes").get<std::vector<std::string>>();
  l.diagnostics = j.at("diagnostics").get<std::vector<std::string>>();
  l.sorry_count = j.at("sorry_count").get<int>();
  l.guard_failures = j.at("guard_failures").get<int>();
  l.note = j.at("note").get<std::string>();
  return l;
}

ordered_json python_json(const PythonResult& p) {
  ordered_json j;
  j["total"] = p.total;
  j["passed"] = p.passed;
  j["fault"] = opt(p.fault);
  j["fault_detail"] = p.fault_detail;
  j["failures"] = p.failures;
  return j;
}

PythonResult python_from(const json& j) {
  PythonResult p;
  p.total = j.at("total").get<std::size_t>();
  p.passed = j.at("passed").get<std::size_t>();
  p.fault = opt_get<std::string>(j, "fault");
  p.fault_detail = j.at("fault_detail").get<std::string>();
  p.failures = j.at("failures").get<std::vector<std::string>>();
  return p;
}

ordered_json contracts_json(const python::ContractReport& c) {
  ordered_json j;
  j["trials"] = c.trials;
  j["precondition_rejections"] = c.precondition_rejections;
  j["postcondition_violations"] = c.postcondition_violations;
  j["invariant_violations"] = c.invariant_violations;
  j["faults"] = c.faults;
  j["fault"] = c.fault ? ordered_json(python::to_string(*c.fault)) : ordered_json(nullptr);
  j["fault_detail"] = c.fault_detail;
  return j;
}

python::ContractReport contracts_from(const json& j) {
  python::ContractReport c;
  c.trials = j.at("trials").get<std::size_t>();
  c.precondition_rejections = j.at("precondition_rejections").get<std::size_t>();
  c.postcondition_violations = j.at("postcondition_violations").get<std::size_t>();
  c.invariant_violations = j.at("invariant_violations").get<std::size_t>();
  c.faults = j.at("faults").get<std::size_t>();
  if (auto f = opt_get<std::string>(j, "fault")) c.fault = parse_fault(*f);
  c.fault_detail = j.at("fault_detail").get<std::string>();
  return c;
}

ordered_json vacuity_json(const python::VacuityVerdict& v) {
  ordered_json j;
  j["verdict"] = python::to_string(v.verdict);
  j["mutants_total"] = v.mutants_total;
  j["mutants_rejected"] = v.mutants_rejected;
  j["mutants"] = v.mutants;
  j["rejected_mutants"] = v.rejected_mutants;
  j["detail"] = v.detail;
  return j;
}

python::VacuityVerdict vacuity_from(const json& j) {
  python::VacuityVerdict v;
  v.verdict = parse_vacuity(j.at("verdict").get<std::string>());
  v.mutants_total = j.at("mutants_total").get<std::size_t>();
  v.mutants_rejected = j.at("mutants_rejected").get<std::size_t>();
  v.mutants = j.at("mutants").get<std::vector<std::string>>();
  v.rejected_mutants = j.at("rejected_mutants").get<std::vector<std::string>>();
  v.detail = j.at("detail").get<std::string>();
  return v;
}

}  // namespace

std::string chain_to_json(const AttemptChain& chain) {
  ordered_json j;
  j["model"] = chain.model;
  j["problem_id"] = chain.problem_id;
  j["strategy"] = chain.strategy;
  j["temperature"] = chain.temperature;
  j["sample_index"] = chain.sample_index;
  j["final_status"] = to_string(chain.final_status);
  j["notes"] = chain.notes;
  ordered_json rounds = ordered_json::array();
  for (const auto& r : chain.rounds) {
    ordered_json rj;
    rj["round"] = r.index;
    rj["prompt_digest"] = r.prompt_digest;
    rj["completion"] = completion_json(r.completion);
    rj["artifact"] = opt(r.artifact);
    rj["lean"] = r.lean ? lean_json(*r.lean) : ordered_json(nullptr);
    rj["python"] = r.python ? python_json(*r.python) : ordered_json(nullptr);
    rj["contracts"] = r.contracts ? contracts_json(*r.contracts) : ordered_json(nullptr);
    rj["vacuity"] = r.vacuity ? vacuity_json(*r.vacuity) : ordered_json(nullptr);
    ordered_json theorems = ordered_json::array();
    for (const auto& t : r.theorems) {
      ordered_json tj;
      tj["name"] = t.name;
      tj["statement"] = t.statement;
      tj["categories"] = t.categories;
      tj["has_sorry"] = t.has_sorry;
      theorems.push_back(tj);
    }
    rj["theorems"] = theorems;
    if (r.translation) {
      ordered_json tj;
      tj["prompt_digest"] = r.translation->prompt_digest;
      tj["completion"] = completion_json(r.translation->completion);
      tj["artifact"] = opt(r.translation->artifact);
      tj["lean"] = r.translation->lean ? lean_json(*r.translation->lean) : ordered_json(nullptr);
      rj["translation"] = tj;
    } else {
      rj["translation"] = nullptr;
    }
    rj["success"] = r.success;
    rj["words"] = r.words;
    rj["tokens"] = r.tokens;
    rounds.push_back(rj);
  }
  j["rounds"] = rounds;
  return j.dump();
}

AttemptChain chain_from_json(std::string_view line) {
  try {
    json j = json::parse(line);
    AttemptChain c;
    c.model = j.at("model").get<std::string>();
    c.problem_id = j.at("problem_id").get<std::string>();
    c.strategy = j.at("strategy").get<std::string>();
    c.temperature = j.at("temperature").get<double>();
    c.sample_index = j.at("sample_index").get<int>();
    c.final_status = parse_final(j.at("final_status").get<std::string>());
    c.notes = j.at("notes").get<std::vector<std::string>>();
    for (const auto& rj : j.at("rounds")) {
      Round r;
      r.index = rj.at("round").get<int>();
      r.prompt_digest = rj.at("prompt_digest").get<std::string>();
      r.completion = completion_from(rj.at("completion"));
      r.artifact = opt_get<std::string>(rj, "artifact");
      if (!rj.at("lean").is_null()) r.lean = lean_from(rj.at("lean"));
      if (!rj.at("python").is_null()) r.python = python_from(rj.at("python"));
      if (!rj.at("contracts").is_null()) r.contracts = contracts_from(rj.at("contracts"));
      if (!rj.at("vacuity").is_null()) r.vacuity = vacuity_from(rj.at("vacuity"));
      for (const auto& tj : rj.at("theorems")) {
        r.theorems.push_back({tj.at("name").get<std::string>(), tj.at("statement").get<std::string>(),
                              tj.at("categories").get<std::vector<std::string>>(), tj.at("has_sorry").get<bool>()});
      }
      if (const auto& tj = rj.at("translation"); !tj.is_null()) {
        TranslationStage t;
        t.prompt_digest = tj.at("prompt_digest").get<std::string>();
        t.completion = completion_from(tj.at("completion"));
        t.artifact = opt_get<std::string>(tj, "artifact");
        if (!tj.at("lean").is_null()) t.lean = lean_from(tj.at("lean"));
        r.translation = std::move(t);
      }
      r.success = rj.at("success").get<bool>();
      r.words = rj.at("words").get<std::size_t>();
      r.tokens = rj.at("tokens").get<std::size_t>();
      c.rounds.push_back(std::move(r));
    }
    return c;
  } catch (const json::exception& e) {
    throw Error(ErrorKind::Io, std::string("malformed chain record: ") + e.what());
  }
}

metrics::ChainSummary summarize(const AttemptChain& chain) {
  metrics::ChainSummary s;
  s.model = chain.model;
  s.strategy = chain.strategy;
  s.temperature = chain.temperature;
  s.problem_id = chain.problem_id;
  s.status = chain.final_status;
  s.rounds = chain.rounds.size();
  for (const auto& r : chain.rounds) {
    s.words += r.words;
    s.tokens += r.tokens;
  }
  s.compile_only_success = chain.final_status == FinalStatus::Success;
  if (chain.rounds.empty()) return s;

  const Round& last = chain.rounds.back();
  if (last.lean && !last.python) s.compile_only_success = last.lean->compiled;
  if (chain.final_status != FinalStatus::Failure) return s;

  // classes of whichever stage failed last
  const LeanResult* lean = last.lean ? &*last.lean : nullptr;
  if (last.translation && last.translation->lean) lean = &*last.translation->lean;
  if (last.python && !last.python->all_passed()) {
    s.final_error_classes.insert(last.python->fault ? *last.python->fault : "TestFailure");
  } else if (lean) {
    s.final_error_classes.insert(lean->error_classes.begin(), lean->error_classes.end());
    if (lean->status == lean::Status::ToolMissing) s.final_error_classes.insert("ToolMissing");
  }
  return s;
}

}  // namespace bridge::pipeline
