#include "bridge/proof/intersection.hpp"
#include "bridge/prompt/extract.hpp"
#include "bridge/util/error.hpp"
#include "bridge/util/text.hpp"

#include <json.hpp>

#include <algorithm>
#include <map>

namespace bridge::proof {

using nlohmann::json;
using ordered_json = nlohmann::ordered_json;

IntersectionReport intersect(const std::string& problem_id, const std::vector<PathwayGroup>& groups,
                             std::size_t threshold) {
  if (groups.empty()) throw Error(ErrorKind::Usage, "intersection needs at least one pathway group");
  if (threshold == 0) throw Error(ErrorKind::Usage, "intersection threshold must be at least 1");

  IntersectionReport r;
  r.problem_id = problem_id;
  r.threshold = threshold;
  r.pathways = groups;

  std::map<TheoremCategory, std::size_t> pathway_counts;
  for (const auto& g : groups) {
    std::set<TheoremCategory> present;
    for (const auto& c : g.candidates) present.insert(c.categories.begin(), c.categories.end());
    for (auto cat : present) ++pathway_counts[cat];
  }
  for (const auto& [cat, n] : pathway_counts) {
    if (n >= threshold) r.common_concepts.insert(cat);
    if (n >= 2) r.shared_properties.insert(cat);
    if (n == 1) r.pathway_specific.insert(cat);
  }
  for (auto cat : r.common_concepts) {
    const std::string* best = nullptr;
    for (const auto& g : groups)
      for (const auto& c : g.candidates)
        if (c.categories.count(cat) && (!best || c.name < *best)) best = &c.name;
    if (!best) continue;
    r.selection.emplace_back(cat, *best);
    if (std::find(r.robust_theorems.begin(), r.robust_theorems.end(), *best) == r.robust_theorems.end())
      r.robust_theorems.push_back(*best);
  }
  return r;
}

namespace {

const TheoremCandidate* find_candidate(const IntersectionReport& r, const std::string& name) {
  for (const auto& g : r.pathways)
    for (const auto& c : g.candidates)
      if (c.name == name) return &c;
  return nullptr;
}

/// Implementation text with every theorem declaration removed.
std::string strip_theorems(std::string_view impl) {
  std::string out;
  std::size_t pos = 0;
  for (const auto& span : prompt::theorem_spans(impl)) {
    out.append(impl.substr(pos, span.start - pos));
    pos = span.end;
  }
  out.append(impl.substr(pos));
  // collapse the blank runs left behind
  std::vector<std::string> lines;
  for (auto& line : text::split_lines(out)) {
    if (text::trim(line).empty() && (lines.empty() || text::trim(lines.back()).empty())) continue;
    lines.push_back(std::move(line));
  }
  while (!lines.empty() && text::trim(lines.back()).empty()) lines.pop_back();
  return text::join(lines, "\n");
}

ordered_json category_list(const std::set<TheoremCategory>& cats) {
  ordered_json arr = ordered_json::array();
  for (auto c : cats) arr.push_back(snake_name(c));
  return arr;
}

std::set<TheoremCategory> parse_category_list(const json& arr) {
  std::set<TheoremCategory> out;
  for (const auto& v : arr) out.insert(parse_category(v.get<std::string>()));
  return out;
}

}  // namespace

std::string complete_lean_file(const IntersectionReport& report, std::string_view implementation) {
  std::string out = strip_theorems(implementation);
  for (const auto& name : report.robust_theorems) {
    if (const auto* c = find_candidate(report, name)) out += "\n\n" + c->text;
  }
  return out + "\n";
}

std::string emit_meta_analysis(const IntersectionReport& report, std::string_view implementation) {
  ordered_json doc;
  doc["problem_id"] = report.problem_id;
  doc["threshold"] = report.threshold;

  ordered_json analysis;
  analysis["common_concepts"] = category_list(report.common_concepts);
  analysis["shared_properties"] = category_list(report.shared_properties);
  analysis["robust_theorems"] = report.robust_theorems;
  ordered_json insights = ordered_json::array();
  for (auto cat : report.pathway_specific) {
    for (const auto& g : report.pathways) {
      bool has = std::any_of(g.candidates.begin(), g.candidates.end(),
                             [&](const TheoremCandidate& c) { return c.categories.count(cat) > 0; });
      if (has) insights.push_back(std::string(snake_name(cat)) + " (" + g.pathway.qualified() + ")");
    }
  }
  analysis["pathway_specific_insights"] = insights;
  doc["intersection_analysis"] = analysis;

  ordered_json selection = ordered_json::array();
  for (const auto& [cat, name] : report.selection)
    selection.push_back(name + ": " + std::string(description(cat)));
  doc["final_theorem_selection"] = selection;
  doc["complete_Lean_file"] = complete_lean_file(report, implementation);

  ordered_json pathways = ordered_json::object();
  for (const auto& g : report.pathways) {
    ordered_json list = ordered_json::array();
    for (const auto& c : g.candidates) {
      ordered_json cj;
      cj["name"] = c.name;
      cj["statement"] = c.statement;
      cj["proof"] = c.proof;
      cj["text"] = c.text;
      cj["categories"] = category_list(c.categories);
      cj["has_sorry"] = c.has_sorry;
      list.push_back(std::move(cj));
    }
    pathways[g.pathway.qualified()] = std::move(list);
  }
  doc["pathway_candidates"] = pathways;
  return doc.dump(2) + "\n";
}

IntersectionReport parse_meta_analysis(std::string_view document) {
  try {
    auto doc = json::parse(document);
    IntersectionReport r;
    r.problem_id = doc.at("problem_id").get<std::string>();
    r.threshold = doc.at("threshold").get<std::size_t>();
    const auto& a = doc.at("intersection_analysis");
    r.common_concepts = parse_category_list(a.at("common_concepts"));
    r.shared_properties = parse_category_list(a.at("shared_properties"));
    r.robust_theorems = a.at("robust_theorems").get<std::vector<std::string>>();
    for (const auto& s : a.at("pathway_specific_insights")) {
      std::string entry = s.get<std::string>();
      r.pathway_specific.insert(parse_category(entry.substr(0, entry.find(" ("))));
    }
    for (const auto& s : doc.at("final_theorem_selection")) {
      std::string entry = s.get<std::string>();
      auto colon = entry.find(": ");
      if (colon == std::string::npos) throw Error(ErrorKind::Usage, "malformed selection entry '" + entry + "'");
      std::string desc = entry.substr(colon + 2);
      std::optional<TheoremCategory> cat;
      for (auto c : kAllCategories)
        if (description(c) == desc) cat = c;
      if (!cat) throw Error(ErrorKind::Usage, "unknown category description '" + desc + "'");
      r.selection.emplace_back(*cat, entry.substr(0, colon));
    }
    // object keys come back sorted; pathways are restored in taxonomy order
    const auto& pc = doc.at("pathway_candidates");
    for (auto pathway : prompt::list_strategies(prompt::Domain::Proof)) {
      auto it = pc.find(pathway.qualified());
      if (it == pc.end()) continue;
      PathwayGroup g{pathway, {}};
      for (const auto& cj : *it) {
        TheoremCandidate c;
        c.name = cj.at("name").get<std::string>();
        c.statement = cj.at("statement").get<std::string>();
        c.proof = cj.at("proof").get<std::string>();
        c.text = cj.at("text").get<std::string>();
        c.categories = parse_category_list(cj.at("categories"));
        c.has_sorry = cj.at("has_sorry").get<bool>();
        c.pathway = pathway;
        g.candidates.push_back(std::move(c));
      }
      r.pathways.push_back(std::move(g));
    }
    return r;
  } catch (const json::exception& e) {
    throw Error(ErrorKind::Usage, std::string("malformed meta-analysis document: ") + e.what());
  }
}

}  // namespace bridge::proof
