#include "bridge/metrics/report.hpp"
#include "bridge/metrics/pass_at_k.hpp"
#include "bridge/util/error.hpp"
#include "bridge/util/fs.hpp"
#include "bridge/util/text.hpp"

#include <json.hpp>

#include <algorithm>
#include <limits>
#include <map>
#include <tuple>

namespace bridge::metrics {

namespace {

using CellKey = std::tuple<std::string, std::string, std::string>;  // model, strategy, temperature text

std::string temp_text(double t) { return text::format_fixed(t, 2); }

std::string rate(double v) { return text::format_fixed(round_rate(v), 4); }

std::string cell_label(const MetricRow& r) {
  return r.model + "|" + r.strategy + "|" + temp_text(r.temperature);
}

void append_pair(std::string& out, const std::optional<WordsTokens>& wt) {
  if (wt) {
    out += "\t" + text::format_fixed(wt->words, 1) + "\t" + text::format_fixed(wt->tokens, 1);
  } else {
    out += "\t-\t-";
  }
}

}  // namespace

std::vector<MetricRow> compute_rows(const std::vector<ChainSummary>& chains, const std::vector<std::size_t>& ladder) {
  std::vector<CellKey> order;
  std::map<CellKey, std::vector<const ChainSummary*>> cells;
  for (const auto& c : chains) {
    CellKey key{c.model, c.strategy, temp_text(c.temperature)};
    auto [it, inserted] = cells.try_emplace(key);
    if (inserted) order.push_back(key);
    it->second.push_back(&c);
  }

  std::vector<MetricRow> rows;
  for (const auto& key : order) {
    const auto& members = cells[key];
    MetricRow row;
    row.model = std::get<0>(key);
    row.strategy = std::get<1>(key);
    row.temperature = members.front()->temperature;
    row.chains = members.size();

    struct Tally {
      std::size_t n = 0, c = 0, c_compile = 0;
    };
    std::vector<std::string> problem_order;
    std::map<std::string, Tally> per_problem;
    std::vector<ChainSummary> copies;
    double rounds = 0;
    for (const auto* m : members) {
      auto [it, inserted] = per_problem.try_emplace(m->problem_id);
      if (inserted) problem_order.push_back(m->problem_id);
      ++it->second.n;
      if (m->status == FinalStatus::Success) ++it->second.c;
      if (m->compile_only_success) ++it->second.c_compile;
      rounds += m->rounds;
      copies.push_back(*m);
    }
    row.problems = per_problem.size();
    row.mean_rounds = rounds / members.size();
    row.samples = std::numeric_limits<std::size_t>::max();
    for (const auto& [id, t] : per_problem) row.samples = std::min(row.samples, t.n);

    for (std::size_t k : ladder) {
      if (k > row.samples) continue;
      double sum = 0, sum_compile = 0;
      for (const auto& id : problem_order) {
        const auto& t = per_problem[id];
        sum += pass_at_k(t.n, t.c, k);
        sum_compile += pass_at_k(t.n, t.c_compile, k);
      }
      row.pass_at_k.emplace_back(k, sum / row.problems);
      row.pass_at_k_compile_only.emplace_back(k, sum_compile / row.problems);
    }
    row.lengths = length_stats(copies);
    row.errors = error_distribution(copies);
    rows.push_back(std::move(row));
  }
  return rows;
}

std::string render_rows(const std::vector<MetricRow>& rows, const std::vector<std::size_t>& ladder) {
  std::string out = "model\tstrategy\ttemperature\tchains\tproblems\tsamples\tmean_rounds";
  for (std::size_t k : ladder) out += "\tpass@" + std::to_string(k);
  for (std::size_t k : ladder) out += "\tcompile_pass@" + std::to_string(k);
  out += "\tavg_words\tavg_tokens\tsuccess_words\tsuccess_tokens\tfailure_words\tfailure_tokens";
  out += "\tsuccess_chains\tfailure_chains\terror_fractions\n";
  for (const auto& r : rows) {
    out += r.model + "\t" + r.strategy + "\t" + temp_text(r.temperature) + "\t" + std::to_string(r.chains) + "\t" +
           std::to_string(r.problems) + "\t" + std::to_string(r.samples) + "\t" + text::format_fixed(r.mean_rounds, 4);
    for (const auto* series : {&r.pass_at_k, &r.pass_at_k_compile_only}) {
      for (std::size_t k : ladder) {
        auto it = std::find_if(series->begin(), series->end(), [&](const auto& p) { return p.first == k; });
        out += "\t" + (it == series->end() ? std::string("-") : rate(it->second));
      }
    }
    append_pair(out, r.lengths.average);
    append_pair(out, r.lengths.success_avg);
    append_pair(out, r.lengths.failure_avg);
    out += "\t" + std::to_string(r.lengths.success_count) + "\t" + std::to_string(r.lengths.failure_count) + "\t";
    std::vector<std::string> parts;
    for (const auto& [cls, f] : r.errors) parts.push_back(cls + "=" + rate(f));
    out += parts.empty() ? "-" : text::join(parts, ";");
    out += "\n";
  }
  return out;
}

std::string render_curves(const std::vector<MetricRow>& rows) {
  std::string out;
  for (const auto& r : rows) {
    for (std::size_t i = 0; i < r.pass_at_k.size(); ++i) {
      nlohmann::ordered_json j;
      std::size_t k = r.pass_at_k[i].first;
      j["model"] = r.model;
      j["strategy"] = r.strategy;
      j["temperature"] = round_rate(r.temperature);
      j["k"] = k;
      j["pass_at_k"] = round_rate(r.pass_at_k[i].second);
      j["compile_pass_at_k"] = round_rate(r.pass_at_k_compile_only[i].second);
      j["budget_initial"] = k;
      j["budget_total"] = round_rate(k * r.mean_rounds);
      out += j.dump() + "\n";
    }
  }
  return out;
}

std::string render_plot_data(const std::vector<MetricRow>& rows) {
  std::string out = "cell\tk\tpass_at_k\tcompile_pass_at_k\tbudget_initial\tbudget_total\n";
  for (const auto& r : rows) {
    for (std::size_t i = 0; i < r.pass_at_k.size(); ++i) {
      std::size_t k = r.pass_at_k[i].first;
      out += cell_label(r) + "\t" + std::to_string(k) + "\t" + rate(r.pass_at_k[i].second) + "\t" +
             rate(r.pass_at_k_compile_only[i].second) + "\t" + std::to_string(k) + "\t" +
             text::format_fixed(k * r.mean_rounds, 4) + "\n";
    }
  }
  return out;
}

void emit_report(const std::vector<ChainSummary>& chains, const std::filesystem::path& dir,
                 const std::vector<std::size_t>& ladder) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw Error(ErrorKind::Io, "cannot create report directory " + dir.string() + ": " + ec.message());
  auto rows = compute_rows(chains, ladder);
  fs::write_file_atomic(dir / "rows.tsv", render_rows(rows, ladder));
  fs::write_file_atomic(dir / "curves.jsonl", render_curves(rows));
  fs::write_file_atomic(dir / "plot_data.tsv", render_plot_data(rows));
}

}  // namespace bridge::metrics
