#include "bridge/pipeline/run_store.hpp"
#include "bridge/metrics/report.hpp"
#include "bridge/util/digest.hpp"
#include "bridge/util/error.hpp"
#include "bridge/util/fs.hpp"
#include "bridge/util/text.hpp"

#include <json.hpp>

#include <cctype>
#include <ctime>

namespace bridge::pipeline {

using nlohmann::json;
using ordered_json = nlohmann::ordered_json;
namespace stdfs = std::filesystem;

namespace {

std::string safe_name(std::string_view s) {
  std::string out;
  for (char c : s) out += std::isalnum(static_cast<unsigned char>(c)) || c == '-' || c == '_' || c == '.' ? c : '_';
  return out;
}

std::string digest_of_file(const stdfs::path& p) {
  if (p.empty()) return "";
  std::error_code ec;
  if (stdfs::is_regular_file(p, ec)) return sha256_hex(fs::read_file(p));
  return "";
}

}  // namespace

std::string new_run_id(const RunConfig& config) {
  std::time_t now = std::time(nullptr);
  std::tm tm{};
  gmtime_r(&now, &tm);
  char stamp[32];
  std::strftime(stamp, sizeof stamp, "%Y%m%d-%H%M%S", &tm);
  return std::string(stamp) + "-" + sha256_hex(config_to_json(config)).substr(0, 8);
}

std::string chains_text(const std::vector<RunRecord>& records) {
  std::string out;
  for (const auto& r : records)
    for (const auto& c : r.chains) out += chain_to_json(c) + "\n";
  return out;
}

stdfs::path write_run(const RunConfig& config, const Services& services, const std::vector<RunRecord>& records,
                      const std::vector<std::chrono::milliseconds>& elapsed, const std::string& id) {
  if (id.empty() || id != safe_name(id)) throw Error(ErrorKind::Usage, "invalid run id '" + id + "'");
  stdfs::path final_dir = config.runs_dir / id;
  std::error_code ec;
  if (stdfs::exists(final_dir, ec)) throw Error(ErrorKind::Io, "run directory already exists: " + final_dir.string());
  stdfs::create_directories(config.runs_dir, ec);
  if (ec) throw Error(ErrorKind::Io, "cannot create " + config.runs_dir.string() + ": " + ec.message());
  stdfs::path tmp = fs::make_unique_dir(config.runs_dir, "." + id + ".partial-");

  try {
    std::vector<metrics::ChainSummary> summaries;
    std::size_t chains = 0;
    for (const auto& r : records) {
      chains += r.chains.size();
      for (const auto& c : r.chains) summaries.push_back(summarize(c));
    }
    fs::write_file_atomic(tmp / "chains.jsonl", chains_text(records));

    std::string timings;
    for (std::size_t i = 0; i < records.size(); ++i) {
      ordered_json t;
      t["temperature"] = records[i].params.temperature;
      t["seed"] = records[i].params.seed;
      t["chains"] = records[i].chains.size();
      t["elapsed_ms"] = i < elapsed.size() ? elapsed[i].count() : 0;
      timings += t.dump() + "\n";
    }
    fs::write_file_atomic(tmp / "timings.jsonl", timings);

    for (const auto& r : records) {
      for (const auto& ir : r.intersections) {
        auto dir = tmp / "intersections" / text::format_fixed(r.params.temperature, 2) / safe_name(ir.model);
        stdfs::create_directories(dir);
        fs::write_file_atomic(dir / (safe_name(ir.problem_id) + ".json"), ir.document);
      }
    }

    metrics::emit_report(summaries, tmp / "report", config.ladder);

    if (services.recorded_transcripts) {
      std::string lines;
      std::lock_guard lock(*services.recorded_mutex);
      for (const auto& [digest, t] : *services.recorded_transcripts) lines += lean::transcript_to_json(t) + "\n";
      fs::write_file_atomic(tmp / "lean_transcripts.jsonl", lines);
      if (!config.lean.record_transcripts.empty()) fs::write_file_atomic(config.lean.record_transcripts, lines);
    }

    ordered_json m;
    m["run_id"] = id;
    m["config"] = ordered_json::parse(config_to_json(config));
    ordered_json d;
    d["corpus"] = digest_of_file(config.corpus);
    d["templates"] = services.templates ? services.templates->digest() : "";
    d["mock_script"] = digest_of_file(config.gateway.mock_script);
    d["lean_transcripts"] = digest_of_file(config.lean.transcripts);
    d["chains"] = sha256_hex(chains_text(records));
    m["digests"] = d;
    ordered_json temps = ordered_json::array();
    for (const auto& r : records) temps.push_back(r.params.temperature);
    m["temperatures"] = temps;
    m["chain_count"] = chains;
    fs::write_file_atomic(tmp / "manifest.json", m.dump(2) + "\n");

    stdfs::rename(tmp, final_dir);
  } catch (...) {
    stdfs::remove_all(tmp, ec);
    throw;
  }
  return final_dir;
}

std::vector<AttemptChain> load_chains(const stdfs::path& run_dir) {
  std::string text = fs::read_file(run_dir / "chains.jsonl");
  std::vector<AttemptChain> out;
  for (const auto& line : text::split_lines(text))
    if (!text::trim(line).empty()) out.push_back(chain_from_json(line));
  return out;
}

RunConfig load_run_config(const stdfs::path& run_dir) {
  std::string text = fs::read_file(run_dir / "manifest.json");
  json m = json::parse(text, nullptr, false);
  if (m.is_discarded() || !m.contains("config")) throw Error(ErrorKind::Io, "malformed run manifest in " + run_dir.string());
  return config_from_json(m.at("config").dump(), run_dir);
}

}  // namespace bridge::pipeline
