#include "bridge/corpus/corpus.hpp"
#include "bridge/metrics/report.hpp"
#include "bridge/pipeline/config.hpp"
#include "bridge/pipeline/pipeline.hpp"
#include "bridge/pipeline/run_store.hpp"
#include "bridge/prompt/strategy.hpp"
#include "bridge/util/error.hpp"
#include "bridge/util/fs.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <iostream>

namespace {

using namespace bridge;
namespace stdfs = std::filesystem;

std::string one_line(std::string s) {
  for (char& c : s)
    if (c == '\n' || c == '\r') c = ' ';
  return s;
}

int exit_code(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::Usage: return 1;
    case ErrorKind::Config: return 2;
    case ErrorKind::Corpus: return 3;
    case ErrorKind::BackendMissing: return 4;
    case ErrorKind::ReplayMiss: return 5;
    case ErrorKind::Provider: return 6;
    case ErrorKind::Io: return 7;
  }
  return 1;
}

corpus::ProblemSet load_problems(const pipeline::RunConfig& config) {
  auto set = corpus::load_manifest(config.corpus);
  if (!config.problems.empty()) set = corpus::filter_by_ids(set, config.problems);
  if (set.empty()) throw Error(ErrorKind::Config, "no problems selected from " + config.corpus.string());
  return set;
}

std::string execute_run(pipeline::RunConfig config, const std::string& requested_id, const std::string& runs_dir) {
  if (!runs_dir.empty()) config.runs_dir = stdfs::absolute(runs_dir);
  auto problems = load_problems(config);
  auto services = pipeline::make_services(config);
  pipeline::Pipeline pipe(config, problems, services);
  std::vector<pipeline::RunRecord> records;
  std::vector<std::chrono::milliseconds> elapsed;
  if (!config.temperature_grid.empty()) {
    for (std::size_t i = 0; i < config.temperature_grid.size(); ++i) {
      auto start = std::chrono::steady_clock::now();
      records.push_back(pipe.run_grid({config.temperature_grid[i], config.seed ^ static_cast<std::int64_t>(i)}));
      elapsed.push_back(std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() - start));
    }
  } else {
    auto start = std::chrono::steady_clock::now();
    records.push_back(pipe.run_grid({config.decoding.temperature, config.seed}));
    elapsed.push_back(std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() - start));
  }
  std::string id = requested_id.empty() ? pipeline::new_run_id(config) : requested_id;
  return pipeline::write_run(config, services, records, elapsed, id).string();
}

stdfs::path locate_run(const std::string& run, const std::string& runs_dir) {
  stdfs::path direct(run);
  std::error_code ec;
  if (stdfs::exists(direct / "manifest.json", ec)) return direct;
  stdfs::path under = stdfs::path(runs_dir) / run;
  if (stdfs::exists(under / "manifest.json", ec)) return under;
  throw Error(ErrorKind::Usage, "no completed run '" + run + "' under " + runs_dir);
}

std::vector<std::size_t> parse_ladder(const std::vector<std::size_t>& given) {
  return given.empty() ? metrics::kDefaultLadder : given;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Strategy-templated verified synthesis runner"};
  app.require_subcommand(1);

  auto* strategies = app.add_subcommand("strategies", "Print every strategy, one per line");

  std::string validate_target;
  std::string validate_config;
  auto* validate = app.add_subcommand("validate", "Check a corpus manifest or a run config");
  validate->add_option("corpus", validate_target, "Corpus manifest (JSONL)");
  validate->add_option("--config", validate_config, "Run config to resolve and check");

  std::string config_path, run_id, runs_dir, archive, out_dir;
  std::vector<std::string> overrides;
  std::vector<std::size_t> ladder;

  auto add_run_options = [&](CLI::App* cmd, bool config_required) {
    auto* opt = cmd->add_option("-c,--config", config_path, "Run config (JSON)");
    if (config_required) opt->required();
    cmd->add_option("-s,--set", overrides, "Override as dotted.key=value (repeatable)");
    cmd->add_option("--run-id", run_id, "Name for the new run directory");
    cmd->add_option("--runs-dir", runs_dir, "Directory holding runs (defaults to the config's runs_dir)");
  };
  auto* run = app.add_subcommand("run", "Execute the configured grid and store a run record");
  add_run_options(run, true);
  auto* record = app.add_subcommand("record", "As run, storing every completion in the archive");
  add_run_options(record, true);
  auto* replay = app.add_subcommand("replay", "Re-run a config or stored run against the archive only");
  add_run_options(replay, false);
  std::string replay_run;
  replay->add_option("--run", replay_run, "Stored run whose resolved config is replayed");
  replay->add_option("--archive", archive, "Completion archive (defaults to the config's)");

  std::string report_run;
  auto* report = app.add_subcommand("report", "Recompute metrics for a stored run");
  report->add_option("--run", report_run, "Run id or directory")->required();
  report->add_option("--runs-dir", runs_dir, "Directory holding runs (default: runs)");
  report->add_option("--out", out_dir, "Write rows.tsv, curves.jsonl and plot_data.tsv here instead of stdout");
  report->add_option("--ladder", ladder, "k values for pass@k")->delimiter(',');

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "error: usage: " << e.what() << "\n";
    return 1;
  }

  try {
    if (*strategies) {
      for (auto s : prompt::all_strategies()) std::cout << s.qualified() << "\n";
      return 0;
    }
    if (*validate) {
      if (validate_target.empty() && validate_config.empty())
        throw Error(ErrorKind::Usage, "validate needs a corpus path or --config");
      if (!validate_config.empty()) {
        auto config = pipeline::load_config(validate_config);
        auto problems = load_problems(config);
        std::cout << "ok: config " << validate_config << " (" << problems.size() << " problems, "
                  << config.strategies.size() << " strategies, " << config.models.size() << " models)\n";
      }
      if (!validate_target.empty()) {
        auto set = corpus::load_manifest(validate_target);
        std::cout << "ok: " << set.size() << " problems in " << validate_target << "\n";
      }
      return 0;
    }
    if (*run || *record) {
      auto config = pipeline::load_config(config_path, overrides);
      if (*record) {
        config.gateway.mode = gateway::Mode::Record;
        config.validate();
      }
      std::cout << execute_run(config, run_id, runs_dir) << "\n";
      return 0;
    }
    if (*replay) {
      pipeline::RunConfig config;
      if (!replay_run.empty()) {
        config = pipeline::load_run_config(locate_run(replay_run, runs_dir.empty() ? "runs" : runs_dir));
        if (!overrides.empty())
          throw Error(ErrorKind::Usage, "--set is not supported with --run; replay a config file instead");
      } else if (!config_path.empty()) {
        config = pipeline::load_config(config_path, overrides);
      } else {
        throw Error(ErrorKind::Usage, "replay needs --run or --config");
      }
      if (!archive.empty()) config.gateway.archive = stdfs::absolute(archive);
      config.gateway.mode = gateway::Mode::Replay;
      config.validate();
      std::cout << execute_run(config, run_id, runs_dir) << "\n";
      return 0;
    }
    if (*report) {
      auto dir = locate_run(report_run, runs_dir.empty() ? "runs" : runs_dir);
      std::vector<metrics::ChainSummary> summaries;
      for (const auto& c : pipeline::load_chains(dir)) summaries.push_back(pipeline::summarize(c));
      auto k = parse_ladder(ladder);
      if (!out_dir.empty()) {
        metrics::emit_report(summaries, out_dir, k);
      } else {
        std::cout << metrics::render_rows(metrics::compute_rows(summaries, k), k);
      }
      return 0;
    }
  } catch (const Error& e) {
    std::cerr << "error: " << to_string(e.kind()) << ": " << one_line(e.what()) << "\n";
    return exit_code(e.kind());
  } catch (const std::exception& e) {
    std::cerr << "error: internal: " << one_line(e.what()) << "\n";
    return 1;
  }
  return 0;
}
