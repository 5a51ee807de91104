#include "bridge/metrics/stats.hpp"

namespace bridge::metrics {

namespace {

std::optional<WordsTokens> mean(double words, double tokens, std::size_t count) {
  if (count == 0) return std::nullopt;
  return WordsTokens{words / count, tokens / count};
}

}  // namespace

LengthStats length_stats(const std::vector<ChainSummary>& chains) {
  double sw = 0, st = 0, fw = 0, ft = 0;
  LengthStats s;
  for (const auto& c : chains) {
    if (c.status == FinalStatus::Success) {
      sw += c.words;
      st += c.tokens;
      ++s.success_count;
    } else {
      fw += c.words;
      ft += c.tokens;
      ++s.failure_count;
    }
  }
  s.average = mean(sw + fw, st + ft, chains.size());
  s.success_avg = mean(sw, st, s.success_count);
  s.failure_avg = mean(fw, ft, s.failure_count);
  return s;
}

std::map<std::string, double> error_distribution(const std::vector<ChainSummary>& chains) {
  std::map<std::string, std::size_t> counts;
  std::size_t failed = 0;
  for (const auto& c : chains) {
    if (c.status == FinalStatus::Success) continue;
    ++failed;
    for (const auto& cls : c.final_error_classes) ++counts[cls];
  }
  std::map<std::string, double> out;
  for (const auto& [cls, n] : counts) out[cls] = static_cast<double>(n) / failed;
  return out;
}

}  // namespace bridge::metrics
