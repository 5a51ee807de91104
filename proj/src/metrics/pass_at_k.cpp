#include "bridge/metrics/pass_at_k.hpp"
#include "bridge/util/error.hpp"

#include <cmath>
#include <string>

namespace bridge::metrics {

namespace {

using boost::multiprecision::cpp_int;

cpp_int choose(std::uint64_t n, std::uint64_t k) {
  if (k > n) return 0;
  if (k > n - k) k = n - k;
  cpp_int r = 1;
  for (std::uint64_t i = 1; i <= k; ++i) {
    r *= n - k + i;
    r /= i;
  }
  return r;
}

}  // namespace

Rational pass_at_k_exact(std::uint64_t n, std::uint64_t c, std::uint64_t k) {
  if (k == 0) throw Error(ErrorKind::Usage, "pass@k: k must be at least 1");
  if (k > n) throw Error(ErrorKind::Usage, "pass@k: k=" + std::to_string(k) + " exceeds n=" + std::to_string(n));
  if (c > n) throw Error(ErrorKind::Usage, "pass@k: c=" + std::to_string(c) + " exceeds n=" + std::to_string(n));
  return Rational(1) - Rational(choose(n - c, k), choose(n, k));
}

double pass_at_k(std::uint64_t n, std::uint64_t c, std::uint64_t k) {
  return pass_at_k_exact(n, c, k).convert_to<double>();
}

std::size_t estimate_tokens(std::size_t words) {
  return static_cast<std::size_t>(std::llround(static_cast<double>(words) * kTokensPerWord));
}

double round_rate(double value) { return std::round(value * 1e4) / 1e4; }

}  // namespace bridge::metrics
