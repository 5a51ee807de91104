#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cstddef>
#include <cstdint>

namespace bridge::metrics {

using Rational = boost::multiprecision::cpp_rational;

/// Unbiased estimator 1 - C(n-c, k) / C(n, k), evaluated exactly.
/// Throws Error(Usage) unless 1 <= k <= n and c <= n.
Rational pass_at_k_exact(std::uint64_t n, std::uint64_t c, std::uint64_t k);
double pass_at_k(std::uint64_t n, std::uint64_t c, std::uint64_t k);

/// Words-to-tokens ratio used when a provider reports no token count.
inline constexpr double kTokensPerWord = 1.383;
std::size_t estimate_tokens(std::size_t words);

/// Rounds to the reporting precision (4 decimals).
double round_rate(double value);

}  // namespace bridge::metrics
