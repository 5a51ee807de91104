#pragma once

#include "bridge/metrics/pass_at_k.hpp"

#include <bit>
#include <cstdint>

namespace testsupport {

/// Probability that a uniformly drawn k-subset of n candidates (the first c correct) contains a
/// correct one, by counting every subset.
inline bridge::metrics::Rational brute_force_pass_at_k(unsigned n, unsigned c, unsigned k) {
  std::uint64_t hits = 0, total = 0;
  const std::uint32_t correct = (1u << c) - 1;
  for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
    if (static_cast<unsigned>(std::popcount(mask)) != k) continue;
    ++total;
    if (mask & correct) ++hits;
  }
  return bridge::metrics::Rational(hits, total);
}

/// Every (n, c, k) with n <= max_n where the estimator differs from brute force.
inline std::size_t pass_at_k_mismatches(unsigned max_n) {
  std::size_t bad = 0;
  for (unsigned n = 1; n <= max_n; ++n)
    for (unsigned c = 0; c <= n; ++c)
      for (unsigned k = 1; k <= n; ++k)
        if (bridge::metrics::pass_at_k_exact(n, c, k) != brute_force_pass_at_k(n, c, k)) ++bad;
  return bad;
}

}  // namespace testsupport
