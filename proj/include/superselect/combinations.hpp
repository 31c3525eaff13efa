#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <numeric>
#include <span>
#include <vector>

namespace superselect {

/// Binomial coefficient, saturating at UINT64_MAX.
inline std::uint64_t binomial(std::uint64_t n, std::uint64_t k) {
  if (k > n) return 0;
  k = std::min(k, n - k);
  std::uint64_t result = 1;
  for (std::uint64_t i = 1; i <= k; ++i) {
    // result * (n - k + i) / i, exact at every step
    const std::uint64_t num = n - k + i;
    const std::uint64_t g = std::gcd(result, i);
    const std::uint64_t r = result / g;
    const std::uint64_t d = i / g;
    if (r > std::numeric_limits<std::uint64_t>::max() / num) return std::numeric_limits<std::uint64_t>::max();
    result = r * (num / d);
  }
  return result;
}

inline double log_binomial(double n, double k) {
  return std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0);
}

inline std::uint64_t saturating_add(std::uint64_t a, std::uint64_t b) {
  return a > std::numeric_limits<std::uint64_t>::max() - b ? std::numeric_limits<std::uint64_t>::max() : a + b;
}

/// Calls fn(span of k sorted indices) for every k-subset of {0..n-1} in
/// colexicographic order. Stops early when fn returns false. Returns false
/// iff stopped early.
template <class Fn>
bool for_each_combination(std::size_t n, std::size_t k, Fn&& fn) {
  if (k > n) return true;
  std::vector<std::size_t> idx(k);
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  while (true) {
    if (!fn(std::span<const std::size_t>(idx))) return false;
    std::size_t i = 0;
    while (i < k) {
      const std::size_t limit = (i + 1 < k) ? idx[i + 1] : n;
      if (idx[i] + 1 < limit) break;
      ++i;
    }
    if (i == k) return true;
    ++idx[i];
    for (std::size_t t = 0; t < i; ++t) idx[t] = t;
  }
}

/// Position of a sorted subset in colexicographic order.
inline std::uint64_t colex_rank(std::span<const std::size_t> subset) {
  std::uint64_t rank = 0;
  for (std::size_t i = 0; i < subset.size(); ++i) rank += binomial(subset[i], i + 1);
  return rank;
}

}  // namespace superselect
