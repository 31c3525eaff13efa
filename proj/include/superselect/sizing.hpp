#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numbers>
#include <vector>

#include "superselect/combinations.hpp"
#include "superselect/core.hpp"
#include "superselect/errors.hpp"

namespace superselect {

/// Entry distribution used by the probabilistic and derandomized
/// constructions: Pr[entry = 0] = x = (p-1)/p. alpha is the probability that
/// a row restricted to `width` columns equals one given row of I_width.
struct SampleDistribution {
  std::size_t p = 1;
  std::size_t width = 1;
  double x = 0.0;
  double alpha = 1.0;

  static SampleDistribution make(std::size_t p, std::size_t width) {
    if (p < 1 || width < 1) throw input_error("sample distribution: p and width must be positive");
    SampleDistribution d;
    d.p = p;
    d.width = width;
    d.x = static_cast<double>(p - 1) / static_cast<double>(p);
    d.alpha = std::pow(d.x, static_cast<double>(width - 1)) * (1.0 - d.x);
    return d;
  }
  static SampleDistribution make(std::size_t p) { return make(p, p); }
};

enum class BoundFormula {
  superselector_upper,      // min of the two per-level coefficients
  superselector_existence,  // probabilistic existence argument, 3pej/(j-v_j+1) only
  selector_upper,
  superselector_lower,
  derand_threshold,
};

struct LevelTerm {
  std::size_t j = 0;
  double coefficient = 0.0;  // k_j, c_j, or the level's multiplier
  double value = 0.0;        // coefficient * log2(n/j), or the level's full term
};

struct SizeBound {
  std::size_t m = 1;
  std::vector<LevelTerm> per_level;
  BoundFormula formula = BoundFormula::superselector_upper;
};

namespace detail {

inline const double kLog2E = std::numbers::log2e;
inline const double kE = std::numbers::e;

inline std::size_t ceil_rows(double value) {
  if (!(value > 0.0)) return 0;
  return static_cast<std::size_t>(std::ceil(value - 1e-12));
}

template <class Coefficient>
SizeBound per_level_max(const SuperSelectorSpec& spec, BoundFormula formula, Coefficient&& coefficient) {
  spec.validate();
  SizeBound bound;
  bound.formula = formula;
  double best = 0.0;
  for (std::size_t j = 1; j <= spec.p; ++j) {
    if (spec.level(j) == 0) continue;
    const double c = coefficient(j, spec.level(j));
    const double value = c * std::log2(static_cast<double>(spec.n) / static_cast<double>(j));
    bound.per_level.push_back({j, c, value});
    best = std::max(best, value);
  }
  bound.m = std::max<std::size_t>(1, ceil_rows(best));
  return bound;
}

}  // namespace detail

/// k_j = min{3pej/(j-v_j+1), e j^2 / log2 e}; m = ceil(max_j k_j log2(n/j)).
inline SizeBound superselector_upper_bound(const SuperSelectorSpec& spec) {
  const double p = static_cast<double>(spec.p);
  return detail::per_level_max(spec, BoundFormula::superselector_upper, [&](std::size_t j, std::size_t vj) {
    const double jd = static_cast<double>(j);
    const double first = 3.0 * p * detail::kE * jd / static_cast<double>(j - vj + 1);
    const double second = detail::kE * jd * jd / detail::kLog2E;
    return std::min(first, second);
  });
}

/// The single-branch bound of the random construction: m = max_j 3pej/(j-v_j+1) log2(n/j).
inline SizeBound superselector_existence_bound(const SuperSelectorSpec& spec) {
  const double p = static_cast<double>(spec.p);
  return detail::per_level_max(spec, BoundFormula::superselector_existence, [&](std::size_t j, std::size_t vj) {
    return 3.0 * p * detail::kE * static_cast<double>(j) / static_cast<double>(j - vj + 1);
  });
}

/// (log2(1 / (1 - (p-k+1) x^{p-1} (1-x))))^{-1} with x = (p-1)/p: the exact
/// multiplier of p log2(n/p) in the sufficient row count of a (p,k,n)-selector.
inline double selector_coefficient(std::size_t p, std::size_t k) {
  if (k < 1 || k > p) throw input_error("selector coefficient: need 1 <= k <= p");
  const auto dist = SampleDistribution::make(p);
  const double q = static_cast<double>(p - k + 1) * dist.alpha;
  const double denom = -std::log2(1.0 - q);  // +inf when q == 1
  return 1.0 / denom;
}

/// (log2(e / (e - 1 + k/p)))^{-1}; infinite at k = p.
inline double selector_coefficient_limit(std::size_t p, std::size_t k) {
  const double eps = 1.0 - static_cast<double>(k) / static_cast<double>(p);
  return 1.0 / std::log2(detail::kE / (detail::kE - eps));
}

/// A_{p,k} = (2p-k+1) log2 e + (p-k+1) log2(p/(p-k+1)).
inline double selector_additive_constant(std::size_t p, std::size_t k) {
  const double pd = static_cast<double>(p);
  const double q = static_cast<double>(p - k + 1);
  return (2.0 * pd - static_cast<double>(k) + 1.0) * detail::kLog2E + q * std::log2(pd / q);
}

/// Row count c * (p log2(n/p) + A_{p,k}) sufficient for a (p,k,n)-selector.
inline SizeBound selector_upper_bound(std::size_t p, std::size_t k, std::size_t n) {
  if (k < 1) throw input_error("selector bound: k must be at least 1");
  if (k > p) throw input_error("selector bound: k exceeds p");
  if (p >= n) throw input_error("selector bound: need p < n");
  const double c = selector_coefficient(p, k);
  const double pd = static_cast<double>(p);
  const double value = c * (pd * std::log2(static_cast<double>(n) / pd) + selector_additive_constant(p, k));
  SizeBound bound;
  bound.formula = BoundFormula::selector_upper;
  bound.per_level.push_back({p, c, value});
  bound.m = std::max<std::size_t>(1, detail::ceil_rows(value));
  return bound;
}

/// max_j j^2/(j-v_j+1) * log2(n/j) / (log2(j/(j-v_j+1)) + 1). Advisory only;
/// the hidden O(1) is fixed to 1. May be 0.
inline SizeBound superselector_lower_bound(const SuperSelectorSpec& spec) {
  spec.validate();
  SizeBound bound;
  bound.formula = BoundFormula::superselector_lower;
  double best = 0.0;
  for (std::size_t j = 1; j <= spec.p; ++j) {
    const std::size_t vj = spec.level(j);
    if (vj == 0) continue;
    const double jd = static_cast<double>(j);
    const double q = static_cast<double>(j - vj + 1);
    const double c = jd * jd / q / (std::log2(jd / q) + 1.0);
    const double value = c * std::log2(static_cast<double>(spec.n) / jd);
    bound.per_level.push_back({j, c, value});
    best = std::max(best, value);
  }
  bound.m = detail::ceil_rows(best);
  return bound;
}

/// sum_j C(n,j) C(j, j-v_j+1) (1 - (j-v_j+1) x^{j-1} (1-x))^m, the union
/// bound on the failure probability of a random m-row matrix.
inline double union_bound_failure(const SuperSelectorSpec& spec, std::size_t m) {
  spec.validate();
  double total = 0.0;
  for (std::size_t j = 1; j <= spec.p; ++j) {
    const std::size_t vj = spec.level(j);
    if (vj == 0) continue;
    const auto dist = SampleDistribution::make(spec.p, j);
    const double q = static_cast<double>(j - vj + 1);
    const double log_term = log_binomial(static_cast<double>(spec.n), static_cast<double>(j)) +
                            log_binomial(static_cast<double>(j), q) +
                            static_cast<double>(m) * std::log1p(-q * dist.alpha);
    total += std::exp(log_term);
  }
  return total;
}

/// Smallest m >= 1 for which the union bound leaves positive success
/// probability. This is the row count every constructor uses.
inline std::size_t derand_threshold(const SuperSelectorSpec& spec) {
  spec.validate();
  if (spec.vacuous()) return 1;
  // Each summand is nonincreasing in m: find a bracketing power of two, then bisect.
  std::size_t hi = 1;
  while (union_bound_failure(spec, hi) >= 1.0) {
    if (hi > (std::size_t{1} << 40)) throw invariant_violation("derand threshold does not converge");
    hi *= 2;
  }
  std::size_t lo = hi / 2;  // failure(lo) >= 1 unless lo == 0
  while (lo + 1 < hi) {
    const std::size_t mid = lo + (hi - lo) / 2;
    if (union_bound_failure(spec, mid) < 1.0) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  return hi;
}

/// Split level of the stacked construction:
/// max{ j : v_j >= 1 and 3pej/(j-v_j+1) > e j^2 / log2 e }, or 0.
inline std::size_t stacked_split_level(const SuperSelectorSpec& spec) {
  spec.validate();
  std::size_t split = 0;
  const double p = static_cast<double>(spec.p);
  for (std::size_t j = 1; j <= spec.p; ++j) {
    const std::size_t vj = spec.level(j);
    if (vj == 0) continue;
    const double jd = static_cast<double>(j);
    if (3.0 * p * detail::kE * jd / static_cast<double>(j - vj + 1) > detail::kE * jd * jd / detail::kLog2E)
      split = j;
  }
  return split;
}

}  // namespace superselect
