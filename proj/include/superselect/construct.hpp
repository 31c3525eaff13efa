#pragma once

#include <algorithm>
#include <bit>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "superselect/combinations.hpp"
#include "superselect/core.hpp"
#include "superselect/errors.hpp"
#include "superselect/ftable.hpp"
#include "superselect/sizing.hpp"

namespace superselect {

/// Entries i.i.d. with Pr[0] = (p-1)/p, reproducible from the seed.
inline BitMatrix sample_random_matrix(std::size_t m, std::size_t n, std::size_t p, std::uint64_t seed) {
  if (p < 1) throw input_error("sample_random_matrix: p must be positive");
  BitMatrix matrix(m, n);
  std::mt19937_64 rng(seed);
  for (std::size_t r = 0; r < m; ++r)
    for (std::size_t c = 0; c < n; ++c)
      if (rng() % p == 0) matrix.set(r, c);
  return matrix;
}

struct RandomizedResult {
  BitMatrix matrix;
  std::size_t attempts = 0;
};

/// Samples derand_threshold(spec)-row matrices with seeds seed, seed+1, ...
/// until one passes is_superselector.
inline RandomizedResult construct_randomized(const SuperSelectorSpec& spec, std::uint64_t seed,
                                             std::size_t max_attempts, const VerifyBudget& budget = {}) {
  spec.validate();
  if (max_attempts < 1) throw input_error("construct_randomized: max_attempts must be positive");
  const std::size_t m = derand_threshold(spec);
  for (std::size_t attempt = 0; attempt < max_attempts; ++attempt) {
    auto matrix = sample_random_matrix(m, spec.n, spec.p, seed + attempt);
    if (is_superselector(matrix, spec, budget)) return {std::move(matrix), attempt + 1};
  }
  throw construction_failure("no superselector found in " + std::to_string(max_attempts) + " attempts",
                             max_attempts);
}

/// Progress of one column subset S during the derandomized fill.
struct SubsetProgress {
  std::uint64_t realized = 0;  // bit q set: row e_q of I_|S| already appears in a completed row
  std::uint8_t ones = 0;       // 1s among the fixed entries of the current row, saturating at 2
  std::uint8_t one_pos = 0;    // position within S of that 1 when ones == 1

  std::size_t achieved() const { return static_cast<std::size_t>(std::popcount(realized)); }
};

/// Fixes the entry at position `pos` of S's current row; `width` = |S|.
/// Completing the row folds it into `realized`.
inline SubsetProgress advance(SubsetProgress s, std::size_t width, std::size_t pos, bool bit) {
  if (bit) {
    if (s.ones == 0) {
      s.ones = 1;
      s.one_pos = static_cast<std::uint8_t>(pos);
    } else {
      s.ones = 2;
    }
  }
  if (pos + 1 == width) {
    if (s.ones == 1) s.realized |= std::uint64_t{1} << s.one_pos;
    s.ones = 0;
  }
  return s;
}

/// Probability that S ends with >= target identity rows, given `completed`
/// finished rows and `fixed` entries (< |S|) of the next row recorded in s.
template <class Real>
Real completion_probability(const SubsetProgress& s, std::size_t width, std::size_t target, const FTable<Real>& f,
                            std::size_t m, std::size_t completed, std::size_t fixed) {
  const std::size_t have = s.achieved();
  if (have >= target) return Real(1);
  const auto need = static_cast<std::ptrdiff_t>(target - have);
  const std::size_t missing = width - have;
  if (fixed == 0) return f(m - completed, need, missing);

  const std::size_t after = m - completed - 1;
  const Real stay = f(after, need, missing);
  if (s.ones >= 2) return stay;
  const Real gain = f(after, need - 1, missing - 1);
  const Real x = f.x();
  if (s.ones == 1) {
    if ((s.realized >> s.one_pos) & 1U) return stay;
    // the row becomes e_{one_pos} iff every remaining entry is 0
    const Real zeros = std::pow(x, Real(width - fixed));
    return zeros * gain + (Real(1) - zeros) * stay;
  }
  // all fixed entries 0: candidates are unrealized rows whose 1 sits in the unfixed tail
  const std::uint64_t tail = (width == 64 ? ~std::uint64_t{0} : ((std::uint64_t{1} << width) - 1)) &
                             ~((std::uint64_t{1} << fixed) - 1);
  const auto b = static_cast<std::size_t>(std::popcount(tail & ~s.realized));
  const Real hit = Real(b) * std::pow(x, Real(width - fixed - 1)) * (Real(1) - x);
  return hit * gain + (Real(1) - hit) * stay;
}

/// Conditional probability for one subset S at fill position (r, c): all
/// entries before (r, c) in row-major order are fixed and summarized by s;
/// `bit`, when given, also fixes M[r, c].
template <class Real>
Real conditional_probability(const SubsetProgress& s, std::span<const std::size_t> subset, std::size_t target,
                             const FTable<Real>& f, std::size_t m, std::size_t r, std::size_t c,
                             std::optional<bool> bit = std::nullopt) {
  const std::size_t width = subset.size();
  const auto before = static_cast<std::size_t>(std::lower_bound(subset.begin(), subset.end(), c) - subset.begin());
  if (before == width) return completion_probability(s, width, target, f, m, r + 1, 0);
  const bool in_subset = subset[before] == c;
  if (!bit || !in_subset) return completion_probability(s, width, target, f, m, r, before);
  const SubsetProgress next = advance(s, width, before, *bit);
  if (before + 1 == width) return completion_probability(next, width, target, f, m, r + 1, 0);
  return completion_probability(next, width, target, f, m, r, before + 1);
}

struct DerandOptions {
  bool verify = true;            // brute-force check of the output
  bool record_trace = false;     // keep the running expectation after every fill step
  bool extended_retry = true;    // retry in long double on a precision fault
  VerifyBudget budget{};
};

struct DerandResult {
  BitMatrix matrix;
  double initial_expectation = 0.0;  // E[X] before any entry is fixed
  double final_expectation = 0.0;    // number of satisfied (level, subset) pairs
  std::uint64_t target = 0;          // number of constrained (level, subset) pairs
  double min_step_change = 0.0;      // smallest change of the running expectation over all steps
  std::vector<double> trace;         // running expectation after each step, if recorded
  bool extended_precision = false;
};

/// Running state of the conditional-expectation fill.
template <class Real>
class DerandState {
 public:
  struct Level {
    std::size_t width = 0;
    std::size_t target = 0;
    FTable<Real> table;
    std::vector<std::size_t> members;  // subsets in colex order, `width` indices each
    std::vector<SubsetProgress> progress;

    std::span<const std::size_t> subset(std::size_t i) const {
      return {members.data() + i * width, width};
    }
  };

  DerandState(const SuperSelectorSpec& spec, std::size_t m) : spec_(spec), m_(m) {
    spec.validate();
    if (spec.p > 64) throw input_error("derandomized construction supports p <= 64");
    if (m < 1) throw input_error("derandomized construction needs at least one row");
    for (std::size_t j = 1; j <= spec.p; ++j) {
      const std::size_t vj = spec.level(j);
      if (vj == 0) continue;
      Level level;
      level.width = j;
      level.target = vj;
      level.table = FTable<Real>(m, SampleDistribution::make(spec.p, j), j);
      for_each_combination(spec.n, j, [&](std::span<const std::size_t> s) {
        level.members.insert(level.members.end(), s.begin(), s.end());
        return true;
      });
      level.progress.assign(level.members.size() / j, SubsetProgress{});
      target_ += level.progress.size();
      levels_.push_back(std::move(level));
    }
  }

  std::size_t rows() const { return m_; }
  std::uint64_t target() const { return target_; }
  const std::vector<Level>& levels() const { return levels_; }

  /// X~ summed over all constrained subsets at position (r, c).
  Real expectation(std::size_t r, std::size_t c) const {
    Real total = 0;
    for (const auto& level : levels_)
      for (std::size_t i = 0; i < level.progress.size(); ++i)
        total += conditional_probability(level.progress[i], level.subset(i), level.target, level.table, m_, r, c);
    return total;
  }

  /// Number of subsets whose identity-row target is met by the completed rows.
  std::uint64_t satisfied() const {
    std::uint64_t count = 0;
    for (const auto& level : levels_)
      for (const auto& s : level.progress) count += s.achieved() >= level.target ? 1 : 0;
    return count;
  }

  struct Step {
    bool bit = false;
    Real expectation = 0;  // X~ after fixing the entry
  };

  /// Chooses M[r, c]: 0 iff X~_0 >= X~_1. Only subsets containing c can
  /// differ between the two, so the decision compares their sums alone.
  Step fill(std::size_t r, std::size_t c) {
    Real untouched = 0, with_zero = 0, with_one = 0;
    for (const auto& level : levels_) {
      for (std::size_t i = 0; i < level.progress.size(); ++i) {
        const auto s = level.subset(i);
        if (std::binary_search(s.begin(), s.end(), c)) {
          with_zero += conditional_probability(level.progress[i], s, level.target, level.table, m_, r, c, false);
          with_one += conditional_probability(level.progress[i], s, level.target, level.table, m_, r, c, true);
        } else {
          untouched += conditional_probability(level.progress[i], s, level.target, level.table, m_, r, c);
        }
      }
    }
    const bool bit = !(with_zero >= with_one);
    for (auto& level : levels_) {
      for (std::size_t i = 0; i < level.progress.size(); ++i) {
        const auto s = level.subset(i);
        const auto it = std::lower_bound(s.begin(), s.end(), c);
        if (it != s.end() && *it == c)
          level.progress[i] = advance(level.progress[i], level.width, static_cast<std::size_t>(it - s.begin()), bit);
      }
    }
    return {bit, untouched + (bit ? with_one : with_zero)};
  }

 private:
  SuperSelectorSpec spec_;
  std::size_t m_;
  std::uint64_t target_ = 0;
  std::vector<Level> levels_;
};

/// Fills an m-row matrix entry by entry, maximizing the conditional
/// expectation of the number of satisfied subsets. Does not verify.
template <class Real = double>
DerandResult derandomize(const SuperSelectorSpec& spec, std::size_t m, bool record_trace = false) {
  DerandState<Real> state(spec, m);
  DerandResult result;
  result.matrix = BitMatrix(m, spec.n);
  result.target = state.target();
  Real running = state.expectation(0, 0);
  result.initial_expectation = static_cast<double>(running);
  result.min_step_change = 0.0;
  bool first = true;
  for (std::size_t r = 0; r < m; ++r) {
    for (std::size_t c = 0; c < spec.n; ++c) {
      const auto step = state.fill(r, c);
      result.matrix.set(r, c, step.bit);
      const double change = static_cast<double>(step.expectation - running);
      if (first || change < result.min_step_change) result.min_step_change = change;
      first = false;
      running = step.expectation;
      if (record_trace) result.trace.push_back(static_cast<double>(running));
    }
  }
  result.final_expectation = static_cast<double>(state.satisfied());
  result.extended_precision = sizeof(Real) > sizeof(double);
  return result;
}

namespace detail {

inline DerandResult derandomize_checked(const SuperSelectorSpec& spec, std::size_t m, const DerandOptions& options) {
  auto result = derandomize<double>(spec, m, options.record_trace);
  auto certified = [&](const DerandResult& r) {
    if (r.final_expectation != static_cast<double>(r.target)) return false;
    return !options.verify || is_superselector(r.matrix, spec, options.budget);
  };
  if (certified(result)) return result;
  if (options.extended_retry) {
    result = derandomize<long double>(spec, m, options.record_trace);
    if (certified(result)) return result;
  }
  throw precision_fault("derandomized output failed verification");
}

}  // namespace detail

/// Deterministic (p, v, n)-superselector with derand_threshold(spec) rows.
inline DerandResult construct_derandomized_detailed(const SuperSelectorSpec& spec, const DerandOptions& options = {}) {
  spec.validate();
  return detail::derandomize_checked(spec, derand_threshold(spec), options);
}

inline BitMatrix construct_derandomized(const SuperSelectorSpec& spec, const DerandOptions& options = {}) {
  return construct_derandomized_detailed(spec, options).matrix;
}

/// Full (k*, k*, n)-selector on top of a superselector for the levels above k*.
inline BitMatrix construct_stacked(const SuperSelectorSpec& spec, const DerandOptions& options = {}) {
  spec.validate();
  const std::size_t split = stacked_split_level(spec);
  if (split == 0) return construct_derandomized(spec, options);

  std::vector<std::size_t> full(split);
  for (std::size_t i = 0; i < split; ++i) full[i] = i + 1;
  BitMatrix top = construct_derandomized(SuperSelectorSpec(spec.n, std::move(full)), options);

  std::vector<std::size_t> upper = spec.v;
  std::fill(upper.begin(), upper.begin() + static_cast<std::ptrdiff_t>(split), std::size_t{0});
  SuperSelectorSpec rest(spec.n, std::move(upper));
  BitMatrix result = rest.vacuous() ? std::move(top) : BitMatrix::vstack(top, construct_derandomized(rest, options));
  if (options.verify && !is_superselector(result, spec, options.budget))
    throw precision_fault("stacked output failed verification");
  return result;
}

}  // namespace superselect
