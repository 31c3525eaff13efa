#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "superselect/bit_vector.hpp"
#include "superselect/combinations.hpp"
#include "superselect/errors.hpp"

namespace superselect {

/// Sorted, duplicate-free set of column indices.
class ColumnSet {
 public:
  ColumnSet() = default;
  ColumnSet(std::initializer_list<std::size_t> indices) : ColumnSet(std::vector<std::size_t>(indices)) {}
  explicit ColumnSet(std::vector<std::size_t> indices) : indices_(std::move(indices)) {
    std::sort(indices_.begin(), indices_.end());
    if (std::adjacent_find(indices_.begin(), indices_.end()) != indices_.end())
      throw input_error("column set contains a duplicate index");
  }
  explicit ColumnSet(std::span<const std::size_t> sorted)
      : ColumnSet(std::vector<std::size_t>(sorted.begin(), sorted.end())) {}

  static ColumnSet from_mask(const BitVector& mask) {
    ColumnSet s;
    s.indices_ = mask.ones();
    return s;
  }

  std::size_t size() const { return indices_.size(); }
  bool empty() const { return indices_.empty(); }
  std::size_t operator[](std::size_t i) const { return indices_[i]; }
  auto begin() const { return indices_.begin(); }
  auto end() const { return indices_.end(); }
  const std::vector<std::size_t>& indices() const { return indices_; }

  bool contains(std::size_t c) const { return std::binary_search(indices_.begin(), indices_.end(), c); }

  bool is_subset_of(const ColumnSet& other) const {
    return std::includes(other.begin(), other.end(), begin(), end());
  }

  void check_bounds(std::size_t n) const {
    if (!indices_.empty() && indices_.back() >= n)
      throw input_error("column index " + std::to_string(indices_.back()) + " out of range for " +
                        std::to_string(n) + " columns");
  }

  BitVector to_mask(std::size_t n) const {
    check_bounds(n);
    BitVector mask(n);
    for (std::size_t c : indices_) mask.set(c);
    return mask;
  }

  friend ColumnSet set_union(const ColumnSet& a, const ColumnSet& b) {
    ColumnSet out;
    std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out.indices_));
    return out;
  }
  friend ColumnSet set_difference(const ColumnSet& a, const ColumnSet& b) {
    ColumnSet out;
    std::set_difference(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out.indices_));
    return out;
  }

  friend bool operator==(const ColumnSet&, const ColumnSet&) = default;

  std::string to_string() const {
    std::string s;
    for (std::size_t i = 0; i < indices_.size(); ++i) {
      if (i != 0) s += ',';
      s += std::to_string(indices_[i]);
    }
    return s;
  }

 private:
  std::vector<std::size_t> indices_;
};

/// m x n binary matrix, stored row-major with each row packed into words.
class BitMatrix {
 public:
  BitMatrix() = default;
  BitMatrix(std::size_t rows, std::size_t cols) : cols_(cols), rows_(rows, BitVector(cols)) {
    if (rows == 0 || cols == 0) throw input_error("matrix dimensions must be positive");
  }

  static BitMatrix identity(std::size_t n) {
    BitMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m.set(i, i);
    return m;
  }

  static BitMatrix ones(std::size_t rows, std::size_t cols) {
    BitMatrix m(rows, cols);
    for (std::size_t r = 0; r < rows; ++r)
      for (std::size_t c = 0; c < cols; ++c) m.set(r, c);
    return m;
  }

  static BitMatrix from_rows(const std::vector<std::string>& rows) {
    if (rows.empty()) throw input_error("matrix dimensions must be positive");
    BitMatrix m(rows.size(), rows.front().size());
    for (std::size_t r = 0; r < rows.size(); ++r) {
      if (rows[r].size() != m.cols()) throw input_error("ragged matrix rows");
      m.rows_[r] = BitVector::from_string(rows[r]);
    }
    return m;
  }

  /// Stacks top over bottom.
  static BitMatrix vstack(const BitMatrix& top, const BitMatrix& bottom) {
    if (top.cols() != bottom.cols()) throw input_error("vstack: column counts differ");
    BitMatrix m = top;
    m.rows_.insert(m.rows_.end(), bottom.rows_.begin(), bottom.rows_.end());
    return m;
  }

  std::size_t rows() const { return rows_.size(); }
  std::size_t cols() const { return cols_; }

  bool get(std::size_t r, std::size_t c) const { return rows_[r].test(c); }
  void set(std::size_t r, std::size_t c, bool value = true) { rows_[r].assign(c, value); }

  const BitVector& row(std::size_t r) const { return rows_[r]; }

  BitVector column(std::size_t c) const {
    if (c >= cols_) throw input_error("column index out of range");
    BitVector out(rows());
    for (std::size_t r = 0; r < rows(); ++r)
      if (rows_[r].test(c)) out.set(r);
    return out;
  }

  std::vector<BitVector> columns() const {
    std::vector<BitVector> out(cols_, BitVector(rows()));
    for (std::size_t r = 0; r < rows(); ++r)
      for (std::size_t c : rows_[r].ones()) out[c].set(r);
    return out;
  }

  friend bool operator==(const BitMatrix&, const BitMatrix&) = default;

 private:
  std::size_t cols_ = 0;
  std::vector<BitVector> rows_;
};

/// (p, v, n): a matrix must be an (i, v_i, n)-selector for every i with v_i >= 1.
struct SuperSelectorSpec {
  std::size_t n = 0;
  std::size_t p = 0;
  std::vector<std::size_t> v;  // v[i-1] = v_i

  SuperSelectorSpec() = default;
  SuperSelectorSpec(std::size_t n, std::vector<std::size_t> v) : n(n), p(v.size()), v(std::move(v)) {
    validate();
  }

  /// v_i for 1 <= i <= p; v_0 is taken as 0.
  std::size_t level(std::size_t i) const { return i == 0 ? 0 : v.at(i - 1); }

  bool vacuous() const {
    return std::all_of(v.begin(), v.end(), [](std::size_t x) { return x == 0; });
  }

  void validate() const {
    if (p < 1) throw input_error("spec: p must be at least 1");
    if (v.size() != p) throw input_error("spec: v must have exactly p entries");
    if (n < p) throw input_error("spec: n must be at least p");
    for (std::size_t i = 1; i <= p; ++i)
      if (v[i - 1] > i)
        throw input_error("spec: v_" + std::to_string(i) + " = " + std::to_string(v[i - 1]) + " exceeds " +
                          std::to_string(i));
  }

  friend bool operator==(const SuperSelectorSpec&, const SuperSelectorSpec&) = default;
};

struct VerifyBudget {
  std::uint64_t max_subset_checks = 100'000'000;
};

inline BoolVector boolean_sum(const BitMatrix& m, const ColumnSet& s) {
  s.check_bounds(m.cols());
  BoolVector out(m.rows());
  for (std::size_t r = 0; r < m.rows(); ++r)
    for (std::size_t c : s)
      if (m.get(r, c)) {
        out.set(r);
        break;
      }
  return out;
}

inline IntVector arithmetic_sum(const BitMatrix& m, const ColumnSet& s) {
  s.check_bounds(m.cols());
  IntVector out(m.rows(), 0);
  for (std::size_t r = 0; r < m.rows(); ++r)
    for (std::size_t c : s) out[r] += m.get(r, c) ? 1U : 0U;
  return out;
}

inline bool is_covered(const BoolVector& x, const BoolVector& y) { return x.is_covered_by(y); }

/// Columns c whose column vector is covered by a.
inline ColumnSet covered_columns(const BitMatrix& m, const BoolVector& a) {
  if (a.size() != m.rows()) throw input_error("observation length differs from matrix row count");
  // A column is covered iff it has no 1 in a row where a is 0.
  BitVector uncovered(m.cols());
  for (std::size_t r = 0; r < m.rows(); ++r)
    if (!a.test(r)) uncovered |= m.row(r);
  std::vector<std::size_t> cols;
  for (std::size_t c = 0; c < m.cols(); ++c)
    if (!uncovered.test(c)) cols.push_back(c);
  return ColumnSet(std::move(cols));
}

namespace detail {

// Number of columns in the list that own a 1 in some row where every other
// listed column is 0.
inline std::size_t count_private_columns(std::span<const BitVector* const> cols) {
  const std::size_t j = cols.size();
  if (j == 0) return 0;
  const std::size_t rows = cols.front()->size();
  std::vector<BitVector> suffix(j + 1, BitVector(rows));
  for (std::size_t i = j; i-- > 0;) suffix[i] = suffix[i + 1] | *cols[i];
  BitVector prefix(rows);
  std::size_t count = 0;
  for (std::size_t i = 0; i < j; ++i) {
    BitVector own = *cols[i];
    own.subtract(prefix).subtract(suffix[i + 1]);
    if (own.any()) ++count;
    prefix |= *cols[i];
  }
  return count;
}

inline std::vector<const BitVector*> pick(const std::vector<BitVector>& cols, std::span<const std::size_t> s) {
  std::vector<const BitVector*> out;
  out.reserve(s.size());
  for (std::size_t c : s) out.push_back(&cols[c]);
  return out;
}

inline void charge(std::uint64_t checks, const VerifyBudget& budget, const char* what) {
  if (checks > budget.max_subset_checks)
    throw resource_error(std::string(what) + ": " + std::to_string(checks) +
                         " subset checks exceed the brute-force budget of " +
                         std::to_string(budget.max_subset_checks));
}

}  // namespace detail

/// Distinct rows of I_|S| occurring in M(S), i.e. columns of S with a private 1.
inline std::size_t count_identity_rows(const BitMatrix& m, const ColumnSet& s) {
  s.check_bounds(m.cols());
  std::vector<BitVector> cols;
  cols.reserve(s.size());
  for (std::size_t c : s) cols.push_back(m.column(c));
  std::vector<const BitVector*> ptrs;
  for (const auto& c : cols) ptrs.push_back(&c);
  return detail::count_private_columns(ptrs);
}

/// First p-subset S (colex order) with fewer than k identity rows in M(S).
inline std::optional<ColumnSet> find_selector_violation(const BitMatrix& m, std::size_t p, std::size_t k,
                                                        const VerifyBudget& budget = {}) {
  if (p > m.cols()) throw input_error("selector check: p exceeds the number of columns");
  if (k > p) throw input_error("selector check: k exceeds p");
  if (k == 0) return std::nullopt;
  detail::charge(binomial(m.cols(), p), budget, "selector check");
  const auto cols = m.columns();
  std::optional<ColumnSet> bad;
  for_each_combination(m.cols(), p, [&](std::span<const std::size_t> s) {
    if (detail::count_private_columns(detail::pick(cols, s)) < k) {
      bad = ColumnSet(s);
      return false;
    }
    return true;
  });
  return bad;
}

inline bool is_selector(const BitMatrix& m, std::size_t p, std::size_t k, const VerifyBudget& budget = {}) {
  return !find_selector_violation(m, p, k, budget).has_value();
}

inline bool is_superselector(const BitMatrix& m, const SuperSelectorSpec& spec, const VerifyBudget& budget = {}) {
  spec.validate();
  if (spec.n != m.cols()) throw input_error("spec n differs from matrix column count");
  std::uint64_t total = 0;
  for (std::size_t i = 1; i <= spec.p; ++i)
    if (spec.level(i) > 0) total = saturating_add(total, binomial(spec.n, i));
  detail::charge(total, budget, "superselector check");
  for (std::size_t i = 1; i <= spec.p; ++i)
    if (spec.level(i) > 0 && !is_selector(m, i, spec.level(i), budget)) return false;
  return true;
}

/// For all disjoint S, T with |S| <= d, |T| = l: some row hits T and misses S.
inline bool is_list_disjunct(const BitMatrix& m, std::size_t d, std::size_t l, const VerifyBudget& budget = {}) {
  const std::size_t n = m.cols();
  if (d + l > n) throw input_error("list-disjunct check: d + l exceeds the number of columns");
  if (l == 0) throw input_error("list-disjunct check: l must be positive");
  // Enlarging S only shrinks the set of good rows, so |S| = d covers |S| < d.
  detail::charge(binomial(n, l) * std::max<std::uint64_t>(1, binomial(n - l, d)), budget, "list-disjunct check");
  const auto cols = m.columns();
  std::vector<std::size_t> rest;
  bool ok = true;
  for_each_combination(n, l, [&](std::span<const std::size_t> t) {
    BitVector hit(m.rows());
    for (std::size_t c : t) hit |= cols[c];
    rest.clear();
    for (std::size_t c = 0, i = 0; c < n; ++c) {
      if (i < t.size() && t[i] == c) {
        ++i;
        continue;
      }
      rest.push_back(c);
    }
    ok = for_each_combination(rest.size(), d, [&](std::span<const std::size_t> s) {
      BitVector blocked(m.rows());
      for (std::size_t i : s) blocked |= cols[rest[i]];
      return !hit.is_covered_by(blocked);
    });
    return ok;
  });
  return ok;
}

}  // namespace superselect
