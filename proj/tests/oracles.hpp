#pragma once

// Independent reference implementations used only by the tests. Nothing here
// calls into the packed-word paths of the library.

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <random>
#include <set>
#include <vector>

#include "superselect/core.hpp"

namespace oracle {

using Dense = std::vector<std::vector<int>>;  // rows x cols of 0/1

inline Dense dense(const superselect::BitMatrix& m) {
  Dense d(m.rows(), std::vector<int>(m.cols(), 0));
  for (std::size_t r = 0; r < m.rows(); ++r)
    for (std::size_t c = 0; c < m.cols(); ++c) d[r][c] = m.get(r, c) ? 1 : 0;
  return d;
}

inline superselect::BitMatrix random_matrix(std::size_t m, std::size_t n, double density, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  superselect::BitMatrix out(m, n);
  for (std::size_t r = 0; r < m; ++r)
    for (std::size_t c = 0; c < n; ++c)
      if (u(rng) < density) out.set(r, c);
  return out;
}

inline std::vector<int> row_or(const Dense& d, const std::vector<std::size_t>& s) {
  std::vector<int> out(d.size(), 0);
  for (std::size_t r = 0; r < d.size(); ++r)
    for (std::size_t c : s) out[r] = std::max(out[r], d[r][c]);
  return out;
}

inline std::vector<int> row_count(const Dense& d, const std::vector<std::size_t>& s) {
  std::vector<int> out(d.size(), 0);
  for (std::size_t r = 0; r < d.size(); ++r)
    for (std::size_t c : s) out[r] += d[r][c];
  return out;
}

// Distinct unit row patterns of I_|S| among the rows of M(S), found row by row.
inline std::size_t identity_rows(const Dense& d, const std::vector<std::size_t>& s) {
  std::set<std::size_t> seen;
  for (const auto& row : d) {
    std::size_t ones = 0, where = 0;
    for (std::size_t i = 0; i < s.size(); ++i)
      if (row[s[i]]) {
        ++ones;
        where = i;
      }
    if (ones == 1) seen.insert(where);
  }
  return seen.size();
}

// Every subset of {0..n-1} with exactly k members, via bitmask enumeration.
inline void subsets(std::size_t n, std::size_t k, const std::function<bool(const std::vector<std::size_t>&)>& fn) {
  std::vector<std::size_t> s;
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << n); ++mask) {
    if (static_cast<std::size_t>(__builtin_popcountll(mask)) != k) continue;
    s.clear();
    for (std::size_t i = 0; i < n; ++i)
      if ((mask >> i) & 1U) s.push_back(i);
    if (!fn(s)) return;
  }
}

inline void subsets_up_to(std::size_t n, std::size_t k, const std::function<bool(const std::vector<std::size_t>&)>& fn) {
  for (std::size_t size = 0; size <= k; ++size) subsets(n, size, fn);
}

inline bool is_selector(const superselect::BitMatrix& m, std::size_t p, std::size_t k) {
  const Dense d = dense(m);
  bool ok = true;
  subsets(m.cols(), p, [&](const std::vector<std::size_t>& s) {
    ok = identity_rows(d, s) >= k;
    return ok;
  });
  return ok;
}

inline bool is_superselector(const superselect::BitMatrix& m, const superselect::SuperSelectorSpec& spec) {
  for (std::size_t i = 1; i <= spec.p; ++i)
    if (spec.level(i) > 0 && !oracle::is_selector(m, i, spec.level(i))) return false;
  return true;
}

// All disjoint S, T with |S| <= d and |T| = l.
inline bool is_list_disjunct(const superselect::BitMatrix& m, std::size_t d, std::size_t l) {
  const Dense dm = dense(m);
  const std::size_t n = m.cols();
  bool ok = true;
  subsets(n, l, [&](const std::vector<std::size_t>& t) {
    subsets_up_to(n, d, [&](const std::vector<std::size_t>& s) {
      for (std::size_t c : s)
        for (std::size_t x : t)
          if (c == x) return true;  // not disjoint
      bool found = false;
      for (const auto& row : dm) {
        bool hits_t = false, hits_s = false;
        for (std::size_t x : t) hits_t |= row[x] != 0;
        for (std::size_t c : s) hits_s |= row[c] != 0;
        if (hits_t && !hits_s) {
          found = true;
          break;
        }
      }
      ok = found;
      return ok;
    });
    return ok;
  });
  return ok;
}

// Probability that an m x width random matrix (Pr[0] = x) contains at least
// kprime distinct rows among the first k rows of I_width, by enumerating all
// 2^(m*width) matrices.
inline double exact_f(std::size_t m, std::size_t kprime, std::size_t k, std::size_t width, double x) {
  const std::size_t cells = m * width;
  double total = 0.0;
  for (std::uint64_t bits = 0; bits < (std::uint64_t{1} << cells); ++bits) {
    const auto ones = static_cast<std::size_t>(__builtin_popcountll(bits));
    const double prob = std::pow(x, static_cast<double>(cells - ones)) * std::pow(1.0 - x, static_cast<double>(ones));
    std::set<std::size_t> seen;
    for (std::size_t r = 0; r < m; ++r) {
      std::size_t count = 0, where = 0;
      for (std::size_t c = 0; c < width; ++c)
        if ((bits >> (r * width + c)) & 1U) {
          ++count;
          where = c;
        }
      if (count == 1 && where < k) seen.insert(where);
    }
    if (seen.size() >= kprime) total += prob;
  }
  return total;
}

// Probability that an m x width matrix whose first `fixed` cells (row-major)
// are given reaches `target` identity rows once the rest is drawn with Pr[0] = x.
inline double exact_completion(const std::vector<int>& prefix, std::size_t m, std::size_t width, std::size_t target,
                               double x) {
  const std::size_t cells = m * width;
  const std::size_t free_cells = cells - prefix.size();
  double total = 0.0;
  for (std::uint64_t bits = 0; bits < (std::uint64_t{1} << free_cells); ++bits) {
    std::vector<int> cell(prefix);
    for (std::size_t i = 0; i < free_cells; ++i) cell.push_back(static_cast<int>((bits >> i) & 1U));
    const auto ones = static_cast<std::size_t>(__builtin_popcountll(bits));
    const double prob =
        std::pow(x, static_cast<double>(free_cells - ones)) * std::pow(1.0 - x, static_cast<double>(ones));
    std::set<std::size_t> seen;
    for (std::size_t r = 0; r < m; ++r) {
      std::size_t count = 0, where = 0;
      for (std::size_t c = 0; c < width; ++c)
        if (cell[r * width + c]) {
          ++count;
          where = c;
        }
      if (count == 1) seen.insert(where);
    }
    if (seen.size() >= target) total += prob;
  }
  return total;
}

// Identification guarantee for one set S of size x: false on a violation.
// identified and candidates come from the decoder under test.
inline bool union_guarantee_holds(const superselect::SuperSelectorSpec& spec, std::size_t x, std::size_t candidates,
                                  std::size_t identified) {
  const std::size_t y = candidates - x;
  std::size_t first = spec.p + 1;
  for (std::size_t j = 1; j <= spec.p; ++j)
    if (x < spec.level(j)) {
      first = j;
      break;
    }
  if (!(y + x < first)) return false;
  return identified >= spec.level(x + y);
}

}  // namespace oracle
