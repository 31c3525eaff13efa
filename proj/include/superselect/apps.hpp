#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <map>
#include <memory>
#include <mutex>
#include <utility>
#include <vector>

#include "superselect/construct.hpp"
#include "superselect/core.hpp"
#include "superselect/decode.hpp"
#include "superselect/errors.hpp"

namespace superselect {

// ---------------------------------------------------------------------------
// Group testing

/// (p+e0, v, n) with v_i = i - min(e0, e1) + 1 clamped into [0, i].
inline SuperSelectorSpec approx_gt_spec(std::size_t p, std::size_t e0, std::size_t e1, std::size_t n) {
  if (p < 1) throw input_error("approx_gt_spec: p must be positive");
  if (p + e0 > n) throw input_error("approx_gt_spec: p + e0 exceeds n");
  const std::size_t outer = p + e0;
  const auto slack = static_cast<std::ptrdiff_t>(std::min(e0, e1));
  std::vector<std::size_t> v(outer);
  for (std::size_t i = 1; i <= outer; ++i) {
    const std::ptrdiff_t raw = static_cast<std::ptrdiff_t>(i) - slack + 1;
    v[i - 1] = static_cast<std::size_t>(std::clamp<std::ptrdiff_t>(raw, 0, static_cast<std::ptrdiff_t>(i)));
  }
  return SuperSelectorSpec(n, std::move(v));
}

inline std::size_t isqrt(std::size_t x) {
  auto r = static_cast<std::size_t>(std::sqrt(static_cast<double>(x)));
  while (r * r > x) --r;
  while ((r + 1) * (r + 1) <= x) ++r;
  return r;
}

/// (2p, v, n) with v_i = i for i <= floor(sqrt p), else ceil(i/2) + 1.
inline SuperSelectorSpec additive_gt_spec(std::size_t p, std::size_t n) {
  if (p < 1) throw input_error("additive_gt_spec: p must be positive");
  if (2 * p > n) throw input_error("additive_gt_spec: 2p exceeds n");
  const std::size_t root = isqrt(p);
  std::vector<std::size_t> v(2 * p);
  for (std::size_t i = 1; i <= 2 * p; ++i) v[i - 1] = i <= root ? i : (i + 1) / 2 + 1;
  return SuperSelectorSpec(n, std::move(v));
}

// ---------------------------------------------------------------------------
// Multi-user tracing

/// (2r, v, n) with v_i = i up to k, then k, and v_{2r} = r + 1.
inline SuperSelectorSpec mut_spec(std::size_t r, std::size_t k, std::size_t n) {
  if (k < 1 || k > r) throw input_error("mut_spec: need 1 <= k <= r");
  if (2 * r > n) throw input_error("mut_spec: 2r exceeds n");
  std::vector<std::size_t> v(2 * r);
  for (std::size_t i = 1; i <= 2 * r; ++i) v[i - 1] = i <= k ? i : k;
  v[2 * r - 1] = r + 1;
  return SuperSelectorSpec(n, std::move(v));
}

/// At least k members of any union of k..r sets, all members below k.
inline DecodeResult mut_decode(const BitMatrix& m, const SuperSelectorSpec& spec, const BoolVector& a) {
  return identify_from_union(m, spec, a);
}

// ---------------------------------------------------------------------------
// List-disjunct matrices

struct SelectorParams {
  std::size_t p = 0;
  std::size_t k = 0;
  std::size_t n = 0;
};

/// A (p, k, n)-selector that is also (d, l)-list-disjunct.
inline SelectorParams list_disjunct_params(std::size_t d, std::size_t l, std::size_t n) {
  if (d < 1 || l < 1) throw input_error("list_disjunct_params: d and l must be positive");
  SelectorParams params = d >= l ? SelectorParams{d + l, d + 1, n} : SelectorParams{2 * d, d + 1, n};
  if (params.p > n) throw input_error("list_disjunct_params: selector width exceeds n");
  return params;
}

/// Superselector spec constraining only the top level: a plain (p, k, n)-selector.
inline SuperSelectorSpec selector_spec(const SelectorParams& params) {
  std::vector<std::size_t> v(params.p, 0);
  v.back() = params.k;
  return SuperSelectorSpec(params.n, std::move(v));
}

// ---------------------------------------------------------------------------
// (k, alpha)-FUT families

/// (2p, v, n) with v_i = floor(alpha i) + 1, so that more than alpha |G|
/// members are identifiable.
inline SuperSelectorSpec fut_spec(std::size_t p, double alpha, std::size_t n) {
  if (p < 2) throw input_error("fut_spec: p must be at least 2");
  if (alpha < 0.5 || alpha > 1.0 - 1.0 / static_cast<double>(p))
    throw input_error("fut_spec: alpha must lie in [1/2, 1 - 1/p]");
  if (2 * p > n) throw input_error("fut_spec: 2p exceeds n");
  std::vector<std::size_t> v(2 * p);
  for (std::size_t i = 1; i <= 2 * p; ++i)
    v[i - 1] = static_cast<std::size_t>(std::floor(alpha * static_cast<double>(i))) + 1;
  return SuperSelectorSpec(n, std::move(v));  // validate() enforces v_i <= i
}

// ---------------------------------------------------------------------------
// Monotone encodings

/// (t, v, n) with v_i = floor(i/2) + 1.
inline SuperSelectorSpec monotone_level_spec(std::size_t t, std::size_t n) {
  std::vector<std::size_t> v(t);
  for (std::size_t i = 1; i <= t; ++i) v[i - 1] = i / 2 + 1;
  return SuperSelectorSpec(n, std::move(v));
}

/// Chain of superselectors mapping sets of size <= k to codewords so that
/// S ⊆ T implies enc(S) <= enc(T). Level i handles a residual of at most
/// r_i members with r_0 = k and r_{i+1} = ceil(r_i / 2) - 1, using a
/// (2 r_i, v, n)-superselector.
class MonotoneEncoding {
 public:
  struct Level {
    std::size_t capacity = 0;
    SuperSelectorSpec spec;
    BitMatrix matrix;
  };

  MonotoneEncoding(std::size_t n, std::size_t k, const DerandOptions& options = {}) : n_(n), k_(k) {
    if (k < 1) throw input_error("monotone encoding: k must be positive");
    if (2 * k > n) throw input_error("monotone encoding: 2k exceeds n");
    for (std::size_t cap : capacities(k)) {
      Level level{cap, monotone_level_spec(2 * cap, n), {}};
      level.matrix = construct_derandomized(level.spec, options);
      levels_.push_back(std::move(level));
    }
  }

  static std::vector<std::size_t> capacities(std::size_t k) {
    std::vector<std::size_t> out;
    for (std::size_t r = k; r >= 1; r = (r + 1) / 2 - 1) out.push_back(r);
    return out;
  }

  std::size_t n() const { return n_; }
  std::size_t k() const { return k_; }
  const std::vector<Level>& levels() const { return levels_; }

  std::size_t length() const {
    std::size_t total = 0;
    for (const auto& level : levels_) total += level.matrix.rows();
    return total;
  }

  BitVector encode(const ColumnSet& s) const {
    s.check_bounds(n_);
    if (s.size() > k_) throw input_error("monotone encoding: set larger than k");
    BitVector code(length());
    ColumnSet residual = s;
    std::size_t offset = 0;
    for (const auto& level : levels_) {
      const BoolVector block = boolean_sum(level.matrix, residual);
      for (std::size_t r : block.ones()) code.set(offset + r);
      residual = set_difference(residual, identify_from_union(level.matrix, level.spec, block).identified);
      offset += level.matrix.rows();
    }
    if (!residual.empty()) throw invariant_violation("monotone encoding: level chain left members unidentified");
    return code;
  }

  ColumnSet decode(const BitVector& code) const {
    if (code.size() != length()) throw input_error("monotone decoding: codeword length does not match the level chain");
    ColumnSet out;
    std::size_t offset = 0;
    for (const auto& level : levels_) {
      BoolVector block(level.matrix.rows());
      for (std::size_t r = 0; r < block.size(); ++r)
        if (code.test(offset + r)) block.set(r);
      out = set_union(out, identify_from_union(level.matrix, level.spec, block).identified);
      offset += level.matrix.rows();
    }
    return out;
  }

 private:
  std::size_t n_;
  std::size_t k_;
  std::vector<Level> levels_;
};

namespace detail {

inline std::shared_ptr<const MonotoneEncoding> cached_encoding(std::size_t n, std::size_t k) {
  static std::mutex mutex;
  static std::map<std::pair<std::size_t, std::size_t>, std::shared_ptr<const MonotoneEncoding>> cache;
  std::lock_guard lock(mutex);
  auto& slot = cache[{n, k}];
  if (!slot) slot = std::make_shared<const MonotoneEncoding>(n, k);
  return slot;
}

}  // namespace detail

inline BitVector monotone_encode(std::size_t n, std::size_t k, const ColumnSet& s) {
  return detail::cached_encoding(n, k)->encode(s);
}

inline ColumnSet monotone_decode(std::size_t n, std::size_t k, const BitVector& code) {
  return detail::cached_encoding(n, k)->decode(code);
}

// ---------------------------------------------------------------------------
// Selector-based compression of sparse binary vectors

/// (2p, p+1, n)-selector: at most 2p - 1 columns are covered by any union of <= p columns.
inline SuperSelectorSpec compression_spec(std::size_t p, std::size_t n) {
  if (p < 1) throw input_error("compression_spec: p must be positive");
  if (2 * p > n) throw input_error("compression_spec: 2p exceeds n");
  return selector_spec({2 * p, p + 1, n});
}

struct CompressedWord {
  BoolVector y;  // union of the support columns
  BitVector z;   // z_k = 1 iff the k-th covered column is in the support; length 2p

  BitVector bits() const {
    BitVector out(y.size() + z.size());
    for (std::size_t i : y.ones()) out.set(i);
    for (std::size_t i : z.ones()) out.set(y.size() + i);
    return out;
  }

  static CompressedWord from_bits(const BitVector& bits, std::size_t m, std::size_t p) {
    if (bits.size() != m + 2 * p) throw input_error("compressed word must have m + 2p bits");
    CompressedWord w{BoolVector(m), BitVector(2 * p)};
    for (std::size_t i : bits.ones()) {
      if (i < m) {
        w.y.set(i);
      } else {
        w.z.set(i - m);
      }
    }
    return w;
  }
};

inline CompressedWord compress(const BitMatrix& m, std::size_t p, const BoolVector& x) {
  if (x.size() != m.cols()) throw input_error("compress: vector length differs from matrix column count");
  const ColumnSet support = ColumnSet::from_mask(x);
  if (support.size() > p) throw input_error("compress: more than p nonzero entries");
  CompressedWord w{boolean_sum(m, support), BitVector(2 * p)};
  const ColumnSet list = covered_columns(m, w.y);
  if (list.size() > 2 * p) throw invariant_violation("compress: matrix is not a (2p, p+1, n)-selector");
  for (std::size_t k = 0; k < list.size(); ++k)
    if (x.test(list[k])) w.z.set(k);
  return w;
}

inline BoolVector decompress(const BitMatrix& m, std::size_t p, const CompressedWord& w) {
  if (w.y.size() != m.rows() || w.z.size() != 2 * p) throw input_error("decompress: malformed compressed word");
  const ColumnSet list = covered_columns(m, w.y);
  BoolVector x(m.cols());
  if (w.y.none() && list.empty()) return x;  // only the empty support maps here
  for (std::size_t k : w.z.ones()) {
    if (k >= list.size()) throw input_error("decompress: selection mask points past the candidate list");
    x.set(list[k]);
  }
  return x;
}

}  // namespace superselect
