#pragma once

#include <cstddef>
#include <utility>
#include <vector>

#include "superselect/core.hpp"
#include "superselect/errors.hpp"

namespace superselect {

struct DecodeResult {
  ColumnSet identified;            // columns certified to be in S
  ColumnSet candidates;            // every column covered by the observation (S plus spurious ones)
  std::size_t spurious_bound = 0;  // |candidates| - |identified|
};

namespace detail {

// Candidates owning a row in which they are the only candidate with a 1.
inline ColumnSet private_columns(const BitMatrix& m, const BitVector& candidate_mask, const BitVector& live_rows) {
  BitVector found(m.cols());
  for (std::size_t r = 0; r < m.rows(); ++r) {
    if (!live_rows.test(r)) continue;
    const BitVector hits = m.row(r) & candidate_mask;
    if (hits.count() == 1) found.set(hits.find_first());
  }
  return ColumnSet::from_mask(found);
}

inline void check_width(const BitMatrix& m, const SuperSelectorSpec& spec) {
  if (spec.n != m.cols()) throw input_error("spec n differs from matrix column count");
}

}  // namespace detail

/// Identification from a Boolean union. Total on any observation; the
/// superselector guarantee needs a to be the sum of |S| < v_p columns.
inline DecodeResult identify_from_union(const BitMatrix& m, const SuperSelectorSpec& spec, const BoolVector& a) {
  detail::check_width(m, spec);
  DecodeResult result;
  result.candidates = covered_columns(m, a);
  result.identified = detail::private_columns(m, result.candidates.to_mask(m.cols()), a);
  result.spurious_bound = result.candidates.size() - result.identified.size();
  return result;
}

struct ApproxDecodeResult {
  ColumnSet low;   // certainly positive
  ColumnSet high;  // possibly positive
};

/// Any P* with low ⊆ P* ⊆ high meets the false-positive budget e0 and the
/// false-negative budget e1 when m is certified for approx_gt_spec(p, e0, e1, n).
inline ApproxDecodeResult approx_decode(const BitMatrix& m, const SuperSelectorSpec& spec, const BoolVector& a,
                                        std::size_t /*e0*/, std::size_t /*e1*/) {
  auto r = identify_from_union(m, spec, a);
  return {std::move(r.identified), std::move(r.candidates)};
}

/// Recovers P from its arithmetic column sum by repeated identification and
/// subtraction of identified columns. `rounds`, when given, receives the
/// columns identified in each round.
inline ColumnSet additive_decode(const BitMatrix& m, const SuperSelectorSpec& spec, const IntVector& s,
                                 std::vector<ColumnSet>* rounds = nullptr) {
  detail::check_width(m, spec);
  if (s.size() != m.rows()) throw input_error("observation length differs from matrix row count");
  IntVector residual = s;
  BitVector decided(m.cols());
  std::vector<std::size_t> found;
  const auto cols = m.columns();
  while (true) {
    BitVector support(m.rows());
    for (std::size_t r = 0; r < m.rows(); ++r)
      if (residual[r] > 0) support.set(r);
    if (support.none()) break;

    BitVector candidates(m.cols());
    for (std::size_t c = 0; c < m.cols(); ++c)
      if (!decided.test(c) && cols[c].is_covered_by(support)) candidates.set(c);
    const ColumnSet round = detail::private_columns(m, candidates, support);
    if (round.empty()) throw inconsistent_input("residual is nonzero but no column can be identified");
    if (rounds != nullptr) rounds->push_back(round);

    for (std::size_t c : round) {
      for (std::size_t r : cols[c].ones()) {
        if (residual[r] == 0) throw inconsistent_input("observation is not a sum of matrix columns");
        --residual[r];
      }
      decided.set(c);
      found.push_back(c);
    }
  }
  return ColumnSet(std::move(found));
}

}  // namespace superselect
