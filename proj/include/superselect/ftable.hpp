#pragma once

#include <cmath>
#include <cstddef>
#include <vector>

#include "superselect/errors.hpp"
#include "superselect/sizing.hpp"

namespace superselect {

/// f(a, b, c): probability that a random a-row matrix (entries drawn from
/// `distribution`) realizes at least b distinct rows out of c designated
/// rows of the identity block. Filled by
///   f(a, b, c) = (1 - alpha c) f(a-1, b, c) + alpha c f(a-1, b-1, c-1)
/// with f(a, 0, c) = 1 and f(a, b, c) = 0 for a < b.
template <class Real = double>
class FTable {
 public:
  FTable() = default;

  FTable(std::size_t max_rows, const SampleDistribution& distribution, std::size_t max_targets)
      : rows_(max_rows), k_(max_targets), dist_(distribution), data_((max_rows + 1) * (k_ + 1) * (k_ + 1), Real(0)) {
    x_ = Real(distribution.p - 1) / Real(distribution.p);
    alpha_ = std::pow(x_, Real(distribution.width - 1)) * (Real(1) - x_);
    if (alpha_ * Real(k_) > Real(1) + Real(1e-12))
      throw input_error("f-table: more designated rows than the row distribution supports");
    for (std::size_t a = 0; a <= rows_; ++a) {
      for (std::size_t c = 0; c <= k_; ++c) {
        at(a, 0, c) = Real(1);
        for (std::size_t b = 1; b <= c; ++b) {
          if (a < b) continue;  // stays 0
          const Real hit = alpha_ * Real(c);
          at(a, b, c) = (Real(1) - hit) * at(a - 1, b, c) + hit * at(a - 1, b - 1, c - 1);
        }
      }
    }
  }

  /// Total on b: b <= 0 gives 1; b > c or a < b gives 0.
  Real operator()(std::size_t a, std::ptrdiff_t b, std::size_t c) const {
    if (b <= 0) return Real(1);
    const auto ub = static_cast<std::size_t>(b);
    if (ub > c || a < ub) return Real(0);
    if (a > rows_ || c > k_) throw input_error("f-table lookup outside the tabulated range");
    return data_[index(a, ub, c)];
  }

  std::size_t max_rows() const { return rows_; }
  std::size_t max_targets() const { return k_; }
  const SampleDistribution& distribution() const { return dist_; }
  Real x() const { return x_; }
  Real alpha() const { return alpha_; }

 private:
  std::size_t index(std::size_t a, std::size_t b, std::size_t c) const { return (a * (k_ + 1) + b) * (k_ + 1) + c; }
  Real& at(std::size_t a, std::size_t b, std::size_t c) { return data_[index(a, b, c)]; }

  std::size_t rows_ = 0;
  std::size_t k_ = 0;
  SampleDistribution dist_;
  Real x_ = 0;
  Real alpha_ = 0;
  std::vector<Real> data_;
};

/// Table for an m-row, p-column random matrix with x = (p-1)/p.
template <class Real = double>
FTable<Real> build_f_table(std::size_t m, std::size_t p, std::size_t k_max) {
  if (k_max > p) throw input_error("f-table: k_max exceeds p");
  return FTable<Real>(m, SampleDistribution::make(p), k_max);
}

}  // namespace superselect
