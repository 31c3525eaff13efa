#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "oracles.hpp"
#include "superselect/construct.hpp"

using namespace superselect;

TEST(Sampling, AllOnesWhenPIsOne) {
  auto m = sample_random_matrix(5, 7, 1, 3);
  EXPECT_EQ(m, BitMatrix::ones(5, 7));
}

TEST(Sampling, Deterministic) {
  EXPECT_EQ(sample_random_matrix(9, 11, 3, 42), sample_random_matrix(9, 11, 3, 42));
  EXPECT_FALSE(sample_random_matrix(9, 11, 3, 42) == sample_random_matrix(9, 11, 3, 43));
}

TEST(Sampling, ZeroFraction) {
  const std::size_t rows = 250, cols = 400;  // 10^5 entries
  auto m = sample_random_matrix(rows, cols, 4, 11);
  std::size_t zeros = 0;
  for (std::size_t r = 0; r < rows; ++r) zeros += cols - m.row(r).count();
  const double n = rows * cols;
  const double sd = std::sqrt(n * 0.75 * 0.25);
  EXPECT_LT(std::abs(static_cast<double>(zeros) - 0.75 * n), 4 * sd);
}

TEST(Randomized, TrivialSpec) {
  auto res = construct_randomized(SuperSelectorSpec(3, {1}), 0, 5);
  EXPECT_TRUE(oracle::is_superselector(res.matrix, SuperSelectorSpec(3, {1})));
}

TEST(Randomized, PassesOracleAtThreshold) {
  SuperSelectorSpec spec(10, {1, 2});
  auto res = construct_randomized(spec, 7, 200);
  EXPECT_EQ(res.matrix.rows(), derand_threshold(spec));
  EXPECT_TRUE(oracle::is_superselector(res.matrix, spec));
  EXPECT_GE(res.attempts, 1U);
}

TEST(Randomized, SuccessRateAndFailureReporting) {
  SuperSelectorSpec spec(12, {1, 2});
  std::size_t ok = 0;
  std::optional<std::uint64_t> failing;
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    try {
      construct_randomized(spec, seed, 1);
      ++ok;
    } catch (const construction_failure& e) {
      EXPECT_EQ(e.attempts, 1U);
      if (!failing) failing = seed;
    }
  }
  EXPECT_GT(ok, 0U);
  ASSERT_TRUE(failing.has_value());
  EXPECT_THROW(construct_randomized(spec, *failing, 1), construction_failure);
}

TEST(FTableTest, BoundaryValues) {
  for (std::size_t p = 1; p <= 5; ++p) {
    auto f = build_f_table<double>(8, p, p);
    for (std::size_t a = 0; a <= 8; ++a)
      for (std::size_t c = 0; c <= p; ++c) {
        EXPECT_EQ(f(a, 0, c), 1.0);
        for (std::size_t b = a + 1; b <= c; ++b) EXPECT_EQ(f(a, static_cast<std::ptrdiff_t>(b), c), 0.0);
      }
    const double x = (p - 1.0) / p;
    EXPECT_NEAR(f(1, 1, 1), std::pow(x, p - 1.0) * (1 - x), 1e-15);
  }
}

TEST(FTableTest, RecurrenceAndMonotonicity) {
  auto f = build_f_table<double>(12, 4, 4);
  const double a1 = f.alpha();
  for (std::size_t a = 1; a <= 12; ++a)
    for (std::size_t c = 1; c <= 4; ++c)
      for (std::size_t b = 1; b <= std::min(a, c); ++b) {
        const auto bb = static_cast<std::ptrdiff_t>(b);
        EXPECT_NEAR(f(a, bb, c), (1 - a1 * c) * f(a - 1, bb, c) + a1 * c * f(a - 1, bb - 1, c - 1), 1e-15);
        EXPECT_GE(f(a, bb, c) + 1e-15, f(a - 1, bb, c));
        EXPECT_LE(f(a, bb, c), f(a, bb - 1, c) + 1e-15);
      }
}

TEST(FTableTest, MatchesExhaustiveEnumeration) {
  for (std::size_t width = 1; width <= 3; ++width)
    for (std::size_t p = width; p <= 4; ++p) {
      const std::size_t m = width == 3 ? 4 : 5;
      FTable<double> f(m, SampleDistribution::make(p, width), width);
      for (std::size_t rows = 0; rows <= m; ++rows)
        for (std::size_t k = 0; k <= width; ++k)
          for (std::size_t kp = 0; kp <= k; ++kp)
            EXPECT_NEAR(f(rows, static_cast<std::ptrdiff_t>(kp), k), oracle::exact_f(rows, kp, k, width, f.x()), 1e-12)
                << width << ' ' << p << ' ' << rows << ' ' << kp << ' ' << k;
    }
}

TEST(FTableTest, MonteCarlo) {
  // p = 3, m = 6, |A| = 2, k' = 1
  auto f = build_f_table<double>(6, 3, 2);
  const double expected = f(6, 1, 2);
  std::mt19937_64 rng(5);
  std::bernoulli_distribution one(1.0 / 3.0);
  const int samples = 100000;
  int hits = 0;
  for (int s = 0; s < samples; ++s) {
    bool found = false;
    for (int r = 0; r < 6; ++r) {
      int row[3];
      for (int& e : row) e = one(rng) ? 1 : 0;
      if (row[0] + row[1] + row[2] == 1 && (row[0] || row[1])) found = true;
    }
    hits += found ? 1 : 0;
  }
  const double freq = static_cast<double>(hits) / samples;
  const double se = std::sqrt(expected * (1 - expected) / samples);
  EXPECT_LT(std::abs(freq - expected), 3 * se);
}

TEST(ConditionalProbability, CaseExamples) {
  const std::size_t m = 5;
  FTable<double> f(m, SampleDistribution::make(3, 3), 3);
  const std::vector<std::size_t> s = {0, 1, 2};
  // target already reached at row start
  SubsetProgress done;
  done.realized = 0b11;
  EXPECT_EQ(conditional_probability(done, s, 2, f, m, 2, 0), 1.0);
  // dead row: two 1s in the prefix of row 1 with nothing realized
  SubsetProgress dead;
  dead = advance(dead, 3, 0, true);
  dead = advance(dead, 3, 1, true);
  EXPECT_NEAR(conditional_probability(dead, s, 2, f, m, 1, 2), f(m - 2, 2, 3), 1e-15);
}

TEST(ConditionalProbability, SingleColumn) {
  const std::size_t m = 6;
  for (std::size_t p = 1; p <= 4; ++p) {
    FTable<double> f(m, SampleDistribution::make(p, 1), 1);
    const std::vector<std::size_t> s = {0};
    SubsetProgress none;
    for (std::size_t r = 0; r < m; ++r)
      EXPECT_NEAR(conditional_probability(none, s, 1, f, m, r, 0), 1 - std::pow(f.x(), double(m - r)), 1e-14);
  }
}

// Random partial fills checked against enumerating every completion of M(S).
TEST(ConditionalProbability, MatchesExhaustiveCompletion) {
  std::mt19937_64 rng(17);
  const std::size_t n = 5, p = 3, m = 4;
  for (int trial = 0; trial < 300; ++trial) {
    std::vector<std::size_t> subset;
    for (std::size_t c = 0; c < n; ++c)
      if (rng() % 2) subset.push_back(c);
    if (subset.empty() || subset.size() > p) continue;
    const std::size_t width = subset.size();
    const std::size_t target = 1 + rng() % width;
    FTable<double> f(m, SampleDistribution::make(p, width), width);
    const std::size_t pos = rng() % (m * n);  // cells before pos are fixed
    SubsetProgress state;
    std::vector<int> prefix;
    std::vector<int> full(m * n);
    for (auto& e : full) e = static_cast<int>(rng() % 3 == 0);
    for (std::size_t i = 0; i < pos; ++i) {
      const std::size_t r = i / n, c = i % n;
      for (std::size_t q = 0; q < width; ++q)
        if (subset[q] == c) {
          state = advance(state, width, q, full[i] != 0);
          prefix.push_back(full[i]);
        }
      (void)r;
    }
    const std::size_t r = pos / n, c = pos % n;
    EXPECT_NEAR(conditional_probability(state, subset, target, f, m, r, c),
                oracle::exact_completion(prefix, m, width, target, f.x()), 1e-12);
    for (bool bit : {false, true}) {
      auto with = prefix;
      if (std::find(subset.begin(), subset.end(), c) != subset.end()) with.push_back(bit ? 1 : 0);
      EXPECT_NEAR(conditional_probability(state, subset, target, f, m, r, c, bit),
                  oracle::exact_completion(with, m, width, target, f.x()), 1e-12);
    }
  }
}

TEST(Derandomized, SmallSpec) {
  SuperSelectorSpec spec(6, {1, 2});
  auto m = construct_derandomized(spec);
  EXPECT_LE(m.rows(), derand_threshold(spec));
  EXPECT_TRUE(oracle::is_superselector(m, spec));
}

TEST(Derandomized, LowerLevelsNeedFewerRows) {
  SuperSelectorSpec weak(8, {0, 1}), strong(8, {1, 2});
  auto a = construct_derandomized(weak);
  auto b = construct_derandomized(strong);
  EXPECT_TRUE(oracle::is_superselector(a, weak));
  EXPECT_TRUE(oracle::is_superselector(b, strong));
  EXPECT_LT(a.rows(), b.rows());
}

TEST(Derandomized, SingleLevel) {
  auto m = construct_derandomized(SuperSelectorSpec(2, {1}));
  EXPECT_EQ(m, BitMatrix::ones(1, 2));
}

TEST(Derandomized, TraceIsMonotone) {
  for (const auto& v : std::vector<std::vector<std::size_t>>{{1, 2}, {1, 2, 2}, {0, 1, 3}, {1, 1, 1}}) {
    SuperSelectorSpec spec(9, v);
    DerandOptions opt;
    opt.record_trace = true;
    auto res = construct_derandomized_detailed(spec, opt);
    ASSERT_EQ(res.trace.size(), res.matrix.rows() * res.matrix.cols());
    double prev = res.initial_expectation;
    for (double t : res.trace) {
      EXPECT_GE(t, prev - 1e-9);
      prev = t;
    }
    EXPECT_GT(res.initial_expectation, static_cast<double>(res.target) - 1.0);
    EXPECT_EQ(res.final_expectation, static_cast<double>(res.target));
  }
}

TEST(Derandomized, Deterministic) {
  SuperSelectorSpec spec(10, {1, 2, 2});
  EXPECT_EQ(construct_derandomized(spec), construct_derandomized(spec));
}

TEST(Derandomized, ExtendedPrecisionAgrees) {
  SuperSelectorSpec spec(8, {1, 2, 3});
  const auto m = derand_threshold(spec);
  auto lo = derandomize<double>(spec, m, false);
  auto hi = derandomize<long double>(spec, m, false);
  EXPECT_TRUE(oracle::is_superselector(lo.matrix, spec));
  EXPECT_TRUE(oracle::is_superselector(hi.matrix, spec));
}

TEST(Stacked, VacuousSplit) {
  SuperSelectorSpec spec(7, {0, 0, 0});
  EXPECT_EQ(stacked_split_level(spec), 0U);
  EXPECT_EQ(construct_stacked(spec), construct_derandomized(spec));
}

TEST(Stacked, FullLevelsAreJustTheFirstPart) {
  SuperSelectorSpec spec(8, {1, 2, 3});
  ASSERT_EQ(stacked_split_level(spec), 3U);
  EXPECT_EQ(construct_stacked(spec), construct_derandomized(spec));
}

TEST(Stacked, PassesOracle) {
  SuperSelectorSpec spec(10, {1, 2, 2});
  auto m = construct_stacked(spec);
  EXPECT_TRUE(oracle::is_superselector(m, spec));
}
