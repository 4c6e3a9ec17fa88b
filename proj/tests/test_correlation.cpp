#include <gtest/gtest.h>

#include <algorithm>
#include <random>

#include "oracles.hpp"
#include "torcor/correlation.hpp"
#include "torcor/error.hpp"

using namespace torcor;

namespace {

std::vector<std::uint64_t> words(const TorusSequence& s) {
  std::vector<std::uint64_t> w;
  for (auto p : s.points) w.push_back(p.word());
  return w;
}

TorusSequence from_words(const std::vector<std::uint64_t>& w) {
  std::vector<TorusPoint> pts;
  for (auto x : w) pts.emplace_back(x);
  return TorusSequence::from_points(std::move(pts));
}

std::uint64_t ipow(std::uint64_t n, unsigned k) {
  std::uint64_t r = 1;
  for (unsigned i = 0; i < k; ++i) r *= n;
  return r;
}

// Lattice points j / 2^b: many sums land exactly on window boundaries.
TorusSequence lattice(std::size_t n, unsigned bits, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<std::uint64_t> w(n);
  for (auto& x : w) x = (rng() >> (64 - bits)) << (64 - bits);
  return from_words(w);
}

void compare_with_oracle(const TorusSequence& seq, unsigned k, const std::vector<Rational>& s_values) {
  const std::uint64_t n = seq.size();
  const std::uint64_t nk = ipow(n, k);
  for (auto cmp : {Comparison::le, Comparison::lt}) {
    std::vector<oracle::Window> windows;
    std::vector<Rational> usable;
    for (const auto& s : s_values) {
      // skip windows of half the circle or more
      if (2 * static_cast<u128>(s.num) >= static_cast<u128>(s.den) * nk) continue;
      usable.push_back(s);
      windows.push_back({static_cast<u128>(s.num), static_cast<u128>(s.den) * nk, cmp == Comparison::lt});
    }
    const auto expected = oracle::kfold_counts(words(seq), k, windows);
    const auto got = count_kfold(seq, {.k = k, .alpha = Rational(k), .s_values = usable, .comparison = cmp});
    ASSERT_EQ(got.size(), usable.size());
    for (std::size_t i = 0; i < usable.size(); ++i) {
      EXPECT_EQ(got[i].raw_count, expected[i]) << "N=" << n << " k=" << k << " s=" << usable[i].to_string()
                                               << " cmp=" << to_string(cmp);
      EXPECT_TRUE(got[i].exact_threshold);
      EXPECT_EQ(got[i].excluded_c, oracle::multiset_equal_pairs(n, k));
    }
  }
}

const std::vector<Rational> kSValues{Rational(0), Rational(1, 2), Rational(1), Rational(2), Rational(3),
                                     Rational(5, 2), Rational(7)};

}  // namespace

TEST(MultisetEqualCount, MatchesEnumeration) {
  for (unsigned k = 1; k <= 3; ++k)
    for (std::uint64_t n = 1; n <= 9; ++n) EXPECT_EQ(multiset_equal_count(n, k), oracle::multiset_equal_pairs(n, k));
}

TEST(MultisetEqualCount, ClosedForms) {
  EXPECT_EQ(multiset_equal_count(100, 1), 100u);
  EXPECT_EQ(multiset_equal_count(100, 2), 2u * 100 * 100 - 100);
  EXPECT_THROW(multiset_equal_count(10, 0), InvalidArgument);
  EXPECT_THROW(multiset_equal_count(10, 7), InvalidArgument);
}

TEST(KfoldCounts, PairMatchesBruteForce) {
  for (std::size_t n : {11, 17, 30}) {
    compare_with_oracle(gen_uniform(n, n), 1, kSValues);
    compare_with_oracle(lattice(n, 6, n), 1, kSValues);
    compare_with_oracle(gen_equispaced(n), 1, kSValues);
  }
  compare_with_oracle(gen_equispaced(16), 1, kSValues);
  compare_with_oracle(gen_duplicated(3, 20), 1, kSValues);
}

TEST(KfoldCounts, FourfoldMatchesBruteForce) {
  for (std::size_t n : {4, 9, 16, 25}) {
    compare_with_oracle(gen_uniform(100 + n, n), 2, kSValues);
    compare_with_oracle(lattice(n, 8, n), 2, kSValues);
  }
  compare_with_oracle(gen_mirrored(5, 20), 2, kSValues);
  compare_with_oracle(gen_equispaced(16), 2, kSValues);
  compare_with_oracle(gen_kronecker(kGoldenFraction, 1, 18), 2, kSValues);
}

TEST(KfoldCounts, SixfoldMatchesBruteForce) {
  for (std::size_t n : {5, 8, 12}) {
    compare_with_oracle(gen_uniform(200 + n, n), 3, kSValues);
    compare_with_oracle(lattice(n, 10, n), 3, kSValues);
  }
  compare_with_oracle(gen_equispaced(8), 3, kSValues);
}

TEST(KfoldCounts, FractionalAlphaPerfectPowerIsExact) {
  // N = 16, alpha = 1/2: N^alpha = 4, window s/4
  const auto seq = lattice(16, 5, 3);
  std::vector<oracle::Window> windows{{1, 8, false}, {1, 5, false}, {1, 5, true}};
  const auto expected = oracle::kfold_counts(words(seq), 1, windows);
  const auto le = count_kfold(seq, {.k = 1, .alpha = Rational(1, 2), .s_values = {Rational(1, 2), Rational(4, 5)}});
  EXPECT_EQ(le[0].raw_count, expected[0]);
  EXPECT_EQ(le[1].raw_count, expected[1]);
  EXPECT_TRUE(le[0].exact_threshold);
  const auto lt = count_kfold(
      seq, {.k = 1, .alpha = Rational(1, 2), .s_values = {Rational(4, 5)}, .comparison = Comparison::lt});
  EXPECT_EQ(lt[0].raw_count, expected[2]);
}

TEST(KfoldCounts, NonIntegerPowerIsFlaggedInexact) {
  const auto r = count_kfold(gen_uniform(1, 10), {.k = 1, .alpha = Rational(1, 2), .s_values = {Rational(1)}});
  EXPECT_FALSE(r[0].exact_threshold);
}

TEST(KfoldCounts, AlphaZeroCountsAllDistinctPairsInsideFixedWindow) {
  const auto seq = gen_uniform(4, 30);
  const auto r = count_kfold(seq, {.k = 1, .alpha = Rational(0), .s_values = {Rational(1, 4)}});
  EXPECT_EQ(r[0].raw_count, oracle::kfold_counts(words(seq), 1, {{1, 4, false}})[0]);
  EXPECT_DOUBLE_EQ(r[0].normalized, static_cast<double>(r[0].raw_count) / (30.0 * 30.0));
}

TEST(KfoldCounts, Validation) {
  const auto seq = gen_uniform(1, 10);
  EXPECT_THROW(count_kfold(seq, {.k = 1, .alpha = Rational(2), .s_values = {Rational(1)}}), InvalidArgument);
  EXPECT_THROW(count_kfold(seq, {.k = 7, .alpha = Rational(7), .s_values = {Rational(1)}}), InvalidArgument);
  EXPECT_THROW(count_pair(seq, Rational(5)), InvalidArgument);  // 5/10 is half the circle
  EXPECT_NO_THROW(count_pair(seq, Rational(49, 10)));
  EXPECT_THROW(count_pair(TorusSequence::from_points({}), Rational(1)), InvalidArgument);
}

TEST(KfoldCounts, BudgetIsEnforced) {
  const auto seq = gen_uniform(1, 200);
  EXPECT_THROW(count_kfold(seq, {.k = 2, .s_values = {Rational(1)}}, MemoryBudget{1024}), BudgetExceeded);
  EXPECT_EQ(TupleSumIndex::required_bytes(200, 2), 8u * 200 * 201 / 2);
}

TEST(Invariants, MonotoneInS) {
  for (unsigned k = 1; k <= 2; ++k) {
    const auto seq = gen_uniform(9, 60);
    std::vector<Rational> s;
    for (int i = 0; i <= 40; ++i) s.emplace_back(i, 4);
    const auto r = count_kfold(seq, {.k = k, .alpha = Rational(k), .s_values = s});
    for (std::size_t i = 1; i < r.size(); ++i) EXPECT_LE(r[i - 1].raw_count, r[i].raw_count);
  }
}

TEST(Invariants, StrictNeverExceedsClosed) {
  const auto seq = lattice(40, 7, 2);
  for (unsigned k = 1; k <= 2; ++k)
    for (int s = 0; s <= 6; ++s) {
      const CorrelationQuery le{.k = k, .alpha = Rational(k), .s_values = {Rational(s)}};
      auto lt = le;
      lt.comparison = Comparison::lt;
      EXPECT_LE(count_kfold(seq, lt)[0].raw_count, count_kfold(seq, le)[0].raw_count);
    }
}

TEST(Invariants, CountsAreEvenBySymmetry) {
  for (unsigned k = 1; k <= 3; ++k) {
    const auto r = count_kfold(gen_uniform(k, 40), {.k = k, .alpha = Rational(k), .s_values = kSValues});
    for (const auto& x : r) EXPECT_EQ(x.raw_count % 2, 0u);
  }
}

TEST(Invariants, TranslationAndPermutationInvariant) {
  std::mt19937_64 rng(12);
  const auto base = gen_uniform(12, 80);
  for (unsigned k = 1; k <= 2; ++k) {
    const CorrelationQuery q{.k = k, .alpha = Rational(k), .s_values = kSValues};
    const auto ref = count_kfold(base, q);
    auto w = words(base);
    const std::uint64_t shift = rng();
    for (auto& x : w) x += shift;
    std::shuffle(w.begin(), w.end(), rng);
    const auto moved = count_kfold(from_words(w), q);
    for (std::size_t i = 0; i < ref.size(); ++i) EXPECT_EQ(moved[i].raw_count, ref[i].raw_count);
  }
}

TEST(Invariants, NormalizedIsRawOverPower) {
  const auto r = count_kfold(gen_uniform(2, 50), {.k = 2, .alpha = Rational(2), .s_values = {Rational(3)}});
  EXPECT_DOUBLE_EQ(r[0].normalized, static_cast<double>(r[0].raw_count) / (50.0 * 50.0));
  EXPECT_EQ(r[0].excluded_c, 2u * 50 * 50 - 50);
}

TEST(TupleSumIndex, SelfPairsAndEntries) {
  for (unsigned k = 1; k <= 4; ++k) {
    const TupleSumIndex idx(gen_uniform(1, 12).view(), k);
    EXPECT_EQ(idx.self_pairs(), multiset_equal_count(12, k));
    std::uint64_t multisets = 1;
    for (unsigned i = 0; i < k; ++i) multisets = multisets * (12 + i) / (i + 1);
    EXPECT_EQ(idx.entries(), multisets);
    std::uint64_t weighted = 0;
    for (const auto& c : idx.classes()) weighted += c.weight * c.sums.size();
    EXPECT_EQ(weighted, ipow(12, k));
  }
}

TEST(TupleSumIndex, AllPairsIncludeSelfPairs) {
  const TupleSumIndex idx(gen_uniform(5, 20).view(), 2);
  const auto w = window_radius(Rational(1), 20, Rational(2), Comparison::le);
  const std::vector<WindowRadius> ws{w};
  EXPECT_EQ(idx.count_all_pairs(ws)[0], idx.count_distinct_pairs(w) + idx.self_pairs());
}

TEST(CountCircularPairs, Wraparound) {
  const std::vector<std::uint64_t> xs{0, ~std::uint64_t{0}}, ys{1, std::uint64_t{1} << 63};
  const std::vector<WindowRadius> ws{{false, 1, true}, {false, 2, true}};
  const auto r = count_circular_pairs(xs, ys, ws);
  EXPECT_EQ(r[0], 1u);  // (0, 1)
  EXPECT_EQ(r[1], 2u);  // and (2^64 - 1, 1)
}

TEST(PairCorrelation, EquispacedTies) {
  // N = 128: neighbours at exactly 1/N, every pair distance is a multiple of 1/N
  const auto seq = gen_equispaced(128);
  EXPECT_EQ(count_pair(seq, Rational(1), Comparison::le).raw_count, 256u);
  EXPECT_EQ(count_pair(seq, Rational(1), Comparison::lt).raw_count, 0u);
  EXPECT_EQ(count_pair(seq, Rational(0)).raw_count, 0u);
  EXPECT_EQ(count_pair(seq, Rational(3, 2)).raw_count, 256u);
  EXPECT_EQ(count_pair(seq, Rational(2)).raw_count, 512u);
}

TEST(PairCorrelation, DuplicatedZeroWindow) {
  const auto r = count_pair(gen_duplicated(8, 1000), Rational(0));
  EXPECT_EQ(r.raw_count, 1000u);
  EXPECT_DOUBLE_EQ(r.normalized, 1.0);
}

TEST(PairCorrelation, UniformIsPoissonian) {
  const auto seq = gen_uniform(21, 20000);
  for (int s = 1; s <= 5; ++s) EXPECT_NEAR(count_pair(seq, Rational(s)).normalized, 2.0 * s, 0.1 * 2 * s);
}

TEST(CorrelationDiscrepancy, MatchesDefinition) {
  const auto seq = gen_uniform(31, 25);
  for (unsigned k = 1; k <= 2; ++k) {
    const std::uint64_t t = 6;
    const auto d = correlation_discrepancy(seq, k, t);
    ASSERT_EQ(d.normalized.size(), t + 1);
    const std::uint64_t nk = ipow(25, k);
    std::vector<oracle::Window> ws;
    for (std::uint64_t s = 0; s <= t; ++s) ws.push_back({s, nk, true});
    const auto counts = oracle::kfold_counts(words(seq), k, ws);
    double best = 0;
    for (std::uint64_t s = 0; s <= t; ++s) {
      const double p = static_cast<double>(counts[s]) / static_cast<double>(nk);
      EXPECT_NEAR(d.normalized[s], p, 1e-12);
      best = std::max(best, p - 2.0 * s);
    }
    EXPECT_NEAR(d.value, best, 1e-12);
    EXPECT_GE(d.value, 0.0);
  }
}

TEST(CorrelationDiscrepancy, DuplicatedHasUnitExcessAtZero) {
  const auto d = correlation_discrepancy(gen_duplicated(2, 400), 1, 3);
  EXPECT_EQ(d.normalized[0], 0.0);  // strict window at s = 0 is empty
  EXPECT_GE(d.value, 0.0);
}

TEST(GrepstadLarcher, EquispacedValue) {
  // 128 points: #{m != n : |x_m - x_n| <= s/N} = 2sN, so F = 0
  EXPECT_DOUBLE_EQ(grepstad_larcher_F(gen_equispaced(128), 5), 0.0);
  const auto seq = gen_uniform(77, 30);
  std::vector<oracle::Window> ws;
  for (std::uint64_t s = 1; s <= 4; ++s) ws.push_back({s, 30, false});
  const auto counts = oracle::kfold_counts(words(seq), 1, ws);
  double best = 0;
  for (std::uint64_t s = 1; s <= 4; ++s) best = std::max(best, std::fabs(counts[s - 1] / (2.0 * s) - 30.0));
  EXPECT_DOUBLE_EQ(grepstad_larcher_F(seq, 4), best);
  EXPECT_THROW(grepstad_larcher_F(gen_equispaced(8), 0), InvalidArgument);
}

TEST(GrepstadLarcher, DominatesHalfScaledCorrelationDiscrepancy) {
  for (std::uint64_t seed : {1, 2, 3}) {
    for (const auto& seq : {gen_uniform(seed, 300), gen_duplicated(seed, 300), gen_mirrored(seed, 300),
                            gen_perturbed_pairs(seed, 300)}) {
      for (std::uint64_t t : {1, 3, 10}) {
        const double f = grepstad_larcher_F(seq, t);
        const double d = correlation_discrepancy(seq, 1, t).value;
        EXPECT_GE(f, 300.0 * d / (2.0 * t) - 1e-9) << "seed " << seed << " T " << t;
      }
    }
  }
}

TEST(GrepstadLarcher, AllEqualBreaksUnhalvedRelation) {
  // N equal points, T = 1: F = (N^2 - 3N)/2 while N D / T = N^2 - 3N
  const std::size_t n = 50;
  const auto seq = TorusSequence::from_points(std::vector<TorusPoint>(n, TorusPoint(12345)));
  const double f = grepstad_larcher_F(seq, 1);
  const double d = correlation_discrepancy(seq, 1, 1).value;
  EXPECT_DOUBLE_EQ(f, (50.0 * 50 - 150) / 2);
  EXPECT_DOUBLE_EQ(d, 47.0);
  EXPECT_GT(n * d, f);
  EXPECT_DOUBLE_EQ(n * d / 2, f);
}
