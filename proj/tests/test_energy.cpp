#include <gtest/gtest.h>

#include <random>
#include <set>

#include "oracles.hpp"
#include "torcor/correlation.hpp"
#include "torcor/energy.hpp"
#include "torcor/error.hpp"
#include "torcor/sequence.hpp"

using namespace torcor;

namespace {

std::vector<std::uint64_t> linear(std::uint64_t n) {
  std::vector<std::uint64_t> a(n);
  for (std::uint64_t i = 0; i < n; ++i) a[i] = i + 1;
  return a;
}

std::uint64_t brute(const std::vector<std::uint64_t>& a) {
  std::vector<std::int64_t> b(a.begin(), a.end());
  return oracle::energy_brute(b);
}

}  // namespace

TEST(AdditiveEnergy, LinearClosedForm) {
  for (std::uint64_t n : {1, 2, 3, 10, 100, 1000}) EXPECT_EQ(additive_energy(linear(n)), (2 * n * n * n + n) / 3) << n;
}

TEST(AdditiveEnergy, SidonSetsAreTrivial) {
  std::vector<std::uint64_t> a;
  for (int i = 1; i <= 60; ++i) a.push_back(std::uint64_t{1} << i);
  EXPECT_EQ(additive_energy(a), 2u * 60 * 60 - 60);
}

TEST(AdditiveEnergy, MatchesBruteForce) {
  std::mt19937_64 rng(4);
  for (int trial = 0; trial < 20; ++trial) {
    std::set<std::uint64_t> s;
    const std::size_t n = 5 + rng() % 30;
    while (s.size() < n) s.insert(1 + rng() % 200);
    const std::vector<std::uint64_t> a(s.begin(), s.end());
    EXPECT_EQ(additive_energy(a), brute(a));
  }
  std::vector<std::uint64_t> squares;
  for (std::uint64_t i = 1; i <= 40; ++i) squares.push_back(i * i);
  EXPECT_EQ(additive_energy(squares), brute(squares));
}

TEST(AdditiveEnergy, TrivialBounds) {
  std::mt19937_64 rng(5);
  std::set<std::uint64_t> s;
  while (s.size() < 300) s.insert(1 + rng() % 100000);
  const std::vector<std::uint64_t> a(s.begin(), s.end());
  const std::uint64_t e = additive_energy(a), n = a.size();
  EXPECT_GE(e, 2 * n * n - n);
  EXPECT_LE(e, n * n * n);
}

TEST(AdditiveEnergy, BigIntAgreesAndExtends) {
  std::vector<BigInt> lin;
  for (int i = 1; i <= 200; ++i) lin.emplace_back(i);
  EXPECT_EQ(additive_energy(lin), BigInt(additive_energy(linear(200))));
  std::vector<BigInt> geo;
  for (int i = 1; i <= 200; ++i) geo.push_back(BigInt(1) << i);
  EXPECT_EQ(additive_energy(geo), BigInt(2 * 200 * 200 - 200));
}

TEST(AdditiveEnergy, Validation) {
  const std::vector<std::uint64_t> not_increasing{1, 3, 3}, zero{0, 1}, empty;
  EXPECT_THROW(additive_energy(not_increasing), InvalidArgument);
  EXPECT_THROW(additive_energy(zero), InvalidArgument);
  EXPECT_THROW(additive_energy(empty), InvalidArgument);
  EXPECT_THROW(additive_energy(linear(1000), MemoryBudget{1000}), BudgetExceeded);
}

TEST(ParseIntegers, Formats) {
  EXPECT_EQ(parse_integer_sequence("1\n2\n\n# comment\n  5  \n7 # trailing\n"),
            (std::vector<std::uint64_t>{1, 2, 5, 7}));
  EXPECT_EQ(parse_integer_sequence("3\r\n4\r\n"), (std::vector<std::uint64_t>{3, 4}));
  EXPECT_TRUE(parse_integer_sequence("").empty());
  try {
    parse_integer_sequence("1\n2x\n");
    FAIL() << "expected ParseError";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.offset(), 3u);
  }
  EXPECT_THROW(parse_integer_sequence("-4\n"), ParseError);
}

TEST(Classifier, LinearObstructsGeometricDoesNot) {
  const auto lin = linear(800);
  const std::vector<std::uint64_t> prefixes{100, 200, 400, 800};
  const auto v = energy_classifier(lin, prefixes, 0.5);
  EXPECT_NEAR(v.slope, 3.0, 0.01);
  EXPECT_TRUE(v.obstructs_fourfold);
  EXPECT_FALSE(v.sub_cubic);
  ASSERT_EQ(v.samples.size(), 4u);
  EXPECT_EQ(v.samples[0].energy, (2u * 100 * 100 * 100 + 100) / 3);

  std::vector<std::uint64_t> geo;
  for (int i = 1; i <= 60; ++i) geo.push_back(std::uint64_t{1} << i);
  const std::vector<std::uint64_t> gp{8, 16, 32, 60};
  const auto g = energy_classifier(geo, gp, 0.5);
  EXPECT_NEAR(g.slope, 2.0, 0.05);
  EXPECT_FALSE(g.obstructs_fourfold);
  EXPECT_TRUE(g.sub_cubic);
  for (const auto& s : g.samples) EXPECT_DOUBLE_EQ(s.excess, 0.0);
}

TEST(Classifier, Validation) {
  const auto a = linear(10);
  const std::vector<std::uint64_t> two{2, 4}, unsorted{2, 5, 4}, too_long{2, 5, 11};
  EXPECT_THROW(energy_classifier(a, two, 0.5), InvalidArgument);
  EXPECT_THROW(energy_classifier(a, unsorted, 0.5), InvalidArgument);
  EXPECT_THROW(energy_classifier(a, too_long, 0.5), InvalidArgument);
}

TEST(EnergyLink, ZeroFourfoldCountOfDilatedSequence) {
  // zero four-fold differences are the additive quadruples minus the multiset-equal ones
  for (std::uint64_t n : {20, 50}) {
    const auto a = linear(n);
    const auto seq = gen_dilated(a, kGoldenFraction);
    const auto r = count_kfold(seq, {.k = 2, .alpha = Rational(2), .s_values = {Rational(0)}});
    EXPECT_EQ(r[0].raw_count, additive_energy(a) - 2 * n * n + n);
  }
}
