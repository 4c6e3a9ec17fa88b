#pragma once

// Exact counting of 2k-fold difference statistics.
//
// For index tuples a = (a_1..a_k), b = (b_1..b_k) the signed sum
// x_{a_1} + ... + x_{a_k} - x_{b_1} - ... - x_{b_k} is compared against a window
// s / N^alpha. Counts are over ordered tuple pairs whose index multisets differ.
//
// Tuple sums are enumerated once per index multiset (nondecreasing tuples)
// with the number of orderings as weight, grouped by weight, and sorted. A
// circular two-pointer sweep then counts weighted pairs inside a window.
// Pairs with equal index multisets always have difference exactly zero; their
// number C = sum of squared weights is subtracted from every non-empty window.

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "torcor/budget.hpp"
#include "torcor/sequence.hpp"
#include "torcor/torus.hpp"

namespace torcor {

inline constexpr unsigned kMaxFold = 6;

/// #{(a, b) in [N]^k x [N]^k : multiset(a) == multiset(b)}. Requires 1 <= k <= 6.
std::uint64_t multiset_equal_count(std::uint64_t n, unsigned k);

/// Word radius for the window s / N^alpha under the given comparison.
/// Exact whenever N^alpha is an integer (any integer alpha, or perfect powers);
/// otherwise N^alpha is evaluated once in long double and `exact` is false.
/// Throws InvalidArgument when the window is at least half the circle.
WindowRadius window_radius(Rational s, std::uint64_t n, Rational alpha, Comparison cmp);

/// N^{2k - alpha}.
long double correlation_normalizer(std::uint64_t n, unsigned k, Rational alpha);

struct SumClass {
  std::uint64_t weight = 0;          // orderings per index multiset
  std::vector<std::uint64_t> sums;   // sorted tuple-sum words
};

class TupleSumIndex {
 public:
  TupleSumIndex(std::span<const TorusPoint> points, unsigned k, MemoryBudget budget = MemoryBudget::from_env());

  /// Bytes needed for the stored sums, C(N+k-1, k) * 8 (saturating).
  static std::uint64_t required_bytes(std::uint64_t n, unsigned k);

  unsigned k() const { return k_; }
  std::uint64_t n() const { return n_; }
  const std::vector<SumClass>& classes() const { return classes_; }
  std::uint64_t entries() const;
  std::uint64_t memory_bytes() const { return 8 * entries(); }

  /// Sum over stored multisets of weight^2; equals multiset_equal_count(N, k).
  std::uint64_t self_pairs() const;

  /// Weighted ordered tuple pairs within each window, multiset-equal pairs included.
  std::vector<std::uint64_t> count_all_pairs(std::span<const WindowRadius> windows) const;

  /// Same, with multiset-equal pairs removed.
  std::vector<std::uint64_t> count_distinct_pairs(std::span<const WindowRadius> windows) const;
  std::uint64_t count_distinct_pairs(const WindowRadius& window) const;

 private:
  unsigned k_;
  std::uint64_t n_;
  std::vector<SumClass> classes_;
};

/// Ordered pairs (x, y) in X x Y with circular distance inside each window.
/// X and Y must be sorted ascending.
std::vector<std::uint64_t> count_circular_pairs(std::span<const std::uint64_t> xs,
                                                std::span<const std::uint64_t> ys,
                                                std::span<const WindowRadius> windows);

struct CorrelationQuery {
  unsigned k = 1;
  Rational alpha{1};
  std::vector<Rational> s_values;
  Comparison comparison = Comparison::le;
};

struct CorrelationResult {
  unsigned k = 1;
  Rational alpha{1};
  Rational s{};
  std::uint64_t n = 0;
  std::uint64_t raw_count = 0;    // ordered tuple pairs, distinct multisets, inside the window
  std::uint64_t excluded_c = 0;   // multiset-equal pairs (not part of raw_count)
  double normalized = 0;          // raw_count / N^{2k - alpha}
  Comparison comparison = Comparison::le;
  bool exact_threshold = true;
};

/// Every s in the query, sharing one tuple-sum index. Alpha defaults to k when
/// the query carries alpha = k; 0 <= alpha <= k is required.
std::vector<CorrelationResult> count_kfold(const TorusSequence& seq, const CorrelationQuery& query,
                                           MemoryBudget budget = MemoryBudget::from_env());
std::vector<CorrelationResult> count_kfold(const TupleSumIndex& index, const CorrelationQuery& query);

/// Pair correlation #{m != n : |x_m - x_n| <= s/N}, normalized by N.
CorrelationResult count_pair(const TorusSequence& seq, Rational s, Comparison cmp = Comparison::le);

struct CorrelationDiscrepancy {
  unsigned k = 1;
  std::uint64_t t = 0;
  double value = 0;                     // max_{s=0..T} (P_s - 2s) >= 0
  std::uint64_t argmax_s = 0;
  std::vector<double> normalized;       // P_s for s = 0..T (strict window s/N^k)
};

CorrelationDiscrepancy correlation_discrepancy(const TorusSequence& seq, unsigned k, std::uint64_t t,
                                               MemoryBudget budget = MemoryBudget::from_env());
CorrelationDiscrepancy correlation_discrepancy(const TupleSumIndex& index, std::uint64_t t);

/// max_{s=1..T} |(1/2s) #{m != n : |x_m - x_n| <= s/N} - N|.
double grepstad_larcher_F(const TorusSequence& seq, std::uint64_t t);

}  // namespace torcor
