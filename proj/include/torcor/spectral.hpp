#pragma once

// Weyl sums S_N(m) = (1/N) sum_n e(m x_n), the triangle test function and its
// transform, and the Fourier identity for the 2k-fold correlation sum.

#include <complex>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <span>
#include <vector>

#include "torcor/budget.hpp"
#include "torcor/sequence.hpp"

namespace torcor {

/// exp(2 pi i phase / 2^64). The phase is reduced exactly (it is an integer),
/// then evaluated from two 4096-entry tables and a cubic Taylor correction.
std::complex<double> unit_phasor(std::uint64_t phase);

/// Worst-case absolute error of unit_phasor.
inline constexpr double kPhasorError = 8.0 * 0x1p-52;

enum class WeylMethod {
  automatic,  // cheaper of the two by operation count
  direct,     // N trigonometric terms per frequency, compensated summation
  fast,       // blocked Taylor expansion on a uniform grid + FFT
};

inline constexpr std::uint64_t kMaxFrequenciesPerCall = 100'000'000;

/// Receives S_N(m) for m = first, first+1, ... in consecutive blocks.
using WeylBlockFn = std::function<void(std::uint64_t first, std::span<const std::complex<double>> values)>;

/// Streams S_N(m) for first <= m <= last. Returns the per-entry absolute error bound.
double stream_weyl_sums(std::span<const TorusPoint> points, std::uint64_t first, std::uint64_t last,
                        WeylMethod method, const WeylBlockFn& sink);

/// Method `automatic` resolves to for a given size.
WeylMethod choose_weyl_method(std::uint64_t n, std::uint64_t frequencies);

struct WeylSumTable {
  std::uint64_t n = 0;
  std::vector<std::complex<double>> values;  // values[m - 1] = S_N(m)
  double error_bound = 0;                    // per entry, absolute

  std::uint64_t size() const { return values.size(); }
  std::complex<double> at(std::uint64_t m) const { return values.at(m - 1); }

  /// Columns m, re, im, abs.
  void write_csv(std::ostream& out) const;
};

WeylSumTable weyl_sums(const TorusSequence& seq, std::uint64_t max_frequency,
                       WeylMethod method = WeylMethod::automatic, MemoryBudget budget = MemoryBudget::from_env());

/// floor(N^alpha / (4t)); alpha = k gives the critical scaling.
std::uint64_t lemma_cutoff(std::uint64_t n, double alpha, double t);

/// sum_{m=1}^{floor(N^alpha / (4t))} |S_N(m)|^{2k}, alpha defaulting to k.
double lemma_power_sum(const WeylSumTable& table, unsigned k, double t);
double lemma_power_sum(const WeylSumTable& table, unsigned k, double t, double alpha);

struct PowerSums {
  std::vector<double> values;  // one per requested cutoff
  double error_bound = 0;      // absolute, for the largest cutoff
};

/// Prefix sums sum_{m=1}^{c} |S_N(m)|^{2k} for every c in `cutoffs`, streamed without a table.
PowerSums power_sum_prefixes(std::span<const TorusPoint> points, unsigned k, std::span<const std::uint64_t> cutoffs,
                             WeylMethod method = WeylMethod::automatic);

/// sin(pi x) with exact zeros at the integers.
double sin_pi(double x);

/// f(x) = (t - |x|) / t^2 on [-t, t], zero outside.
double triangle_f(double x, double t);

/// (sin(pi xi t) / (pi xi t))^2, equal to 1 at xi = 0.
double triangle_fhat(double xi, double t);

struct IdentityCheckReport {
  std::uint64_t n = 0;
  unsigned k = 1;
  double t = 0;
  std::uint64_t max_frequency = 0;
  double a_direct = 0;        // (1/N^k) sum over all tuple pairs of F_N(difference)
  double a_fourier = 0;       // 1 + 2 sum_{m=1}^{M} fhat(m/N^k) |S_N(m)|^{2k}
  double r_direct = 0;        // same as a_direct, multiset-equal pairs excluded
  double r_from_identity = 0; // a_direct - C f(0) / N^k
  std::uint64_t excluded_c = 0;
  double tail_bound = 0;      // 2 sum_{m>M} fhat(m/N^k)
  double rounding_bound = 0;
  bool holds = false;         // |a_direct - a_fourier| <= tail_bound + rounding_bound
};

/// Largest N^{2k} accepted by the direct tuple summation.
inline constexpr std::uint64_t kMaxIdentityTuplePairs = 100'000'000;

IdentityCheckReport fourier_identity_check(const TorusSequence& seq, unsigned k, double t,
                                           std::uint64_t max_frequency, WeylMethod method = WeylMethod::automatic);

/// Smallest M with 2 (N^k / (pi t))^2 / M <= tolerance.
std::uint64_t identity_frequencies_for(std::uint64_t n, unsigned k, double t, double tolerance);

}  // namespace torcor
