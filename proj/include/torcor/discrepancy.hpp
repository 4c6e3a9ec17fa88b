#pragma once

// Extreme discrepancy on the circle, the Erdos-Turan bound and evaluators for
// the correlation-based discrepancy bounds.

#include <cstdint>
#include <vector>

#include "torcor/sequence.hpp"
#include "torcor/spectral.hpp"

namespace torcor {

/// sup over circular arcs A of |#{n : x_n in A}/N - |A||.
/// Sorted points give the closed form 1/N + max_i g_i - min_i g_i with
/// g_i = i/N - x_(i), evaluated in exact integer arithmetic.
double exact_discrepancy(const TorusSequence& seq);
double exact_discrepancy(std::span<const TorusPoint> points);

/// Same supremum restricted to arcs with endpoints on the grid j/G.
/// Satisfies grid <= exact <= grid + 2/G.
double grid_discrepancy(const TorusSequence& seq, std::uint64_t grid);

struct EtConstants {
  double c_add = 1;
  double c_mul = 3;
};

/// C_add/(M+1) + C_mul sum_{m=1}^{M} |S_N(m)|/m.
double erdos_turan_bound(const WeylSumTable& table, std::uint64_t m, EtConstants c = {});

struct BoundInputs {
  unsigned k = 1;
  double t = 1;
  std::uint64_t n = 1;
  double d2k = 0;     // correlation discrepancy
  double f = 0;       // weak-correlation excess at rate alpha
  double alpha = 1;
  double delta = 0;   // excess ratio
};

struct Theorem5Bound {
  double value = 0;           // T/N^k + k (k!/T + D/T)^{1/2k}
  double spacing_term = 0;    // T/N^k
  double correlation_term = 0;
  double explicit_value = 0;  // C_add/(M+1) + C_mul (2k)^{(2k-1)/2k} ((k!+1+D)/T)^{1/2k}, M = floor(N^k/4T)
  std::uint64_t m = 0;
  EtConstants constants;
};

Theorem5Bound theorem5_bound(const BoundInputs& in, EtConstants c = {});

/// T/N^alpha + k (k!/(T N^{k-alpha}) + F/T)^{1/2k}; T is any positive real.
double alpha_bound(const BoundInputs& in);

struct OptimizedBound {
  double t = 0;
  double value = 0;
};

/// Minimizes alpha_bound over T > 0 (other inputs fixed).
OptimizedBound optimize_alpha_bound(BoundInputs in);

struct DeltaFormBound {
  double pair_form = 0;     // T/N + 1/sqrt(T) + sqrt(delta)
  double general_form = 0;  // T/N^k + k^{3/2} T^{-1/2k} + delta^{1/2k}
};

DeltaFormBound delta_form_bound(const BoundInputs& in);

/// k^{3/2} N^{-1/(2+1/k)}.
double random_envelope(unsigned k, double n);

/// max(0, max_{s=1..T} normalized count at s/N^alpha - 2s), <= windows.
double weak_correlation_excess(const TorusSequence& seq, unsigned k, Rational alpha, std::uint64_t t);

/// max(0, max_{s=1..T} P_s/(2s) - 1) for the pair correlation with <= windows.
double excess_ratio(const TorusSequence& seq, std::uint64_t t);

struct KeyInequality {
  unsigned k = 1;
  std::uint64_t t = 0;
  std::uint64_t cutoff = 0;  // floor(N^k / 4T)
  double lhs = 0;            // sum_{m<=cutoff} |S_N(m)|^{2k}
  double lhs_error = 0;
  double d2k = 0;
  double rhs = 0;            // (k! + 1 + D) / T
  double margin = 0;         // rhs - lhs
  bool holds = false;
};

/// Checks sum_{m=1}^{floor(N^k/4T)} |S_N(m)|^{2k} <= (k! + 1 + D^{(2k)}_{T,N}) / T.
KeyInequality key_inequality_check(const TorusSequence& seq, unsigned k, std::uint64_t t,
                                   WeylMethod method = WeylMethod::automatic);

/// The same for T = 1..t_max, sharing the tuple-sum index and one spectral pass.
std::vector<KeyInequality> key_inequality_sweep(const TorusSequence& seq, unsigned k, std::uint64_t t_max,
                                                WeylMethod method = WeylMethod::automatic);

struct DiscrepancyReport {
  std::uint64_t n = 0;
  double d_n = 0;
  double et_bound = 0;
  std::uint64_t m = 0;
  EtConstants constants;
  unsigned k = 1;
  std::uint64_t t = 0;
  double d2k = 0;
  Theorem5Bound theorem5;
  double f_tn = 0;    // Grepstad-Larcher statistic
  double delta = 0;
};

/// Exact D_N, the Erdos-Turan bound at M, and the correlation bounds at (k, T).
DiscrepancyReport discrepancy_report(const TorusSequence& seq, std::uint64_t m, unsigned k, std::uint64_t t,
                                     EtConstants c = {});

}  // namespace torcor
