#include "torcor/discrepancy.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "torcor/correlation.hpp"
#include "torcor/error.hpp"

namespace torcor {

namespace {

double factorial(unsigned k) {
  double f = 1;
  for (unsigned i = 2; i <= k; ++i) f *= i;
  return f;
}

std::vector<std::uint64_t> sorted_words(std::span<const TorusPoint> points) {
  std::vector<std::uint64_t> w(points.size());
  std::transform(points.begin(), points.end(), w.begin(), [](TorusPoint p) { return p.word(); });
  std::sort(w.begin(), w.end());
  return w;
}

// #{x_n < x} over sorted words, for a threshold given as a word (2^64 means everything).
std::uint64_t count_below(const std::vector<std::uint64_t>& w, u128 threshold) {
  if (threshold > std::numeric_limits<std::uint64_t>::max()) return w.size();
  return static_cast<std::uint64_t>(
      std::lower_bound(w.begin(), w.end(), static_cast<std::uint64_t>(threshold)) - w.begin());
}

void check_bound_inputs(const BoundInputs& in) {
  if (in.k < 1) throw InvalidArgument("k must be at least 1");
  if (in.n < 1) throw InvalidArgument("N must be at least 1");
  if (!(in.t > 0)) throw InvalidArgument("T must be positive");
  if (in.d2k < 0 || in.f < 0 || in.delta < 0) throw InvalidArgument("bound inputs must be nonnegative");
  if (in.alpha < 0 || in.alpha > in.k) throw InvalidArgument("alpha must lie in [0, k]");
}

}  // namespace

double exact_discrepancy(std::span<const TorusPoint> points) {
  const std::uint64_t n = points.size();
  if (n == 0) throw InvalidArgument("discrepancy of an empty sequence");
  const auto w = sorted_words(points);
  // G_i = i 2^64 - N u_i  (i is 1-based), so g_i = G_i / (N 2^64)
  i128 lo = std::numeric_limits<i128>::max();
  i128 hi = std::numeric_limits<i128>::min();
  for (std::uint64_t i = 0; i < n; ++i) {
    const i128 g = (static_cast<i128>(i + 1) << 64) - static_cast<i128>(static_cast<u128>(n) * w[i]);
    lo = std::min(lo, g);
    hi = std::max(hi, g);
  }
  const long double spread = static_cast<long double>(hi - lo) * 0x1p-64L;
  return 1.0 / static_cast<double>(n) + static_cast<double>(spread / static_cast<long double>(n));
}

double exact_discrepancy(const TorusSequence& seq) { return exact_discrepancy(seq.view()); }

double grid_discrepancy(const TorusSequence& seq, std::uint64_t grid) {
  if (grid < 1) throw InvalidArgument("grid needs at least one cell");
  const std::uint64_t n = seq.size();
  if (n == 0) throw InvalidArgument("discrepancy of an empty sequence");
  const auto w = sorted_words(seq.view());
  // h_j = #{x < j/G} - j N / G over half-open grid arcs [a/G, b/G)
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  for (std::uint64_t j = 0; j < grid; ++j) {
    const u128 num = static_cast<u128>(j) << 64;
    const u128 threshold = num / grid + (num % grid != 0 ? 1 : 0);
    const double h = static_cast<double>(count_below(w, threshold)) -
                     static_cast<double>(j) * static_cast<double>(n) / static_cast<double>(grid);
    lo = std::min(lo, h);
    hi = std::max(hi, h);
  }
  return (hi - lo) / static_cast<double>(n);
}

double erdos_turan_bound(const WeylSumTable& table, std::uint64_t m, EtConstants c) {
  if (m > table.size())
    throw InvalidArgument("Erdos-Turan cutoff M = " + std::to_string(m) + " exceeds the table length " +
                          std::to_string(table.size()));
  double sum = 0;
  for (std::uint64_t j = m; j >= 1; --j) sum += std::abs(table.values[j - 1]) / static_cast<double>(j);
  return c.c_add / static_cast<double>(m + 1) + c.c_mul * sum;
}

Theorem5Bound theorem5_bound(const BoundInputs& in, EtConstants c) {
  check_bound_inputs(in);
  const double k = in.k;
  const double nk = std::pow(static_cast<double>(in.n), k);
  const double kf = factorial(in.k);
  Theorem5Bound b;
  b.constants = c;
  b.spacing_term = in.t / nk;
  b.correlation_term = k * std::pow(kf / in.t + in.d2k / in.t, 1 / (2 * k));
  b.value = b.spacing_term + b.correlation_term;
  b.m = static_cast<std::uint64_t>(std::floor(nk / (4 * in.t)));
  b.explicit_value = c.c_add / static_cast<double>(b.m + 1) +
                     c.c_mul * std::pow(2 * k, (2 * k - 1) / (2 * k)) *
                         std::pow((kf + 1 + in.d2k) / in.t, 1 / (2 * k));
  return b;
}

double alpha_bound(const BoundInputs& in) {
  check_bound_inputs(in);
  const double k = in.k;
  const double n = static_cast<double>(in.n);
  const double inner = factorial(in.k) / (in.t * std::pow(n, k - in.alpha)) + in.f / in.t;
  return in.t / std::pow(n, in.alpha) + k * std::pow(inner, 1 / (2 * k));
}

OptimizedBound optimize_alpha_bound(BoundInputs in) {
  auto eval = [&](double log_t) {
    in.t = std::exp(log_t);
    return alpha_bound(in);
  };
  constexpr double kLo = -60, kHi = 60;
  constexpr int kSteps = 480;
  int best = 0;
  double best_v = std::numeric_limits<double>::infinity();
  for (int i = 0; i <= kSteps; ++i) {
    const double v = eval(kLo + (kHi - kLo) * i / kSteps);
    if (v < best_v) {
      best_v = v;
      best = i;
    }
  }
  const double h = (kHi - kLo) / kSteps;
  double a = kLo + h * (best - 1), b = kLo + h * (best + 1);
  const double g = (std::sqrt(5.0) - 1) / 2;
  double x1 = b - g * (b - a), x2 = a + g * (b - a);
  double f1 = eval(x1), f2 = eval(x2);
  for (int it = 0; it < 200; ++it) {
    if (f1 < f2) {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - g * (b - a);
      f1 = eval(x1);
    } else {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + g * (b - a);
      f2 = eval(x2);
    }
  }
  const double x = (a + b) / 2;
  return {std::exp(x), eval(x)};
}

DeltaFormBound delta_form_bound(const BoundInputs& in) {
  check_bound_inputs(in);
  const double k = in.k;
  const double n = static_cast<double>(in.n);
  DeltaFormBound b;
  b.pair_form = in.t / n + 1 / std::sqrt(in.t) + std::sqrt(in.delta);
  b.general_form =
      in.t / std::pow(n, k) + std::pow(k, 1.5) * std::pow(in.t, -1 / (2 * k)) + std::pow(in.delta, 1 / (2 * k));
  return b;
}

double random_envelope(unsigned k, double n) {
  if (k < 1) throw InvalidArgument("k must be at least 1");
  return std::pow(static_cast<double>(k), 1.5) * std::pow(n, -1 / (2 + 1.0 / k));
}

double weak_correlation_excess(const TorusSequence& seq, unsigned k, Rational alpha, std::uint64_t t) {
  CorrelationQuery q{k, alpha, {}, Comparison::le};
  for (std::uint64_t s = 1; s <= t; ++s) q.s_values.emplace_back(static_cast<std::int64_t>(s));
  double f = 0;
  for (const auto& r : count_kfold(seq, q)) f = std::max(f, r.normalized - 2 * r.s.to_double());
  return f;
}

double excess_ratio(const TorusSequence& seq, std::uint64_t t) {
  CorrelationQuery q{1, Rational(1), {}, Comparison::le};
  for (std::uint64_t s = 1; s <= t; ++s) q.s_values.emplace_back(static_cast<std::int64_t>(s));
  double d = 0;
  for (const auto& r : count_kfold(seq, q)) d = std::max(d, r.normalized / (2 * r.s.to_double()) - 1);
  return d;
}

std::vector<KeyInequality> key_inequality_sweep(const TorusSequence& seq, unsigned k, std::uint64_t t_max,
                                                WeylMethod method) {
  if (t_max < 1) throw InvalidArgument("T must be at least 1");
  const std::uint64_t n = seq.size();
  std::vector<std::uint64_t> cutoffs(t_max);
  for (std::uint64_t t = 1; t <= t_max; ++t) {
    const std::uint64_t c = lemma_cutoff(n, static_cast<double>(k), static_cast<double>(t));
    if (c < 1)
      throw InvalidArgument("key inequality needs floor(N^k / 4T) >= 1 (N=" + std::to_string(n) +
                            ", k=" + std::to_string(k) + ", T=" + std::to_string(t) + ")");
    cutoffs[t_max - t] = c;
  }
  const auto sums = power_sum_prefixes(seq.view(), k, cutoffs, method);
  const auto disc = correlation_discrepancy(seq, k, t_max);

  std::vector<KeyInequality> out(t_max);
  const double kf = factorial(k);
  double running = std::max(0.0, disc.normalized[0]);
  for (std::uint64_t t = 1; t <= t_max; ++t) {
    running = std::max(running, disc.normalized[t] - 2.0 * static_cast<double>(t));
    auto& r = out[t - 1];
    r.k = k;
    r.t = t;
    r.cutoff = cutoffs[t_max - t];
    r.lhs = sums.values[t_max - t];
    r.lhs_error = sums.error_bound;
    r.d2k = running;
    r.rhs = (kf + 1 + running) / static_cast<double>(t);
    r.margin = r.rhs - r.lhs;
    r.holds = r.margin >= 0;
  }
  return out;
}

KeyInequality key_inequality_check(const TorusSequence& seq, unsigned k, std::uint64_t t, WeylMethod method) {
  return key_inequality_sweep(seq, k, t, method).back();
}

DiscrepancyReport discrepancy_report(const TorusSequence& seq, std::uint64_t m, unsigned k, std::uint64_t t,
                                     EtConstants c) {
  DiscrepancyReport r;
  r.n = seq.size();
  r.d_n = exact_discrepancy(seq);
  r.m = m;
  r.constants = c;
  r.k = k;
  r.t = t;
  const auto table = weyl_sums(seq, std::max<std::uint64_t>(m, 1));
  r.et_bound = erdos_turan_bound(table, m, c);
  r.d2k = correlation_discrepancy(seq, k, t).value;
  BoundInputs in;
  in.k = k;
  in.t = static_cast<double>(t);
  in.n = r.n;
  in.d2k = r.d2k;
  in.alpha = k;
  r.theorem5 = theorem5_bound(in, c);
  r.f_tn = grepstad_larcher_F(seq, t);
  r.delta = excess_ratio(seq, t);
  return r;
}

}  // namespace torcor
