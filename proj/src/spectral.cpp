#include "torcor/spectral.hpp"

#include <fftw3.h>

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <limits>
#include <memory>
#include <mutex>
#include <numbers>
#include <ostream>
#include <string>

#include "torcor/correlation.hpp"
#include "torcor/error.hpp"

namespace torcor {

namespace {

constexpr double kEps = 0x1p-53;

// Complex product without NaN recovery.
inline std::complex<double> cmul(std::complex<double> a, std::complex<double> b) {
  return {a.real() * b.real() - a.imag() * b.imag(), a.real() * b.imag() + a.imag() * b.real()};
}
constexpr long double kTwoPiL = 2.0L * std::numbers::pi_v<long double>;

struct PhasorTables {
  std::array<std::complex<double>, 4096> coarse;  // e(j / 2^12)
  std::array<std::complex<double>, 4096> fine;    // e(j / 2^24)

  PhasorTables() {
    for (int j = 0; j < 4096; ++j) {
      const long double a = kTwoPiL * j / 4096.0L;
      const long double b = kTwoPiL * j / 16777216.0L;
      coarse[j] = {static_cast<double>(std::cos(a)), static_cast<double>(std::sin(a))};
      fine[j] = {static_cast<double>(std::cos(b)), static_cast<double>(std::sin(b))};
    }
  }
};

const PhasorTables& tables() {
  static const PhasorTables t;
  return t;
}

struct Neumaier {
  double sum = 0;
  double comp = 0;

  void add(double v) {
    const double t = sum + v;
    if (std::abs(sum) >= std::abs(v))
      comp += (sum - t) + v;
    else
      comp += (v - t) + sum;
    sum = t;
  }
  double value() const { return sum + comp; }
};

std::complex<double> direct_sum(const std::uint64_t* words, std::size_t n, std::uint64_t m) {
  Neumaier re, im;
  for (std::size_t i = 0; i < n; ++i) {
    const auto z = unit_phasor(m * words[i]);
    re.add(z.real());
    im.add(z.imag());
  }
  const double inv = 1.0 / static_cast<double>(n);
  return {re.value() * inv, im.value() * inv};
}

constexpr double kDirectError = kPhasorError + 6 * kEps;

// Taylor-expanded nonuniform transform on blocks of B consecutive frequencies.
class FastWeyl {
 public:
  FastWeyl(std::span<const TorusPoint> points, unsigned log2_block)
      : n_(points.size()), log2_l_(log2_block), l_(std::size_t{1} << log2_block) {
    const unsigned shift = 64 - log2_l_;
    const std::uint64_t half = std::uint64_t{1} << (shift - 1);
    cells_.resize(n_);
    eta_.resize(n_);
    words_.resize(n_);
    std::vector<double> occupancy(l_, 0.0);
    for (std::size_t i = 0; i < n_; ++i) {
      const std::uint64_t u = points[i].word();
      words_[i] = u;
      const std::uint64_t j = ((u + half) >> shift) & (l_ - 1);
      const auto rem = static_cast<std::int64_t>(u - (j << shift));
      cells_[i] = static_cast<std::uint32_t>(j);
      eta_[i] = std::ldexp(static_cast<double>(rem), -static_cast<int>(shift));
      occupancy[j] += 1;
    }
    double sq = 0;
    for (double c : occupancy) sq += c * c;
    occupancy_l2_ = std::sqrt(sq);

    const double z = std::numbers::pi / 2;
    double term = 1;
    terms_ = 0;
    for (unsigned p = 0;; ++p) {
      const double tail = p + 1 > 2 * z ? term / (1 - z / (p + 1)) : 1.0;
      if (tail <= kEps / 2 || p > 60) {
        truncation_ = tail;
        terms_ = p;
        break;
      }
      term *= z / (p + 1);
    }

    std::lock_guard lock(plan_mutex());
    in_.reset(fftw_alloc_complex(l_));
    out_.reset(fftw_alloc_complex(l_));
    plan_ = fftw_plan_dft_1d(static_cast<int>(l_), in_.get(), out_.get(), FFTW_BACKWARD, FFTW_ESTIMATE);
    if (plan_ == nullptr) throw Error("FFT plan creation failed");
  }

  ~FastWeyl() {
    std::lock_guard lock(plan_mutex());
    fftw_destroy_plan(plan_);
  }

  FastWeyl(const FastWeyl&) = delete;
  FastWeyl& operator=(const FastWeyl&) = delete;

  std::size_t block() const { return l_; }
  unsigned terms() const { return terms_; }

  double error_bound() const {
    const double fft = 5 * kEps * log2_l_ * std::sqrt(static_cast<double>(l_)) * occupancy_l2_ / n_;
    return truncation_ + kPhasorError + std::exp(std::numbers::pi / 2) * (fft + 4 * terms_ * kEps);
  }

  // S(m0 + r) for r in [-B/2, B/2), written to out[r + B/2].
  void evaluate(std::uint64_t m0, std::vector<std::complex<double>>& out) {
    const std::size_t b = l_;
    out.assign(b, {0, 0});
    weights_.resize(n_);
    for (std::size_t i = 0; i < n_; ++i) weights_[i] = unit_phasor(m0 * words_[i]);
    coef_.resize(b);
    for (std::size_t idx = 0; idx < b; ++idx) coef_[idx] = {1, 0};

    auto* in = reinterpret_cast<std::complex<double>*>(in_.get());
    const auto* fft = reinterpret_cast<const std::complex<double>*>(out_.get());
    const double scale = 2 * std::numbers::pi / static_cast<double>(l_);
    for (unsigned p = 0; p < terms_; ++p) {
      std::fill(in, in + l_, std::complex<double>{0, 0});
      for (std::size_t i = 0; i < n_; ++i) {
        in[cells_[i]] += weights_[i];
        weights_[i] *= eta_[i];
      }
      fftw_execute(plan_);
      for (std::size_t idx = 0; idx < b; ++idx) {
        const auto r = static_cast<std::int64_t>(idx) - static_cast<std::int64_t>(b / 2);
        const std::size_t bin = static_cast<std::size_t>(r) & (l_ - 1);
        out[idx] += cmul(coef_[idx], fft[bin]);
        coef_[idx] = cmul(coef_[idx], {0, scale * static_cast<double>(r) / (p + 1)});
      }
    }
    const double inv = 1.0 / static_cast<double>(n_);
    for (auto& v : out) v *= inv;
  }

 private:
  static std::mutex& plan_mutex() {
    static std::mutex m;
    return m;
  }

  struct FftwFree {
    void operator()(fftw_complex* p) const { fftw_free(p); }
  };

  std::size_t n_;
  unsigned log2_l_;
  std::size_t l_;
  std::vector<std::uint32_t> cells_;
  std::vector<double> eta_;
  std::vector<std::uint64_t> words_;
  std::vector<std::complex<double>> weights_;
  std::vector<std::complex<double>> coef_;
  double occupancy_l2_ = 0;
  double truncation_ = 0;
  unsigned terms_ = 0;
  std::unique_ptr<fftw_complex, FftwFree> in_;
  std::unique_ptr<fftw_complex, FftwFree> out_;
  fftw_plan plan_ = nullptr;
};

unsigned fast_log2_block(std::uint64_t frequencies) {
  const unsigned lg = static_cast<unsigned>(std::bit_width(std::max<std::uint64_t>(frequencies, 2) - 1));
  return std::clamp(lg, 6u, 20u);
}

double direct_cost(std::uint64_t n, std::uint64_t f) { return 5.0 * static_cast<double>(n) * static_cast<double>(f); }

double fast_cost(std::uint64_t n, std::uint64_t f) {
  const unsigned lg = fast_log2_block(f);
  const double l = std::ldexp(1.0, static_cast<int>(lg));
  const double blocks = std::ceil(static_cast<double>(f) / l);
  constexpr double terms = 24;
  return blocks * (10.0 * n + terms * (1.2 * l * lg + 8 * l + 3.0 * n));
}

std::uint64_t pow_exact(std::uint64_t n, unsigned k) {
  u128 p = 1;
  for (unsigned i = 0; i < k; ++i) {
    p *= n;
    if (p > std::numeric_limits<std::uint64_t>::max())
      throw InvalidArgument("N^k = " + std::to_string(n) + "^" + std::to_string(k) + " exceeds 64 bits");
  }
  return static_cast<std::uint64_t>(p);
}

double pow_int(double x, unsigned k) {
  double r = 1;
  for (unsigned i = 0; i < k; ++i) r *= x;
  return r;
}

}  // namespace

std::complex<double> unit_phasor(std::uint64_t phase) {
  const auto& t = tables();
  const std::uint64_t low = phase & ((std::uint64_t{1} << 40) - 1);
  const double e = std::ldexp(static_cast<double>(low), -64) * (2 * std::numbers::pi);
  const double e2 = e * e;
  const std::complex<double> corr(1 - 0.5 * e2, e * (1 - e2 / 6));
  return cmul(cmul(t.coarse[phase >> 52], t.fine[(phase >> 40) & 0xFFF]), corr);
}

WeylMethod choose_weyl_method(std::uint64_t n, std::uint64_t frequencies) {
  if (n < 64 || frequencies < 64) return WeylMethod::direct;
  return fast_cost(n, frequencies) < direct_cost(n, frequencies) ? WeylMethod::fast : WeylMethod::direct;
}

double stream_weyl_sums(std::span<const TorusPoint> points, std::uint64_t first, std::uint64_t last,
                        WeylMethod method, const WeylBlockFn& sink) {
  if (points.empty()) throw InvalidArgument("Weyl sums need at least one point");
  if (first > last) throw InvalidArgument("empty frequency range");
  const std::uint64_t count = last - first + 1;
  if (count == 0 || count > kMaxFrequenciesPerCall)
    throw InvalidArgument("at most " + std::to_string(kMaxFrequenciesPerCall) +
                          " frequencies per call; chunk larger ranges");
  if (method == WeylMethod::automatic) method = choose_weyl_method(points.size(), count);

  if (method == WeylMethod::direct) {
    std::vector<std::uint64_t> words(points.size());
    std::transform(points.begin(), points.end(), words.begin(), [](TorusPoint p) { return p.word(); });
    constexpr std::uint64_t kChunk = 4096;
    std::vector<std::complex<double>> buf;
    for (std::uint64_t m = first;; m += kChunk) {
      const std::uint64_t len = std::min(kChunk, last - m + 1);
      buf.resize(len);
      for (std::uint64_t j = 0; j < len; ++j) buf[j] = direct_sum(words.data(), words.size(), m + j);
      sink(m, buf);
      if (last - m < kChunk) break;
    }
    return kDirectError;
  }

  FastWeyl fast(points, fast_log2_block(count));
  const std::uint64_t b = fast.block();
  std::vector<std::complex<double>> buf;
  for (std::uint64_t start = first;; start += b) {
    fast.evaluate(start + b / 2, buf);
    const std::uint64_t len = std::min(b, last - start + 1);
    sink(start, std::span<const std::complex<double>>(buf.data(), len));
    if (last - start < b) break;
  }
  return fast.error_bound();
}

void WeylSumTable::write_csv(std::ostream& out) const {
  out << "m,re,im,abs\n";
  char line[128];
  for (std::size_t i = 0; i < values.size(); ++i) {
    const auto& v = values[i];
    std::snprintf(line, sizeof line, "%zu,%.17g,%.17g,%.17g\n", i + 1, v.real(), v.imag(), std::abs(v));
    out << line;
  }
}

WeylSumTable weyl_sums(const TorusSequence& seq, std::uint64_t max_frequency, WeylMethod method,
                       MemoryBudget budget) {
  if (max_frequency < 1) throw InvalidArgument("weyl_sums needs M >= 1");
  if (max_frequency > kMaxFrequenciesPerCall)
    throw InvalidArgument("M = " + std::to_string(max_frequency) + " exceeds the per-call cap of " +
                          std::to_string(kMaxFrequenciesPerCall));
  budget.require(max_frequency * sizeof(std::complex<double>), "Weyl sum table");
  WeylSumTable table;
  table.n = seq.size();
  table.values.resize(max_frequency);
  table.error_bound = stream_weyl_sums(seq.view(), 1, max_frequency, method,
                                       [&](std::uint64_t m, std::span<const std::complex<double>> v) {
                                         std::copy(v.begin(), v.end(), table.values.begin() + (m - 1));
                                       });
  return table;
}

std::uint64_t lemma_cutoff(std::uint64_t n, double alpha, double t) {
  if (!(t > 0)) throw InvalidArgument("t must be positive");
  if (!(alpha >= 0)) throw InvalidArgument("alpha must be nonnegative");
  const double q = 4 * t;
  if (alpha == std::floor(alpha) && alpha <= 6) {
    const std::uint64_t p = pow_exact(n, static_cast<unsigned>(alpha));
    if (q == std::floor(q) && q <= 1e18) return p / static_cast<std::uint64_t>(q);
    return static_cast<std::uint64_t>(std::floor(static_cast<long double>(p) / q));
  }
  return static_cast<std::uint64_t>(std::floor(std::pow(static_cast<long double>(n), alpha) / q));
}

double lemma_power_sum(const WeylSumTable& table, unsigned k, double t) {
  return lemma_power_sum(table, k, t, static_cast<double>(k));
}

double lemma_power_sum(const WeylSumTable& table, unsigned k, double t, double alpha) {
  if (k < 1) throw InvalidArgument("k must be at least 1");
  const std::uint64_t cutoff = lemma_cutoff(table.n, alpha, t);
  if (cutoff > table.size())
    throw InvalidArgument("table holds " + std::to_string(table.size()) + " frequencies, power sum needs " +
                          std::to_string(cutoff));
  Neumaier acc;
  for (std::uint64_t m = 0; m < cutoff; ++m) acc.add(pow_int(std::norm(table.values[m]), k));
  return acc.value();
}

PowerSums power_sum_prefixes(std::span<const TorusPoint> points, unsigned k, std::span<const std::uint64_t> cutoffs,
                             WeylMethod method) {
  if (k < 1) throw InvalidArgument("k must be at least 1");
  if (!std::is_sorted(cutoffs.begin(), cutoffs.end())) throw InvalidArgument("cutoffs must be ascending");
  PowerSums out;
  out.values.assign(cutoffs.size(), 0.0);
  if (cutoffs.empty() || cutoffs.back() == 0) return out;

  const std::uint64_t top = cutoffs.back();
  Neumaier acc;
  std::size_t next = 0;
  while (next < cutoffs.size() && cutoffs[next] == 0) ++next;
  const double err = stream_weyl_sums(points, 1, top, method,
                                      [&](std::uint64_t m, std::span<const std::complex<double>> v) {
                                        for (std::size_t j = 0; j < v.size(); ++j) {
                                          acc.add(pow_int(std::norm(v[j]), k));
                                          while (next < cutoffs.size() && cutoffs[next] == m + j) {
                                            out.values[next++] = acc.value();
                                          }
                                        }
                                      });
  const double grow = pow_int(1 + err, 2 * k);
  out.error_bound = static_cast<double>(top) * (2.0 * k * err * grow + 4 * k * kEps) + 2 * kEps * acc.value();
  return out;
}

double sin_pi(double x) {
  if (!std::isfinite(x)) return std::numeric_limits<double>::quiet_NaN();
  double r = std::fmod(x, 2.0);
  if (r < 0) r += 2.0;
  double sign = 1;
  if (r >= 1) {
    r -= 1;
    sign = -1;
  }
  if (r > 0.5) r = 1 - r;
  if (r == 0) return 0.0;
  return sign * std::sin(std::numbers::pi * r);
}

double triangle_f(double x, double t) {
  if (!(t > 0)) throw InvalidArgument("triangle kernel needs t > 0");
  const double a = std::abs(x);
  return a >= t ? 0.0 : (t - a) / (t * t);
}

double triangle_fhat(double xi, double t) {
  if (!(t > 0)) throw InvalidArgument("triangle kernel needs t > 0");
  const double u = xi * t;
  if (u == 0) return 1.0;
  const double s = sin_pi(u) / (std::numbers::pi * u);
  return s * s;
}

std::uint64_t identity_frequencies_for(std::uint64_t n, unsigned k, double t, double tolerance) {
  if (!(tolerance > 0)) throw InvalidArgument("tolerance must be positive");
  const double p = static_cast<double>(pow_exact(n, k));
  const double base = p / (std::numbers::pi * t);
  return static_cast<std::uint64_t>(std::ceil(2 * base * base / tolerance));
}

IdentityCheckReport fourier_identity_check(const TorusSequence& seq, unsigned k, double t,
                                           std::uint64_t max_frequency, WeylMethod method) {
  if (k < 1 || k > kMaxFold) throw InvalidArgument("fold order k must be in [1, 6]");
  if (!(t > 0)) throw InvalidArgument("triangle kernel needs t > 0");
  if (max_frequency < 1) throw InvalidArgument("identity check needs M >= 1");
  const std::uint64_t n = seq.size();
  if (n == 0) throw InvalidArgument("empty sequence");
  const u128 tuples128 = [&] {
    u128 v = 1;
    for (unsigned i = 0; i < 2 * k; ++i) {
      v *= n;
      if (v > kMaxIdentityTuplePairs) return v;
    }
    return v;
  }();
  if (tuples128 > kMaxIdentityTuplePairs)
    throw InvalidArgument("direct summation over N^{2k} tuple pairs is limited to " +
                          std::to_string(kMaxIdentityTuplePairs) + " pairs");
  const std::uint64_t tuples = pow_exact(n, k);
  const double p = static_cast<double>(tuples);

  // All ordered k-tuples: sum word and a canonical multiset key (sorted indices in base N).
  std::vector<std::uint64_t> sums(tuples);
  std::vector<std::uint64_t> keys(tuples);
  {
    std::vector<std::uint64_t> idx(k, 0), sorted(k);
    for (std::uint64_t i = 0; i < tuples; ++i) {
      std::uint64_t s = 0;
      for (unsigned j = 0; j < k; ++j) s += seq.points[idx[j]].word();
      sorted.assign(idx.begin(), idx.end());
      std::sort(sorted.begin(), sorted.end());
      std::uint64_t key = 0;
      for (auto v : sorted) key = key * n + v;
      sums[i] = s;
      keys[i] = key;
      for (unsigned j = 0; j < k; ++j) {
        if (++idx[j] < n) break;
        idx[j] = 0;
      }
    }
  }

  const double reach = t / p;
  auto periodized = [&](std::uint64_t diff) -> double {
    if (reach < 0.5) {
      const long double d = static_cast<long double>(torus_norm(TorusPoint(diff)).word()) * 0x1p-64L;
      return triangle_f(static_cast<double>(d * p), t);
    }
    const double y = TorusPoint(diff).to_double();
    double acc = 0;
    for (double c = std::ceil(-y - reach); c <= std::floor(-y + reach); c += 1) acc += triangle_f(p * (y + c), t);
    return acc;
  };

  long double all = 0, distinct = 0;
  for (std::uint64_t a = 0; a < tuples; ++a) {
    for (std::uint64_t b = 0; b < tuples; ++b) {
      const double v = periodized(sums[a] - sums[b]);
      all += v;
      if (keys[a] != keys[b]) distinct += v;
    }
  }

  IdentityCheckReport rep;
  rep.n = n;
  rep.k = k;
  rep.t = t;
  rep.max_frequency = max_frequency;
  rep.a_direct = static_cast<double>(all / p);
  rep.r_direct = static_cast<double>(distinct / p);
  rep.excluded_c = multiset_equal_count(n, k);
  rep.r_from_identity = static_cast<double>(all / p - static_cast<long double>(rep.excluded_c) / t / p);

  Neumaier acc, fhat_mass;
  double err = 0;
  for (std::uint64_t first = 1; first <= max_frequency; first += kMaxFrequenciesPerCall) {
    const std::uint64_t last = std::min(max_frequency, first + kMaxFrequenciesPerCall - 1);
    err = std::max(err, stream_weyl_sums(seq.view(), first, last, method,
                                         [&](std::uint64_t m, std::span<const std::complex<double>> v) {
                                           for (std::size_t j = 0; j < v.size(); ++j) {
                                             const double w =
                                                 triangle_fhat(static_cast<double>(m + j) / p, t);
                                             acc.add(w * pow_int(std::norm(v[j]), k));
                                             fhat_mass.add(w);
                                           }
                                         }));
    if (last == max_frequency) break;
  }
  rep.a_fourier = 1 + 2 * acc.value();
  const double base = p / (std::numbers::pi * t);
  rep.tail_bound = 2 * base * base / static_cast<double>(max_frequency);
  const double per_term = 2.0 * k * err * pow_int(1 + err, 2 * k) + 8 * kEps;
  const double direct_err = 4 * kEps * static_cast<double>(tuples) / t + 1e-15 * rep.a_direct;
  rep.rounding_bound = 2 * per_term * fhat_mass.value() + 4 * kEps * rep.a_fourier + direct_err;
  rep.holds = std::abs(rep.a_direct - rep.a_fourier) <= rep.tail_bound + rep.rounding_bound;
  return rep;
}

}  // namespace torcor
