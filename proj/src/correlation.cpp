#include "torcor/correlation.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numeric>
#include <optional>

#include "torcor/error.hpp"

namespace torcor {

namespace {

constexpr u128 kSaturated = ~u128{0};

u128 sat_mul(u128 a, u128 b) {
  if (a != 0 && b > kSaturated / a) return kSaturated;
  return a * b;
}

std::uint64_t factorial(unsigned k) {
  std::uint64_t f = 1;
  for (unsigned i = 2; i <= k; ++i) f *= i;
  return f;
}

void check_fold(unsigned k, const char* who) {
  if (k < 1 || k > kMaxFold)
    throw InvalidArgument(std::string(who) + ": fold order k must be in [1, " + std::to_string(kMaxFold) +
                          "], got " + std::to_string(k));
}

std::uint64_t narrow(u128 v, const char* what) {
  if (v > std::numeric_limits<std::uint64_t>::max())
    throw InvalidArgument(std::string(what) + " does not fit in 64 bits");
  return static_cast<std::uint64_t>(v);
}

struct PartitionClass {
  std::uint64_t weight;  // k! / prod(parts!)
  u128 count;            // nondecreasing tuples with this multiplicity pattern
};

// One entry per integer partition of k.
std::vector<PartitionClass> multiplicity_classes(std::uint64_t n, unsigned k) {
  std::vector<PartitionClass> out;
  std::vector<unsigned> parts;
  const std::uint64_t kfact = factorial(k);
  auto visit = [&] {
    std::uint64_t denom = 1;
    for (auto p : parts) denom *= factorial(p);
    // ell distinct values, arranged as a sequence of parts up to swapping equal parts
    const auto ell = static_cast<unsigned>(parts.size());
    u128 count = 1;
    for (unsigned i = 0; i < ell; ++i) count = n >= i ? sat_mul(count, n - i) : 0;
    std::array<unsigned, kMaxFold + 1> mult{};
    for (auto p : parts) ++mult[p];
    for (auto m : mult) count /= factorial(m);
    out.push_back({kfact / denom, count});
  };
  // Partitions in nonincreasing part order.
  auto rec = [&](auto&& self, unsigned remaining, unsigned max_part) -> void {
    if (remaining == 0) {
      visit();
      return;
    }
    for (unsigned p = std::min(remaining, max_part); p >= 1; --p) {
      parts.push_back(p);
      self(self, remaining - p, p);
      parts.pop_back();
    }
  };
  rec(rec, k, k);
  return out;
}

void radix_sort(std::vector<std::uint64_t>& v, std::vector<std::uint64_t>& buffer) {
  constexpr std::size_t kBuckets = 1 << 16;
  buffer.resize(v.size());
  std::vector<std::size_t> offsets(kBuckets);
  for (unsigned pass = 0; pass < 4; ++pass) {
    const unsigned shift = 16 * pass;
    std::fill(offsets.begin(), offsets.end(), 0);
    for (auto x : v) ++offsets[(x >> shift) & 0xFFFF];
    std::size_t total = 0;
    for (auto& o : offsets) {
      const auto c = o;
      o = total;
      total += c;
    }
    for (auto x : v) buffer[offsets[(x >> shift) & 0xFFFF]++] = x;
    v.swap(buffer);
  }
}

// Position in the sorted list repeated three times with offsets -1, 0, +1 turns.
struct CircularCursor {
  std::size_t idx = 0;
  std::size_t copy = 0;

  i128 value(std::span<const std::uint64_t> ys) const {
    return static_cast<i128>(ys[idx]) + (static_cast<i128>(copy) - 1) * (static_cast<i128>(1) << 64);
  }
  bool at_end() const { return copy == 3; }
  void advance(std::size_t n) {
    if (++idx == n) {
      idx = 0;
      ++copy;
    }
  }
  std::size_t linear(std::size_t n) const { return copy * n + idx; }
};

}  // namespace

std::uint64_t multiset_equal_count(std::uint64_t n, unsigned k) {
  check_fold(k, "multiset_equal_count");
  u128 total = 0;
  for (const auto& c : multiplicity_classes(n, k)) total += sat_mul(sat_mul(c.weight, c.weight), c.count);
  return narrow(total, "multiset_equal_count");
}

WindowRadius window_radius(Rational s, std::uint64_t n, Rational alpha, Comparison cmp) {
  if (n == 0) throw InvalidArgument("window_radius: N must be positive");
  const auto reject = [&] {
    throw InvalidArgument("window s/N^alpha = " + s.to_string() + "/" + std::to_string(n) + "^" +
                          alpha.to_string() + " must be narrower than half the circle");
  };
  // Exact route: N^alpha is an integer r (alpha = a/b and r^b = N^a).
  std::optional<u128> power;
  {
    const auto a = static_cast<std::uint64_t>(alpha.num);
    const auto b = static_cast<std::uint64_t>(alpha.den);
    u128 na = 1;
    bool fits = true;
    for (std::uint64_t i = 0; i < a && fits; ++i) {
      if (na > (u128{1} << 126) / n) fits = false;
      else na *= n;
    }
    if (fits) {
      if (b == 1) {
        power = na;
      } else {
        const long double guess = std::pow(static_cast<long double>(n), alpha.num / static_cast<long double>(b));
        const auto r = static_cast<u128>(std::llround(guess));
        u128 rb = r > 0 ? 1 : 0;
        for (std::uint64_t i = 0; i < b && rb != kSaturated; ++i) rb = sat_mul(rb, r);
        if (rb == na) power = r;
      }
    }
  }
  if (power) {
    const u128 q = sat_mul(*power, static_cast<u128>(s.den));
    if (q == kSaturated || (q >> 127)) {
      // Beyond 127 bits the window is far below one word; fall through to the approximate path.
    } else {
      const u128 p = static_cast<u128>(s.num);
      if (2 * p >= q) reject();
      return ExactThreshold(p, q).radius(cmp);
    }
  }
  const long double width =
      static_cast<long double>(s.num) / static_cast<long double>(s.den) /
      std::pow(static_cast<long double>(n), static_cast<long double>(alpha.num) / alpha.den);
  if (!(width < 0.5L)) reject();
  const long double scaled = std::ldexp(width, 64);
  auto r = static_cast<std::uint64_t>(std::floor(scaled));
  WindowRadius w{false, r, false};
  if (cmp == Comparison::lt && static_cast<long double>(r) == scaled) {
    if (r == 0) w.empty = true;
    else w.radius = r - 1;
  }
  return w;
}

long double correlation_normalizer(std::uint64_t n, unsigned k, Rational alpha) {
  const long double nn = static_cast<long double>(n);
  if (alpha.is_integer()) {
    long double out = 1;
    for (std::int64_t i = 0; i < 2 * static_cast<std::int64_t>(k) - alpha.num; ++i) out *= nn;
    return out;
  }
  return std::pow(nn, 2.0L * k - static_cast<long double>(alpha.num) / alpha.den);
}

std::uint64_t TupleSumIndex::required_bytes(std::uint64_t n, unsigned k) {
  // C(n+k-1, k)
  u128 c = 1;
  for (unsigned i = 1; i <= k; ++i) {
    c = sat_mul(c, n + k - i);
    if (c == kSaturated) return std::numeric_limits<std::uint64_t>::max();
    c /= i;
  }
  const u128 bytes = sat_mul(c, 8);
  return bytes > std::numeric_limits<std::uint64_t>::max() ? std::numeric_limits<std::uint64_t>::max()
                                                           : static_cast<std::uint64_t>(bytes);
}

TupleSumIndex::TupleSumIndex(std::span<const TorusPoint> points, unsigned k, MemoryBudget budget)
    : k_(k), n_(points.size()) {
  check_fold(k, "TupleSumIndex");
  if (points.empty()) throw InvalidArgument("TupleSumIndex: empty sequence");
  const std::uint64_t required = required_bytes(n_, k);
  budget.require(required, "k=" + std::to_string(k) + " tuple-sum index for N=" + std::to_string(n_));

  const auto partitions = multiplicity_classes(n_, k);
  std::array<int, 721> class_of{};
  class_of.fill(-1);
  for (const auto& p : partitions) {
    auto& slot = class_of[p.weight];
    if (slot < 0) {
      slot = static_cast<int>(classes_.size());
      classes_.push_back({p.weight, {}});
    }
  }
  {
    std::vector<u128> sizes(classes_.size(), 0);
    for (const auto& p : partitions) sizes[class_of[p.weight]] += p.count;
    for (std::size_t c = 0; c < classes_.size(); ++c) classes_[c].sums.reserve(static_cast<std::size_t>(sizes[c]));
  }

  std::vector<std::uint64_t> words(points.size());
  std::transform(points.begin(), points.end(), words.begin(), [](TorusPoint p) { return p.word(); });
  const std::uint64_t kfact = factorial(k);

  std::array<std::uint64_t, kMaxFold> idx{};
  std::array<std::uint64_t, kMaxFold + 1> partial{};
  std::array<std::uint64_t, kMaxFold + 1> run_product{};
  std::array<std::uint64_t, kMaxFold + 1> run{};
  run_product[0] = 1;
  auto extend = [&](unsigned level) {
    partial[level + 1] = partial[level] + words[idx[level]];
    if (level > 0 && idx[level] == idx[level - 1]) {
      run[level + 1] = run[level] + 1;
      run_product[level + 1] = run_product[level] * run[level + 1];
    } else {
      run[level + 1] = 1;
      run_product[level + 1] = run_product[level];
    }
  };
  for (unsigned l = 0; l < k; ++l) extend(l);
  const std::uint64_t last = n_ - 1;
  for (;;) {
    classes_[class_of[kfact / run_product[k]]].sums.push_back(partial[k]);
    int l = static_cast<int>(k) - 1;
    while (l >= 0 && idx[l] == last) --l;
    if (l < 0) break;
    ++idx[l];
    extend(static_cast<unsigned>(l));
    for (unsigned j = l + 1; j < k; ++j) {
      idx[j] = idx[l];
      extend(j);
    }
  }

  std::size_t largest = 0;
  for (const auto& c : classes_) largest = std::max(largest, c.sums.size());
  const bool radix = required + 8 * static_cast<std::uint64_t>(largest) <= budget.bytes && largest > 4096;
  std::vector<std::uint64_t> buffer;
  for (auto& c : classes_) {
    if (radix) radix_sort(c.sums, buffer);
    else std::sort(c.sums.begin(), c.sums.end());
  }
}

std::uint64_t TupleSumIndex::entries() const {
  std::uint64_t total = 0;
  for (const auto& c : classes_) total += c.sums.size();
  return total;
}

std::uint64_t TupleSumIndex::self_pairs() const {
  u128 total = 0;
  for (const auto& c : classes_) total += static_cast<u128>(c.weight) * c.weight * c.sums.size();
  return narrow(total, "self pair count");
}

std::vector<std::uint64_t> count_circular_pairs(std::span<const std::uint64_t> xs,
                                                std::span<const std::uint64_t> ys,
                                                std::span<const WindowRadius> windows) {
  std::vector<std::uint64_t> counts(windows.size(), 0);
  if (xs.empty() || ys.empty()) return counts;
  const std::size_t n = ys.size();
  std::vector<std::size_t> active;
  for (std::size_t w = 0; w < windows.size(); ++w) {
    if (windows[w].empty) continue;
    if (windows[w].radius >= kHalfTurn)
      throw InvalidArgument("count_circular_pairs: window must be narrower than half the circle");
    active.push_back(w);
  }
  std::vector<CircularCursor> lo(active.size()), hi(active.size());
  std::vector<std::uint64_t> acc(active.size(), 0);
  for (const auto x : xs) {
    for (std::size_t a = 0; a < active.size(); ++a) {
      const i128 r = windows[active[a]].radius;
      const i128 lower = static_cast<i128>(x) - r;
      const i128 upper = static_cast<i128>(x) + r;
      auto& l = lo[a];
      while (!l.at_end() && l.value(ys) < lower) l.advance(n);
      auto& h = hi[a];
      while (!h.at_end() && h.value(ys) <= upper) h.advance(n);
      acc[a] += h.linear(n) - l.linear(n);
    }
  }
  for (std::size_t a = 0; a < active.size(); ++a) counts[active[a]] = acc[a];
  return counts;
}

std::vector<std::uint64_t> TupleSumIndex::count_all_pairs(std::span<const WindowRadius> windows) const {
  std::vector<u128> total(windows.size(), 0);
  for (std::size_t c = 0; c < classes_.size(); ++c) {
    for (std::size_t d = c; d < classes_.size(); ++d) {
      const auto counts = count_circular_pairs(classes_[c].sums, classes_[d].sums, windows);
      const u128 factor = static_cast<u128>(classes_[c].weight) * classes_[d].weight * (c == d ? 1 : 2);
      for (std::size_t w = 0; w < windows.size(); ++w) total[w] += factor * counts[w];
    }
  }
  std::vector<std::uint64_t> out(windows.size());
  for (std::size_t w = 0; w < windows.size(); ++w) out[w] = narrow(total[w], "tuple pair count");
  return out;
}

std::vector<std::uint64_t> TupleSumIndex::count_distinct_pairs(std::span<const WindowRadius> windows) const {
  auto out = count_all_pairs(windows);
  const std::uint64_t c = self_pairs();
  for (std::size_t w = 0; w < windows.size(); ++w)
    if (!windows[w].empty) out[w] -= c;
  return out;
}

std::uint64_t TupleSumIndex::count_distinct_pairs(const WindowRadius& window) const {
  return count_distinct_pairs(std::span<const WindowRadius>(&window, 1)).front();
}

std::vector<CorrelationResult> count_kfold(const TupleSumIndex& index, const CorrelationQuery& query) {
  if (query.k != index.k())
    throw InvalidArgument("count_kfold: query k = " + std::to_string(query.k) + " but index built for k = " +
                          std::to_string(index.k()));
  if (query.alpha > Rational(query.k))
    throw InvalidArgument("count_kfold: alpha must lie in [0, k], got " + query.alpha.to_string());
  std::vector<WindowRadius> windows;
  windows.reserve(query.s_values.size());
  for (const auto& s : query.s_values) windows.push_back(window_radius(s, index.n(), query.alpha, query.comparison));
  const auto raw = index.count_distinct_pairs(windows);
  const long double norm = correlation_normalizer(index.n(), query.k, query.alpha);
  const std::uint64_t c = index.self_pairs();
  std::vector<CorrelationResult> out;
  out.reserve(raw.size());
  for (std::size_t i = 0; i < raw.size(); ++i) {
    out.push_back({.k = query.k,
                   .alpha = query.alpha,
                   .s = query.s_values[i],
                   .n = index.n(),
                   .raw_count = raw[i],
                   .excluded_c = c,
                   .normalized = static_cast<double>(static_cast<long double>(raw[i]) / norm),
                   .comparison = query.comparison,
                   .exact_threshold = windows[i].exact});
  }
  return out;
}

std::vector<CorrelationResult> count_kfold(const TorusSequence& seq, const CorrelationQuery& query,
                                           MemoryBudget budget) {
  check_fold(query.k, "count_kfold");
  // Validate the windows before paying for the index.
  for (const auto& s : query.s_values) (void)window_radius(s, seq.size(), query.alpha, query.comparison);
  const TupleSumIndex index(seq.view(), query.k, budget);
  return count_kfold(index, query);
}

CorrelationResult count_pair(const TorusSequence& seq, Rational s, Comparison cmp) {
  CorrelationQuery q{.k = 1, .alpha = Rational(1), .s_values = {s}, .comparison = cmp};
  return count_kfold(seq, q).front();
}

CorrelationDiscrepancy correlation_discrepancy(const TupleSumIndex& index, std::uint64_t t) {
  const Rational alpha(index.k());
  std::vector<WindowRadius> windows;
  for (std::uint64_t s = 0; s <= t; ++s)
    windows.push_back(window_radius(Rational(static_cast<std::int64_t>(s)), index.n(), alpha, Comparison::lt));
  const auto raw = index.count_distinct_pairs(windows);
  const long double norm = correlation_normalizer(index.n(), index.k(), alpha);
  CorrelationDiscrepancy out{.k = index.k(), .t = t};
  out.value = 0;
  for (std::uint64_t s = 0; s <= t; ++s) {
    const long double p = static_cast<long double>(raw[s]) / norm;
    out.normalized.push_back(static_cast<double>(p));
    const auto excess = static_cast<double>(p - 2.0L * s);
    if (excess > out.value) {
      out.value = excess;
      out.argmax_s = s;
    }
  }
  return out;
}

CorrelationDiscrepancy correlation_discrepancy(const TorusSequence& seq, unsigned k, std::uint64_t t,
                                               MemoryBudget budget) {
  check_fold(k, "correlation_discrepancy");
  (void)window_radius(Rational(static_cast<std::int64_t>(t)), seq.size(), Rational(k), Comparison::lt);
  const TupleSumIndex index(seq.view(), k, budget);
  return correlation_discrepancy(index, t);
}

double grepstad_larcher_F(const TorusSequence& seq, std::uint64_t t) {
  if (t == 0) throw InvalidArgument("grepstad_larcher_F: T must be at least 1");
  CorrelationQuery q{.k = 1, .alpha = Rational(1), .comparison = Comparison::le};
  for (std::uint64_t s = 1; s <= t; ++s) q.s_values.emplace_back(static_cast<std::int64_t>(s));
  const auto results = count_kfold(seq, q);
  const long double n = static_cast<long double>(seq.size());
  long double best = 0;
  for (std::uint64_t s = 1; s <= t; ++s)
    best = std::max(best, std::fabs(static_cast<long double>(results[s - 1].raw_count) / (2.0L * s) - n));
  return static_cast<double>(best);
}

}  // namespace torcor
