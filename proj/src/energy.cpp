#include "torcor/energy.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <string>

#include "torcor/error.hpp"
#include "torcor/torus.hpp"

namespace torcor {

namespace {

template <class Int>
void validate(std::span<const Int> a) {
  if (a.empty()) throw InvalidArgument("integer sequence is empty");
  if (!(a[0] > 0)) throw InvalidArgument("integer sequence must be positive");
  for (std::size_t i = 1; i < a.size(); ++i)
    if (!(a[i - 1] < a[i]))
      throw InvalidArgument("integer sequence must be strictly increasing (position " + std::to_string(i + 1) + ")");
}

template <class Int, class Acc>
Acc energy_from_differences(std::span<const Int> a, std::uint64_t bytes_per_entry, const MemoryBudget& budget) {
  validate(a);
  const std::uint64_t n = a.size();
  const u128 pairs = static_cast<u128>(n) * (n - 1) / 2;
  const u128 bytes = pairs * bytes_per_entry;
  budget.require(bytes > ~std::uint64_t{0} ? ~std::uint64_t{0} : static_cast<std::uint64_t>(bytes),
                 "difference histogram");
  std::vector<Int> diffs;
  diffs.reserve(static_cast<std::size_t>(pairs));
  for (std::size_t j = 1; j < n; ++j)
    for (std::size_t i = 0; i < j; ++i) diffs.push_back(a[j] - a[i]);
  std::sort(diffs.begin(), diffs.end());
  Acc runs = 0;
  for (std::size_t i = 0; i < diffs.size();) {
    std::size_t j = i;
    while (j < diffs.size() && diffs[j] == diffs[i]) ++j;
    const Acc c = static_cast<Acc>(j - i);
    runs += c * c;
    i = j;
  }
  // r(0) = N, r(-d) = r(d)
  return static_cast<Acc>(n) * static_cast<Acc>(n) + 2 * runs;
}

}  // namespace

void validate_integer_sequence(std::span<const std::uint64_t> a) { validate(a); }
void validate_integer_sequence(std::span<const BigInt> a) { validate(a); }

std::uint64_t additive_energy(std::span<const std::uint64_t> a, MemoryBudget budget) {
  return energy_from_differences<std::uint64_t, std::uint64_t>(a, sizeof(std::uint64_t), budget);
}

BigInt additive_energy(std::span<const BigInt> a, MemoryBudget budget) {
  std::uint64_t width = sizeof(BigInt);
  if (!a.empty()) width += boost::multiprecision::msb(a.back() > 0 ? a.back() : BigInt(1)) / 8 + 8;
  return energy_from_differences<BigInt, BigInt>(a, width, budget);
}

std::vector<std::uint64_t> parse_integer_sequence(std::string_view text) {
  std::vector<std::uint64_t> out;
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(pos, end - pos);
    const std::size_t hash = line.find('#');
    if (hash != std::string_view::npos) line = line.substr(0, hash);
    std::size_t b = 0;
    while (b < line.size() && std::isspace(static_cast<unsigned char>(line[b]))) ++b;
    std::size_t e = line.size();
    while (e > b && std::isspace(static_cast<unsigned char>(line[e - 1]))) --e;
    if (e > b) {
      std::uint64_t v = 0;
      const char* first = line.data() + b;
      const char* last = line.data() + e;
      auto [ptr, ec] = std::from_chars(first, last, v);
      if (ec != std::errc() || ptr != last)
        throw ParseError("expected a nonnegative decimal integer", pos + b + static_cast<std::size_t>(ptr - first));
      out.push_back(v);
    }
    pos = end + 1;
  }
  return out;
}

EnergyVerdict energy_classifier(std::span<const std::uint64_t> a, std::span<const std::uint64_t> prefixes,
                                double epsilon, MemoryBudget budget) {
  if (prefixes.size() < 3) throw InvalidArgument("energy classifier needs at least three prefixes");
  for (std::size_t i = 0; i < prefixes.size(); ++i) {
    if (prefixes[i] < 1 || prefixes[i] > a.size())
      throw InvalidArgument("prefix length " + std::to_string(prefixes[i]) + " outside [1, " +
                            std::to_string(a.size()) + "]");
    if (i > 0 && prefixes[i] <= prefixes[i - 1]) throw InvalidArgument("prefix lengths must increase");
  }
  EnergyVerdict v;
  v.epsilon = epsilon;
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (auto n : prefixes) {
    EnergySample s;
    s.n = n;
    s.energy = additive_energy(a.first(n), budget);
    const double n2 = static_cast<double>(n) * static_cast<double>(n);
    s.ratio = static_cast<double>(s.energy) / n2;
    s.excess = (static_cast<double>(s.energy) - 2 * n2 + static_cast<double>(n)) / n2;
    v.samples.push_back(s);
    const double x = std::log(static_cast<double>(n));
    const double y = std::log(static_cast<double>(s.energy));
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  const double r = static_cast<double>(prefixes.size());
  v.slope = (r * sxy - sx * sy) / (r * sxx - sx * sx);
  v.sub_cubic = v.slope <= 3 - epsilon;
  v.obstructs_fourfold = v.slope >= 2 + epsilon;
  return v;
}

}  // namespace torcor
