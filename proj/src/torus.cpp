#include "torcor/torus.hpp"

#include <charconv>
#include <cmath>
#include <numeric>

#include "torcor/error.hpp"

namespace torcor {

namespace {

// floor(r * 2^64 / q) and whether the division is exact, for r < q.
std::pair<std::uint64_t, bool> scaled_quotient(u128 r, u128 q) {
  std::uint64_t quotient = 0;
  for (int bit = 63; bit >= 0; --bit) {
    // r < q <= 2^127 keeps the shifted remainder inside 128 bits.
    r <<= 1;
    if (r >= q) {
      r -= q;
      quotient |= std::uint64_t{1} << bit;
    }
  }
  return {quotient, r == 0};
}

}  // namespace

TorusPoint TorusPoint::from_fraction(std::uint64_t num, std::uint64_t den) {
  if (den == 0) throw InvalidArgument("TorusPoint::from_fraction: zero denominator");
  const auto [q, exact] = scaled_quotient(num % den, den);
  (void)exact;
  return TorusPoint(q);
}

TorusPoint reduce(double x) {
  if (!std::isfinite(x)) throw InvalidArgument("reduce: non-finite input");
  // x - floor(x) is exact in binary floating point; scaling by 2^64 is exact as well.
  const double frac = x - std::floor(x);
  const double scaled = std::nearbyint(std::ldexp(frac, 64));
  if (scaled >= kTwoPow64) return TorusPoint(0);
  return TorusPoint(static_cast<std::uint64_t>(scaled));
}

TorusPoint signed_combination(std::span<const TorusPoint> plus, std::span<const TorusPoint> minus) {
  if (plus.size() != minus.size() || plus.empty())
    throw InvalidArgument("signed_combination: lists must have equal nonzero length");
  TorusPoint acc;
  for (std::size_t i = 0; i < plus.size(); ++i) acc += plus[i] - minus[i];
  return acc;
}

std::string_view to_string(Comparison c) { return c == Comparison::le ? "le" : "lt"; }

Comparison parse_comparison(std::string_view text) {
  if (text == "le" || text == "<=") return Comparison::le;
  if (text == "lt" || text == "<") return Comparison::lt;
  throw InvalidArgument("unknown comparison '" + std::string(text) + "' (expected le or lt)");
}

Rational::Rational(std::int64_t n, std::int64_t d) {
  if (d == 0) throw InvalidArgument("Rational: zero denominator");
  if (n < 0 || d < 0) throw InvalidArgument("Rational: negative values are not supported");
  const std::int64_t g = std::gcd(n, d);
  num = n / g;
  den = d / g;
}

Rational Rational::parse(std::string_view text) {
  auto parse_int = [&](std::string_view part) {
    std::int64_t value = 0;
    const auto* first = part.data();
    const auto* last = part.data() + part.size();
    auto [ptr, ec] = std::from_chars(first, last, value);
    if (part.empty() || ec != std::errc() || ptr != last || value < 0)
      throw InvalidArgument("cannot parse rational '" + std::string(text) + "'");
    return value;
  };
  if (const auto slash = text.find('/'); slash != std::string_view::npos)
    return Rational(parse_int(text.substr(0, slash)), parse_int(text.substr(slash + 1)));
  if (const auto dot = text.find('.'); dot != std::string_view::npos) {
    const auto int_part = text.substr(0, dot);
    const auto frac_part = text.substr(dot + 1);
    if (frac_part.size() > 17) throw InvalidArgument("rational '" + std::string(text) + "' has too many digits");
    std::int64_t scale = 1;
    for (std::size_t i = 0; i < frac_part.size(); ++i) scale *= 10;
    const std::int64_t whole = int_part.empty() ? 0 : parse_int(int_part);
    const std::int64_t frac = frac_part.empty() ? 0 : parse_int(frac_part);
    return Rational(whole * scale + frac, scale);
  }
  return Rational(parse_int(text));
}

std::string Rational::to_string() const {
  return den == 1 ? std::to_string(num) : std::to_string(num) + "/" + std::to_string(den);
}

ExactThreshold::ExactThreshold(u128 p, u128 q) : p_(p), q_(q) {
  if (q == 0) throw InvalidArgument("ExactThreshold: zero denominator");
  if (q >> 127) throw InvalidArgument("ExactThreshold: denominator exceeds 2^127");
  if (2 * p >= q) throw InvalidArgument("ExactThreshold: window must be narrower than half the circle");
}

WindowRadius ExactThreshold::radius(Comparison cmp) const {
  const auto [floor_value, exact] = scaled_quotient(p_, q_);
  if (cmp == Comparison::le) return {false, floor_value, true};
  // d < p/q  <=>  d <= ceil(p 2^64 / q) - 1
  if (!exact) return {false, floor_value, true};
  if (floor_value == 0) return {true, 0, true};
  return {false, floor_value - 1, true};
}

}  // namespace torcor
