#pragma once

// Exact arithmetic on the circle T = R/Z.
//
// A point is stored as a 64-bit word u and represents u / 2^64. Addition and
// subtraction wrap modulo 2^64, which is exactly addition modulo 1 on the
// dyadic rationals with denominator 2^64.

#include <compare>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>

namespace torcor {

using u128 = unsigned __int128;
using i128 = __int128;

inline constexpr double kTwoPow64 = 18446744073709551616.0;
inline constexpr double kTwoPowMinus64 = 1.0 / kTwoPow64;
inline constexpr std::uint64_t kHalfTurn = std::uint64_t{1} << 63;

class TorusPoint {
 public:
  constexpr TorusPoint() = default;
  constexpr explicit TorusPoint(std::uint64_t word) : word_(word) {}

  /// floor(num * 2^64 / den), i.e. num/den rounded down to the fixed-point grid.
  static TorusPoint from_fraction(std::uint64_t num, std::uint64_t den);

  constexpr std::uint64_t word() const { return word_; }
  double to_double() const { return static_cast<double>(word_) * kTwoPowMinus64; }

  constexpr TorusPoint& operator+=(TorusPoint o) {
    word_ += o.word_;
    return *this;
  }
  constexpr TorusPoint& operator-=(TorusPoint o) {
    word_ -= o.word_;
    return *this;
  }
  friend constexpr TorusPoint operator+(TorusPoint a, TorusPoint b) { return a += b; }
  friend constexpr TorusPoint operator-(TorusPoint a, TorusPoint b) { return a -= b; }
  friend constexpr TorusPoint operator-(TorusPoint a) { return TorusPoint(~a.word_ + 1); }

  /// Multiplication by an integer, exact modulo 1.
  friend constexpr TorusPoint operator*(std::uint64_t n, TorusPoint a) {
    return TorusPoint(n * a.word_);
  }

  friend constexpr bool operator==(TorusPoint, TorusPoint) = default;
  friend constexpr auto operator<=>(TorusPoint, TorusPoint) = default;

 private:
  std::uint64_t word_ = 0;
};

/// Distance to the nearest integer, stored as a word in [0, 2^63].
class TorusNorm {
 public:
  constexpr TorusNorm() = default;
  constexpr explicit TorusNorm(std::uint64_t word) : word_(word) {}

  constexpr std::uint64_t word() const { return word_; }
  double to_double() const { return static_cast<double>(word_) * kTwoPowMinus64; }

  friend constexpr bool operator==(TorusNorm, TorusNorm) = default;
  friend constexpr auto operator<=>(TorusNorm, TorusNorm) = default;

 private:
  std::uint64_t word_ = 0;
};

/// Fractional part of a finite real, rounded to the nearest 64-bit fraction.
/// Throws InvalidArgument on NaN or infinity.
TorusPoint reduce(double x);

constexpr TorusNorm torus_norm(TorusPoint x) {
  const std::uint64_t u = x.word();
  return TorusNorm(u <= kHalfTurn ? u : ~u + 1);
}

constexpr TorusNorm torus_distance(TorusPoint a, TorusPoint b) { return torus_norm(a - b); }

/// sum(plus) - sum(minus) modulo 1. Both lists must have the same nonzero length.
TorusPoint signed_combination(std::span<const TorusPoint> plus, std::span<const TorusPoint> minus);

enum class Comparison { le, lt };

std::string_view to_string(Comparison c);
Comparison parse_comparison(std::string_view text);

/// Nonnegative rational number num/den in lowest terms.
struct Rational {
  std::int64_t num = 0;
  std::int64_t den = 1;

  constexpr Rational() = default;
  Rational(std::int64_t n, std::int64_t d = 1);

  /// Accepts "7", "5/2" and finite decimals such as "2.5" (converted exactly).
  static Rational parse(std::string_view text);

  bool is_integer() const { return den == 1; }
  double to_double() const { return static_cast<double>(num) / static_cast<double>(den); }
  std::string to_string() const;

  friend bool operator==(const Rational&, const Rational&) = default;
  friend std::strong_ordering operator<=>(const Rational& a, const Rational& b) {
    return static_cast<i128>(a.num) * b.den <=> static_cast<i128>(b.num) * a.den;
  }
};

/// Inclusion test against a window |d| <= radius (all distances are words).
/// An empty window contains nothing, not even distance zero.
struct WindowRadius {
  bool empty = false;
  std::uint64_t radius = 0;
  bool exact = true;

  constexpr bool contains(TorusNorm d) const { return !empty && d.word() <= radius; }
};

/// A window width p/q given as an exact fraction of the circle, with p/q < 1/2.
class ExactThreshold {
 public:
  ExactThreshold(u128 p, u128 q);

  u128 numerator() const { return p_; }
  u128 denominator() const { return q_; }

  /// Largest word radius equivalent to d <= p/q (le) or d < p/q (lt).
  WindowRadius radius(Comparison cmp) const;

  bool contains(TorusNorm d, Comparison cmp) const { return radius(cmp).contains(d); }

 private:
  u128 p_;
  u128 q_;
};

}  // namespace torcor
