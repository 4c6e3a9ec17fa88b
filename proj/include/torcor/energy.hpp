#pragma once

// Additive energy E = #{(m, n, k, l) : a_m - a_n = a_k - a_l} of strictly
// increasing positive integer sequences.

#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "torcor/budget.hpp"

namespace torcor {

using BigInt = boost::multiprecision::cpp_int;

/// Throws InvalidArgument unless a is nonempty, positive and strictly increasing.
void validate_integer_sequence(std::span<const std::uint64_t> a);
void validate_integer_sequence(std::span<const BigInt> a);

/// Sum over differences d of r(d)^2, from the sorted multiset of positive differences.
std::uint64_t additive_energy(std::span<const std::uint64_t> a, MemoryBudget budget = MemoryBudget::from_env());
BigInt additive_energy(std::span<const BigInt> a, MemoryBudget budget = MemoryBudget::from_env());

/// Newline-delimited decimal integers; blank lines and '#' comments are skipped.
std::vector<std::uint64_t> parse_integer_sequence(std::string_view text);

struct EnergySample {
  std::uint64_t n = 0;
  std::uint64_t energy = 0;
  double ratio = 0;         // E / N^2
  double excess = 0;        // (E - 2N^2 + N) / N^2, the non-trivial part
};

struct EnergyVerdict {
  std::vector<EnergySample> samples;
  double slope = 0;                  // least-squares slope of log E against log N
  double epsilon = 0;
  bool sub_cubic = false;            // slope <= 3 - epsilon
  bool obstructs_fourfold = false;   // slope >= 2 + epsilon: E / N^2 unbounded
};

/// Evaluates E on the prefixes a_1..a_{N_i}; needs at least three increasing prefix lengths.
EnergyVerdict energy_classifier(std::span<const std::uint64_t> a, std::span<const std::uint64_t> prefixes,
                                double epsilon, MemoryBudget budget = MemoryBudget::from_env());

}  // namespace torcor
