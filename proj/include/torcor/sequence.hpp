#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "torcor/torus.hpp"

namespace torcor {

/// Counter-based generator: the value at `index` is the SplitMix64 finalizer
/// applied to key + (index + 1) * 0x9E3779B97F4A7C15, where key is derived
/// from (seed, stream). Any index range can be produced independently.
class CounterRng {
 public:
  CounterRng(std::uint64_t seed, std::uint64_t stream);

  std::uint64_t at(std::uint64_t index) const;

  static std::uint64_t mix(std::uint64_t z);

 private:
  std::uint64_t key_;
};

enum class Family { uniform, equispaced, kronecker, dilated, mirrored, duplicated, perturbed_pairs, external };

std::string_view to_string(Family f);
Family parse_family(std::string_view text);

/// Everything needed to regenerate a sequence bit for bit.
struct GeneratorSpec {
  Family family = Family::uniform;
  std::uint64_t seed = 0;
  std::size_t n = 0;
  TorusPoint alpha{};                    // kronecker, dilated
  unsigned degree = 1;                   // kronecker
  std::vector<std::uint64_t> dilation;   // dilated: strictly increasing a_1 < a_2 < ...

  friend bool operator==(const GeneratorSpec&, const GeneratorSpec&) = default;
};

struct TorusSequence {
  std::vector<TorusPoint> points;
  GeneratorSpec provenance;

  std::size_t size() const { return points.size(); }
  std::span<const TorusPoint> view() const { return points; }

  /// Wraps raw points; provenance family is `external`.
  static TorusSequence from_points(std::vector<TorusPoint> points);
};

TorusSequence gen_uniform(std::uint64_t seed, std::size_t n);
TorusSequence gen_equispaced(std::size_t n);
/// Points {alpha * n^d} for n = 1..N. The product uses n^d mod 2^64, which is
/// exact for the dyadic alpha; n^d itself must fit in 128 bits.
TorusSequence gen_kronecker(TorusPoint alpha, unsigned degree, std::size_t n);
/// (x_1, -x_1, x_2, -x_2, ...) with x_j seeded uniform.
TorusSequence gen_mirrored(std::uint64_t seed, std::size_t n);
/// (x_1, x_1, x_2, x_2, ...) with x_j seeded uniform.
TorusSequence gen_duplicated(std::uint64_t seed, std::size_t n);
/// Duplicated base points plus independent perturbations p_n uniform on
/// [-n^{-3/2}, n^{-3/2}] (n is the 1-based position).
TorusSequence gen_perturbed_pairs(std::uint64_t seed, std::size_t n);
/// Points {a_n * alpha}; `a` must be strictly increasing positive integers.
TorusSequence gen_dilated(std::span<const std::uint64_t> a, TorusPoint alpha);

TorusSequence generate(const GeneratorSpec& spec);

/// Half-width of the perturbation applied at 1-based position n, as a word.
/// Returns 2^64 - 1 to mean "the whole circle" (only n = 1).
std::uint64_t perturbation_half_width(std::uint64_t position);

/// Fixed-point approximation of the golden ratio's fractional part.
inline constexpr TorusPoint kGoldenFraction{0x9E3779B97F4A7C16ULL};

}  // namespace torcor
