#include "torcor/sequence.hpp"

#include <cmath>

#include "torcor/error.hpp"

namespace torcor {

namespace {

constexpr std::uint64_t kGamma = 0x9E3779B97F4A7C15ULL;
constexpr std::uint64_t kStreamSalt = 0xD1B54A32D192ED03ULL;

enum Stream : std::uint64_t { kBaseStream = 0, kPerturbationStream = 1 };

void require_nonempty(std::size_t n, const char* who) {
  if (n == 0) throw InvalidArgument(std::string(who) + ": N must be at least 1");
}

void require_even(std::size_t n, const char* who) {
  require_nonempty(n, who);
  if (n % 2 != 0) throw InvalidArgument(std::string(who) + ": N must be even, got " + std::to_string(n));
}

TorusSequence paired(std::uint64_t seed, std::size_t n, bool mirror) {
  const CounterRng rng(seed, kBaseStream);
  TorusSequence seq;
  seq.points.resize(n);
  for (std::size_t j = 0; j < n / 2; ++j) {
    const TorusPoint x(rng.at(j));
    seq.points[2 * j] = x;
    seq.points[2 * j + 1] = mirror ? -x : x;
  }
  return seq;
}

}  // namespace

CounterRng::CounterRng(std::uint64_t seed, std::uint64_t stream)
    : key_(mix(seed ^ (stream * kStreamSalt + kStreamSalt))) {}

std::uint64_t CounterRng::mix(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

std::uint64_t CounterRng::at(std::uint64_t index) const { return mix(key_ + (index + 1) * kGamma); }

std::string_view to_string(Family f) {
  switch (f) {
    case Family::uniform: return "uniform";
    case Family::equispaced: return "equispaced";
    case Family::kronecker: return "kronecker";
    case Family::dilated: return "dilated";
    case Family::mirrored: return "mirrored";
    case Family::duplicated: return "duplicated";
    case Family::perturbed_pairs: return "perturbed_pairs";
    case Family::external: return "external";
  }
  return "external";
}

Family parse_family(std::string_view text) {
  for (auto f : {Family::uniform, Family::equispaced, Family::kronecker, Family::dilated, Family::mirrored,
                 Family::duplicated, Family::perturbed_pairs, Family::external})
    if (to_string(f) == text) return f;
  throw InvalidArgument("unknown sequence family '" + std::string(text) + "'");
}

TorusSequence TorusSequence::from_points(std::vector<TorusPoint> points) {
  TorusSequence seq;
  seq.provenance.family = Family::external;
  seq.provenance.n = points.size();
  seq.points = std::move(points);
  return seq;
}

TorusSequence gen_uniform(std::uint64_t seed, std::size_t n) {
  require_nonempty(n, "gen_uniform");
  const CounterRng rng(seed, kBaseStream);
  TorusSequence seq;
  seq.points.reserve(n);
  for (std::size_t i = 0; i < n; ++i) seq.points.emplace_back(rng.at(i));
  seq.provenance = {.family = Family::uniform, .seed = seed, .n = n};
  return seq;
}

TorusSequence gen_equispaced(std::size_t n) {
  require_nonempty(n, "gen_equispaced");
  TorusSequence seq;
  seq.points.reserve(n);
  for (std::size_t i = 0; i < n; ++i) seq.points.push_back(TorusPoint::from_fraction(i, n));
  seq.provenance = {.family = Family::equispaced, .n = n};
  return seq;
}

TorusSequence gen_kronecker(TorusPoint alpha, unsigned degree, std::size_t n) {
  require_nonempty(n, "gen_kronecker");
  if (degree == 0) throw InvalidArgument("gen_kronecker: degree must be at least 1");
  // n^d must stay below 2^128 for the largest n.
  u128 power = 1;
  for (unsigned i = 0; i < degree; ++i) {
    if (power > (~u128{0}) / n)
      throw InvalidArgument("gen_kronecker: N^d = " + std::to_string(n) + "^" + std::to_string(degree) +
                            " exceeds the 128-bit bound 2^128");
    power *= n;
  }
  TorusSequence seq;
  seq.points.reserve(n);
  for (std::size_t i = 1; i <= n; ++i) {
    std::uint64_t m = 1;
    for (unsigned d = 0; d < degree; ++d) m *= i;  // n^d mod 2^64
    seq.points.push_back(m * alpha);
  }
  seq.provenance = {.family = Family::kronecker, .n = n, .alpha = alpha, .degree = degree};
  return seq;
}

TorusSequence gen_mirrored(std::uint64_t seed, std::size_t n) {
  require_even(n, "gen_mirrored");
  auto seq = paired(seed, n, true);
  seq.provenance = {.family = Family::mirrored, .seed = seed, .n = n};
  return seq;
}

TorusSequence gen_duplicated(std::uint64_t seed, std::size_t n) {
  require_even(n, "gen_duplicated");
  auto seq = paired(seed, n, false);
  seq.provenance = {.family = Family::duplicated, .seed = seed, .n = n};
  return seq;
}

std::uint64_t perturbation_half_width(std::uint64_t position) {
  if (position == 0) throw InvalidArgument("perturbation_half_width: positions are 1-based");
  if (position == 1) return ~std::uint64_t{0};
  // 2^64 * n^{-3/2}; sqrt, multiply and divide are correctly rounded, so this is reproducible.
  const double n = static_cast<double>(position);
  return static_cast<std::uint64_t>(std::floor(kTwoPow64 / (n * std::sqrt(n))));
}

TorusSequence gen_perturbed_pairs(std::uint64_t seed, std::size_t n) {
  require_even(n, "gen_perturbed_pairs");
  auto seq = paired(seed, n, false);
  const CounterRng rng(seed, kPerturbationStream);
  for (std::size_t i = 0; i < n; ++i) {
    const std::uint64_t r = rng.at(i);
    const std::uint64_t w = perturbation_half_width(i + 1);
    std::uint64_t offset;
    if (w >= kHalfTurn) {
      // The interval covers the circle an integral number of times.
      offset = r;
    } else {
      const auto span = static_cast<u128>(2 * w);
      offset = static_cast<std::uint64_t>((static_cast<u128>(r) * span) >> 64) - w;
    }
    seq.points[i] += TorusPoint(offset);
  }
  seq.provenance = {.family = Family::perturbed_pairs, .seed = seed, .n = n};
  return seq;
}

TorusSequence gen_dilated(std::span<const std::uint64_t> a, TorusPoint alpha) {
  require_nonempty(a.size(), "gen_dilated");
  if (a.front() == 0) throw InvalidArgument("gen_dilated: integers must be positive");
  for (std::size_t i = 1; i < a.size(); ++i)
    if (a[i] <= a[i - 1])
      throw InvalidArgument("gen_dilated: integers must be strictly increasing (a[" + std::to_string(i) +
                            "] = " + std::to_string(a[i]) + ")");
  TorusSequence seq;
  seq.points.reserve(a.size());
  for (auto ai : a) seq.points.push_back(ai * alpha);
  seq.provenance = {.family = Family::dilated,
                    .n = a.size(),
                    .alpha = alpha,
                    .dilation = std::vector<std::uint64_t>(a.begin(), a.end())};
  return seq;
}

TorusSequence generate(const GeneratorSpec& spec) {
  switch (spec.family) {
    case Family::uniform: return gen_uniform(spec.seed, spec.n);
    case Family::equispaced: return gen_equispaced(spec.n);
    case Family::kronecker: return gen_kronecker(spec.alpha, spec.degree, spec.n);
    case Family::dilated: return gen_dilated(spec.dilation, spec.alpha);
    case Family::mirrored: return gen_mirrored(spec.seed, spec.n);
    case Family::duplicated: return gen_duplicated(spec.seed, spec.n);
    case Family::perturbed_pairs: return gen_perturbed_pairs(spec.seed, spec.n);
    case Family::external: break;
  }
  throw InvalidArgument("generate: external sequences cannot be regenerated");
}

}  // namespace torcor
