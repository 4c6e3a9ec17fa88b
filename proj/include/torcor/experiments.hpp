#pragma once

// Experiment presets reproducing the counterexamples and bound checks, with
// deterministic JSON reports and CSV tables.

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "torcor/budget.hpp"
#include "torcor/sequence.hpp"

namespace torcor {

enum class PresetId {
  pair_not_fourfold,
  additive_energy_obstruction,
  fourfold_not_pair,
  fourfold_not_pair_rate1,
  random_scaling,
  lemma_powersum,
  identity_check,
  bound_suite,
};

inline constexpr PresetId kAllPresets[] = {
    PresetId::pair_not_fourfold,       PresetId::additive_energy_obstruction, PresetId::fourfold_not_pair,
    PresetId::fourfold_not_pair_rate1, PresetId::random_scaling,              PresetId::lemma_powersum,
    PresetId::identity_check,          PresetId::bound_suite,
};

std::string_view to_string(PresetId id);
PresetId parse_preset(std::string_view text);

enum class Tier { small, standard, large };

std::string_view to_string(Tier t);  // "small", "default", "large"
Tier parse_tier(std::string_view text);

struct Assertion {
  std::string name;
  double value = 0;
  std::optional<double> lower;
  std::optional<double> upper;
  std::string kind;       // proven_bound, proven_inequality, statistical_band, exact
  std::string tolerance;  // human-readable band or bound
  bool passed = false;
};

struct CsvTable {
  std::string name;
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> rows;

  void add_row(std::vector<std::string> row);
  void write(std::ostream& out) const;
};

/// Shortest round-trip decimal for a double; integers print without exponent.
std::string format_number(double v);
std::string format_number(std::uint64_t v);

struct RunMetrics {
  double wall_seconds = 0;
  std::uint64_t peak_rss_bytes = 0;
};

struct Report {
  PresetId preset = PresetId::pair_not_fourfold;
  std::uint64_t seed = 1;
  Tier tier = Tier::standard;
  nlohmann::json inputs = nlohmann::json::object();
  nlohmann::json results = nlohmann::json::object();
  std::vector<Assertion> assertions;
  std::vector<CsvTable> tables;
  RunMetrics metrics;

  bool passed() const;
  /// Deterministic content only; metrics are kept separate.
  nlohmann::json to_json() const;
};

Report run_preset(PresetId id, std::uint64_t seed = 1, Tier tier = Tier::standard,
                  MemoryBudget budget = MemoryBudget::from_env());

/// Writes report.json, metrics.json and one CSV per table into `dir`.
void write_report(const Report& report, const std::filesystem::path& dir);

/// The generator families used by the bound checks at length n.
std::vector<GeneratorSpec> generator_corpus(std::size_t n, std::uint64_t seed);

/// Short label such as "kronecker_d2".
std::string corpus_label(const GeneratorSpec& spec);

struct SweepResult {
  std::string statistic;
  CsvTable table;
  std::string fitted_column;
  double slope = 0;  // least-squares slope of log(fitted_column) against log N
};

/// statistic: "discrepancy", "paircorr" or "corrdisc". Grid must be ascending.
SweepResult run_sweep(std::string_view statistic, const GeneratorSpec& base, std::span<const std::uint64_t> grid,
                      unsigned k = 1, std::uint64_t t = 5, MemoryBudget budget = MemoryBudget::from_env());

/// Least-squares slope of log y against log x.
double loglog_slope(std::span<const double> x, std::span<const double> y);

}  // namespace torcor
