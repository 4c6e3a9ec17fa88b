#include "torcor/experiments.hpp"

#include <sys/resource.h>

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <fstream>
#include <ostream>

#include "torcor/correlation.hpp"
#include "torcor/discrepancy.hpp"
#include "torcor/energy.hpp"
#include "torcor/error.hpp"
#include "torcor/json.hpp"
#include "torcor/spectral.hpp"

namespace torcor {

using nlohmann::json;

namespace {

struct PresetName {
  PresetId id;
  std::string_view name;
};

constexpr PresetName kPresetNames[] = {
    {PresetId::pair_not_fourfold, "pair_not_fourfold"},
    {PresetId::additive_energy_obstruction, "additive_energy_obstruction"},
    {PresetId::fourfold_not_pair, "fourfold_not_pair"},
    {PresetId::fourfold_not_pair_rate1, "fourfold_not_pair_rate1"},
    {PresetId::random_scaling, "random_scaling"},
    {PresetId::lemma_powersum, "lemma_powersum"},
    {PresetId::identity_check, "identity_check"},
    {PresetId::bound_suite, "bound_suite"},
};

template <class T>
T by_tier(Tier tier, T small, T standard, T large) {
  switch (tier) {
    case Tier::small: return small;
    case Tier::standard: return standard;
    case Tier::large: return large;
  }
  return standard;
}

void assert_range(Report& r, std::string name, double value, std::optional<double> lo, std::optional<double> hi,
                  std::string kind, std::string tolerance) {
  Assertion a;
  a.name = std::move(name);
  a.value = value;
  a.lower = lo;
  a.upper = hi;
  a.kind = std::move(kind);
  a.tolerance = std::move(tolerance);
  a.passed = std::isfinite(value) && (!lo || value >= *lo) && (!hi || value <= *hi);
  r.assertions.push_back(std::move(a));
}

std::vector<Rational> integer_grid(std::int64_t from, std::int64_t to) {
  std::vector<Rational> v;
  for (std::int64_t s = from; s <= to; ++s) v.emplace_back(s);
  return v;
}

std::string fmt(double v) { return format_number(v); }
std::string fmt(std::uint64_t v) { return format_number(v); }

void band_rows(Report& r, CsvTable& table, const std::vector<CorrelationResult>& res, double rel, std::string label) {
  for (const auto& c : res) {
    const double s = c.s.to_double();
    const double lo = 2 * s * (1 - rel), hi = 2 * s * (1 + rel);
    table.add_row({c.s.to_string(), fmt(c.raw_count), fmt(c.normalized), fmt(lo), fmt(hi)});
    assert_range(r, label + "_s" + c.s.to_string(), c.normalized, lo, hi, "statistical_band",
                 "2s within +/-" + format_number(rel * 100) + "%");
  }
}

CsvTable band_table(std::string name) {
  return CsvTable{std::move(name), {"s", "raw_count", "normalized", "band_lower", "band_upper"}, {}};
}

void run_pair_not_fourfold(Report& r, MemoryBudget budget) {
  const std::size_t n = by_tier<std::size_t>(r.tier, 1000, 2000, 10000);
  r.inputs = {{"family", "mirrored"}, {"N", n}, {"s", integer_grid(1, 5)}};
  const auto seq = gen_mirrored(r.seed, n);

  const auto pair = count_kfold(seq, {1, Rational(1), integer_grid(1, 5), Comparison::le}, budget);
  auto table = band_table("pair_correlation");
  band_rows(r, table, pair, 0.2, "pair_normalized");

  const TupleSumIndex index(seq.view(), 2, budget);
  const auto four = count_kfold(index, {2, Rational(2), integer_grid(0, 5), Comparison::le});
  const double bound = static_cast<double>(n) * n / 4 - static_cast<double>(n) / 2;
  assert_range(r, "fourfold_zero_window_raw", static_cast<double>(four[0].raw_count), bound, std::nullopt,
               "proven_bound", ">= N^2/4 - N/2");
  auto four_table = CsvTable{"fourfold_correlation", {"s", "raw_count", "normalized", "limit_2s"}, {}};
  for (const auto& c : four)
    four_table.add_row({c.s.to_string(), fmt(c.raw_count), fmt(c.normalized), fmt(2 * c.s.to_double())});
  r.results = {{"pair", pair}, {"fourfold", four}, {"fourfold_zero_bound", bound}};
  r.tables = {table, four_table};
}

void run_additive_energy(Report& r, MemoryBudget budget) {
  const auto prefixes = by_tier<std::vector<std::uint64_t>>(r.tier, {50, 100, 200}, {100, 200, 400, 800},
                                                            {250, 500, 1000, 2000});
  const std::vector<std::uint64_t> geo_prefixes{8, 16, 32, 60};
  const std::size_t torus_n = by_tier<std::size_t>(r.tier, 200, 500, 1000);
  constexpr double kEpsilon = 0.5;
  r.inputs = {{"linear_prefixes", prefixes}, {"geometric_prefixes", geo_prefixes}, {"torus_N", torus_n},
              {"epsilon", kEpsilon}, {"alpha_word", kGoldenFraction.word()}};

  std::vector<std::uint64_t> linear(prefixes.back());
  for (std::size_t i = 0; i < linear.size(); ++i) linear[i] = i + 1;
  std::vector<std::uint64_t> geometric(geo_prefixes.back());
  for (std::size_t i = 0; i < geometric.size(); ++i) geometric[i] = std::uint64_t{1} << (i + 1);

  const auto lin = energy_classifier(linear, prefixes, kEpsilon, budget);
  const auto geo = energy_classifier(geometric, geo_prefixes, kEpsilon, budget);
  CsvTable table{"energy", {"sequence", "N", "energy", "closed_form", "ratio", "excess"}, {}};
  for (const auto& s : lin.samples) {
    const double closed = (2.0 * s.n * s.n * s.n + s.n) / 3;
    table.add_row({"linear", fmt(s.n), fmt(s.energy), fmt(closed), fmt(s.ratio), fmt(s.excess)});
    assert_range(r, "linear_energy_N" + std::to_string(s.n), static_cast<double>(s.energy), closed, closed, "exact",
                 "(2N^3+N)/3");
  }
  for (const auto& s : geo.samples) {
    const double closed = 2.0 * s.n * s.n - s.n;
    table.add_row({"geometric", fmt(s.n), fmt(s.energy), fmt(closed), fmt(s.ratio), fmt(s.excess)});
    assert_range(r, "geometric_energy_N" + std::to_string(s.n), static_cast<double>(s.energy), closed, closed,
                 "exact", "2N^2-N");
  }
  assert_range(r, "linear_obstructs_fourfold", lin.obstructs_fourfold ? 1 : 0, 1, 1, "exact",
               "slope >= 2 + epsilon");
  assert_range(r, "geometric_obstructs_fourfold", geo.obstructs_fourfold ? 1 : 0, 0, 0, "exact",
               "slope < 2 + epsilon");

  // Zero four-fold differences of {a_n alpha}: exactly the non-trivial energy solutions.
  json torus = json::array();
  auto check_torus = [&](const std::string& label, const std::vector<std::uint64_t>& a) {
    const auto seq = gen_dilated(a, kGoldenFraction);
    const auto zero = count_kfold(seq, {2, Rational(2), {Rational(0)}, Comparison::le}, budget).front();
    const std::uint64_t e = additive_energy(a, budget);
    const std::uint64_t n = a.size();
    const double expected = static_cast<double>(e) - 2.0 * n * n + n;
    assert_range(r, label + "_zero_fourfold_equals_energy_excess", static_cast<double>(zero.raw_count), expected,
                 expected, "exact", "E - 2N^2 + N");
    torus.push_back({{"sequence", label}, {"N", n}, {"zero_window", zero}, {"energy", e}});
  };
  check_torus("linear", std::vector<std::uint64_t>(linear.begin(), linear.begin() + std::min(torus_n, linear.size())));
  check_torus("geometric", geometric);

  r.results = {{"linear", lin}, {"geometric", geo}, {"torus", torus}};
  r.tables = {table};
}

void run_fourfold_not_pair(Report& r, MemoryBudget budget) {
  const std::size_t n = by_tier<std::size_t>(r.tier, 2000, 10000, 20000);
  r.inputs = {{"family", "perturbed_pairs"}, {"N", n}, {"k", 2}, {"alpha", 2}, {"s", 1}};
  const auto seq = gen_perturbed_pairs(r.seed, n);

  const ExactThreshold within(1, n);
  std::uint64_t close = 0;
  for (std::size_t j = 0; j + 1 < n; j += 2)
    if (within.contains(torus_distance(seq.points[j], seq.points[j + 1]), Comparison::le)) ++close;
  const double frac = static_cast<double>(close) / static_cast<double>(n);
  assert_range(r, "adjacent_pairs_within_1_over_N", frac, 0.125, std::nullopt, "proven_bound", ">= 1/8");

  const auto four = count_kfold(seq, {2, Rational(2), {Rational(1)}, Comparison::le}, budget);
  auto table = band_table("fourfold_correlation");
  band_rows(r, table, four, 0.2, "fourfold_normalized");
  const auto pair = count_kfold(seq, {1, Rational(1), integer_grid(1, 3), Comparison::le}, budget);
  CsvTable pair_table{"pair_correlation", {"s", "raw_count", "normalized", "limit_2s"}, {}};
  for (const auto& c : pair)
    pair_table.add_row({c.s.to_string(), fmt(c.raw_count), fmt(c.normalized), fmt(2 * c.s.to_double())});
  r.results = {{"adjacent_close_pairs", close}, {"adjacent_fraction", frac}, {"fourfold", four}, {"pair", pair}};
  r.tables = {table, pair_table};
}

void run_fourfold_not_pair_rate1(Report& r, MemoryBudget budget) {
  const std::size_t n = by_tier<std::size_t>(r.tier, 1000, 2000, 5000);
  r.inputs = {{"family", "duplicated"}, {"N", n}, {"rate_alpha", 1}, {"s", integer_grid(1, 3)}};
  const auto seq = gen_duplicated(r.seed, n);

  const auto pair0 = count_pair(seq, Rational(0), Comparison::le);
  assert_range(r, "pair_zero_window_normalized", pair0.normalized, 0.5, std::nullopt, "proven_bound", ">= 1/2");
  assert_range(r, "pair_zero_window_exact", pair0.normalized, 1, 1, "exact", "each point has one twin");

  const TupleSumIndex index(seq.view(), 2, budget);
  const auto zero = count_kfold(index, {2, Rational(2), {Rational(0)}, Comparison::le}).front();
  const double zero_frac = static_cast<double>(zero.raw_count) / (static_cast<double>(n) * n);
  assert_range(r, "fourfold_zero_window_over_N2", zero_frac, 0.5, std::nullopt, "proven_bound", ">= 1/2");

  const auto rate1 = count_kfold(index, {2, Rational(1), integer_grid(1, 3), Comparison::le});
  auto table = band_table("fourfold_rate1");
  band_rows(r, table, rate1, 0.15, "fourfold_rate1_normalized");
  r.results = {{"pair_zero", pair0}, {"fourfold_zero", zero}, {"fourfold_zero_over_N2", zero_frac},
               {"fourfold_rate1", rate1}};
  r.tables = {table};
}

void run_random_scaling(Report& r, MemoryBudget budget) {
  const auto grid = by_tier<std::vector<std::uint64_t>>(r.tier, {1000, 3000, 10000},
                                                        {1000, 3000, 10000, 30000, 100000},
                                                        {1000, 3000, 10000, 30000, 100000, 300000, 1000000});
  const std::size_t corr_n = by_tier<std::size_t>(r.tier, 1000, 2000, 2000);
  constexpr std::uint64_t kT = 5;
  r.inputs = {{"family", "uniform"}, {"grid", grid}, {"corrdisc_N", corr_n}, {"corrdisc_T", kT}, {"k", 2}};

  GeneratorSpec base;
  base.family = Family::uniform;
  base.seed = r.seed;
  const auto sw = run_sweep("discrepancy", base, grid, 1, kT, budget);
  assert_range(r, "discrepancy_loglog_slope", sw.slope, -0.65, -0.35, "statistical_band", "-1/2 within +/-0.15");

  const auto seq = gen_uniform(r.seed, corr_n);
  const auto corr = correlation_discrepancy(seq, 2, kT, budget);
  const double nk = static_cast<double>(corr_n) * corr_n;
  const double scaled = corr.value * nk / kT;
  assert_range(r, "corrdisc_k2_scaled_by_N2_over_T", scaled, std::nullopt, 10, "statistical_band",
               "D2k N^k / T <= 10");

  const std::size_t pair_n = by_tier<std::size_t>(r.tier, 2000, 10000, 10000);
  const auto corr1 = correlation_discrepancy(gen_uniform(r.seed, pair_n), 1, 10, budget);
  assert_range(r, "corrdisc_k1_T10", corr1.value, std::nullopt, 0.3, "statistical_band", "D_{T,N} <= 0.3");

  r.results = {{"discrepancy_slope", sw.slope},
               {"corrdisc_k2", corr},
               {"corrdisc_k2_scaled", scaled},
               {"corrdisc_k2_sqrt_model", std::sqrt(kT / nk)},
               {"corrdisc_k1", corr1}};
  r.tables = {sw.table};
}

void run_lemma_powersum(Report& r, MemoryBudget) {
  const std::size_t n = by_tier<std::size_t>(r.tier, 10000, 100000, 1000000);
  const std::vector<double> ts{4, 2, 1};
  r.inputs = {{"family", "uniform"}, {"N", n}, {"k", 1}, {"t", ts}};
  const auto seq = gen_uniform(r.seed, n);
  std::vector<std::uint64_t> cutoffs;
  for (double t : ts) cutoffs.push_back(lemma_cutoff(n, 1, t));
  const auto sums = power_sum_prefixes(seq.view(), 1, cutoffs);
  CsvTable table{"lemma_power_sum", {"t", "cutoff", "value", "limit_k!/t", "bound_1.5k!/t"}, {}};
  json rows = json::array();
  for (std::size_t i = 0; i < ts.size(); ++i) {
    const double limit = 1 / ts[i];
    table.add_row({fmt(ts[i]), fmt(cutoffs[i]), fmt(sums.values[i]), fmt(limit), fmt(1.5 * limit)});
    assert_range(r, "power_sum_t" + format_number(ts[i]), sums.values[i], std::nullopt, 1.5 * limit,
                 "statistical_band", "<= 1.5 k!/t");
    rows.push_back({{"t", ts[i]}, {"cutoff", cutoffs[i]}, {"value", sums.values[i]}});
  }
  r.results = {{"power_sums", rows}, {"error_bound", sums.error_bound}};
  r.tables = {table};
}

void run_identity_check(Report& r, MemoryBudget) {
  constexpr std::size_t kN = 50;
  constexpr std::uint64_t kM = 10'000'000;
  r.inputs = {{"family", "uniform"}, {"N", kN}, {"k", 1}, {"t", 1}, {"M", kM}};
  const auto rep = fourier_identity_check(gen_uniform(r.seed, kN), 1, 1.0, kM);
  const double diff = std::abs(rep.a_direct - rep.a_fourier);
  assert_range(r, "identity_abs_difference", diff, std::nullopt, 1e-4, "proven_inequality", "<= 1e-4");
  assert_range(r, "identity_within_tail_plus_rounding", diff, std::nullopt, rep.tail_bound + rep.rounding_bound,
               "proven_inequality", "<= tail_bound + rounding_bound");
  const double r_gap = std::abs(rep.r_direct - rep.r_from_identity);
  assert_range(r, "R_equals_A_minus_Cf0_over_Nk", r_gap, std::nullopt, 1e-9 * std::max(1.0, rep.a_direct), "exact",
               "relative 1e-9");

  // Constant sequence: both sides reduce to N^k f(0) = 40 at N = 10, t = 1/4.
  const auto constant = TorusSequence::from_points(std::vector<TorusPoint>(10));
  const std::uint64_t m_const = identity_frequencies_for(10, 1, 0.25, 1e-4);
  const auto crep = fourier_identity_check(constant, 1, 0.25, m_const);
  assert_range(r, "constant_A_direct", crep.a_direct, 40 - 1e-9, 40 + 1e-9, "exact", "N f(0) = 40");
  assert_range(r, "constant_identity_difference", std::abs(crep.a_direct - crep.a_fourier), std::nullopt,
               crep.tail_bound + crep.rounding_bound, "proven_inequality", "<= tail_bound + rounding_bound");
  r.results = {{"uniform", rep}, {"constant", crep}};
}

void run_bound_suite(Report& r, MemoryBudget) {
  const auto sizes = by_tier<std::vector<std::size_t>>(r.tier, {100, 1000}, {100, 1000, 10000}, {100, 1000, 10000});
  constexpr std::uint64_t kTmax = 10;
  r.inputs = {{"N", sizes}, {"k", {1, 2}}, {"T_max", kTmax}, {"et_constants", EtConstants{}}};
  CsvTable key_table{"key_inequality", {"family", "N", "k", "T", "cutoff", "lhs", "rhs", "margin", "D2k"}, {}};
  CsvTable disc_table{"discrepancy", {"family", "N", "D_N", "et_M", "et_bound", "theorem5_explicit_k1_T1"}, {}};
  double min_margin = std::numeric_limits<double>::infinity();
  double min_et_gap = std::numeric_limits<double>::infinity();
  std::uint64_t key_checks = 0, key_failures = 0, et_failures = 0;
  json failures = json::array();
  for (std::size_t n : sizes) {
    for (const auto& spec : generator_corpus(n, r.seed)) {
      const auto seq = generate(spec);
      const std::string label = corpus_label(spec);
      for (unsigned k : {1u, 2u}) {
        for (const auto& row : key_inequality_sweep(seq, k, kTmax)) {
          ++key_checks;
          min_margin = std::min(min_margin, row.margin);
          if (!row.holds) {
            ++key_failures;
            failures.push_back({{"family", label}, {"N", n}, {"check", row}});
          }
          key_table.add_row({label, fmt(std::uint64_t{n}), fmt(std::uint64_t{k}), fmt(row.t), fmt(row.cutoff),
                             fmt(row.lhs), fmt(row.rhs), fmt(row.margin), fmt(row.d2k)});
        }
      }
      const double d = exact_discrepancy(seq);
      const auto table = weyl_sums(seq, n);
      const double et = erdos_turan_bound(table, n);
      min_et_gap = std::min(min_et_gap, et - d);
      if (et < d) ++et_failures;
      BoundInputs in;
      in.n = n;
      in.t = 1;
      in.d2k = correlation_discrepancy(seq, 1, 1).value;
      const auto t5 = theorem5_bound(in);
      disc_table.add_row({label, fmt(std::uint64_t{n}), fmt(d), fmt(std::uint64_t{n}), fmt(et), fmt(t5.explicit_value)});
    }
  }
  assert_range(r, "key_inequality_min_margin", min_margin, 0, std::nullopt, "proven_inequality",
               "lhs <= (k!+1+D)/T for every case");
  assert_range(r, "et_bound_minus_D_min", min_et_gap, 0, std::nullopt, "proven_inequality", "D_N <= et_bound");
  r.results = {{"key_checks", key_checks},
               {"key_failures", key_failures},
               {"et_failures", et_failures},
               {"min_margin", min_margin},
               {"min_et_gap", min_et_gap},
               {"failures", failures}};
  r.tables = {key_table, disc_table};
}

}  // namespace

std::string_view to_string(PresetId id) {
  for (const auto& p : kPresetNames)
    if (p.id == id) return p.name;
  return "unknown";
}

PresetId parse_preset(std::string_view text) {
  for (const auto& p : kPresetNames)
    if (p.name == text) return p.id;
  throw InvalidArgument("unknown preset '" + std::string(text) + "'");
}

std::string_view to_string(Tier t) {
  switch (t) {
    case Tier::small: return "small";
    case Tier::standard: return "default";
    case Tier::large: return "large";
  }
  return "default";
}

Tier parse_tier(std::string_view text) {
  if (text == "small") return Tier::small;
  if (text == "default" || text == "standard") return Tier::standard;
  if (text == "large") return Tier::large;
  throw InvalidArgument("unknown tier '" + std::string(text) + "' (small, default, large)");
}

std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

std::string format_number(std::uint64_t v) { return std::to_string(v); }

void CsvTable::add_row(std::vector<std::string> row) {
  if (row.size() != columns.size()) throw InvalidArgument("CSV row width does not match the header");
  rows.push_back(std::move(row));
}

void CsvTable::write(std::ostream& out) const {
  auto line = [&](const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) out << (i ? "," : "") << cells[i];
    out << '\n';
  };
  line(columns);
  for (const auto& r : rows) line(r);
}

bool Report::passed() const {
  return std::all_of(assertions.begin(), assertions.end(), [](const Assertion& a) { return a.passed; });
}

json Report::to_json() const {
  json asserts = json::array();
  for (const auto& a : assertions) {
    json j{{"name", a.name}, {"value", a.value}, {"kind", a.kind}, {"tolerance", a.tolerance}, {"passed", a.passed}};
    j["lower"] = a.lower ? json(*a.lower) : json(nullptr);
    j["upper"] = a.upper ? json(*a.upper) : json(nullptr);
    asserts.push_back(std::move(j));
  }
  json tables_j = json::array();
  for (const auto& t : tables) tables_j.push_back(t.name + ".csv");
  return json{{"preset", std::string(to_string(preset))},
              {"seed", seed},
              {"tier", std::string(to_string(tier))},
              {"inputs", inputs},
              {"results", results},
              {"assertions", asserts},
              {"tables", tables_j},
              {"passed", passed()}};
}

Report run_preset(PresetId id, std::uint64_t seed, Tier tier, MemoryBudget budget) {
  Report r;
  r.preset = id;
  r.seed = seed;
  r.tier = tier;
  const auto start = std::chrono::steady_clock::now();
  switch (id) {
    case PresetId::pair_not_fourfold: run_pair_not_fourfold(r, budget); break;
    case PresetId::additive_energy_obstruction: run_additive_energy(r, budget); break;
    case PresetId::fourfold_not_pair: run_fourfold_not_pair(r, budget); break;
    case PresetId::fourfold_not_pair_rate1: run_fourfold_not_pair_rate1(r, budget); break;
    case PresetId::random_scaling: run_random_scaling(r, budget); break;
    case PresetId::lemma_powersum: run_lemma_powersum(r, budget); break;
    case PresetId::identity_check: run_identity_check(r, budget); break;
    case PresetId::bound_suite: run_bound_suite(r, budget); break;
  }
  r.metrics.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  rusage usage{};
  if (getrusage(RUSAGE_SELF, &usage) == 0) r.metrics.peak_rss_bytes = static_cast<std::uint64_t>(usage.ru_maxrss) * 1024;
  return r;
}

void write_report(const Report& report, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  auto open = [&](const std::string& name) {
    std::ofstream f(dir / name);
    if (!f) throw Error("cannot write " + (dir / name).string());
    return f;
  };
  open("report.json") << report.to_json().dump(2) << '\n';
  open("metrics.json") << json{{"wall_seconds", report.metrics.wall_seconds},
                               {"peak_rss_bytes", report.metrics.peak_rss_bytes}}
                              .dump(2)
                       << '\n';
  for (const auto& t : report.tables) {
    auto f = open(t.name + ".csv");
    t.write(f);
  }
}

std::vector<GeneratorSpec> generator_corpus(std::size_t n, std::uint64_t seed) {
  std::vector<GeneratorSpec> out;
  auto add = [&](Family f) -> GeneratorSpec& {
    GeneratorSpec s;
    s.family = f;
    s.seed = seed;
    s.n = n;
    out.push_back(s);
    return out.back();
  };
  add(Family::uniform);
  add(Family::equispaced);
  add(Family::kronecker).alpha = kGoldenFraction;
  auto& k2 = add(Family::kronecker);
  k2.alpha = kGoldenFraction;
  k2.degree = 2;
  auto& dil = add(Family::dilated);
  dil.alpha = kGoldenFraction;
  dil.dilation.resize(n);
  for (std::size_t i = 0; i < n; ++i) dil.dilation[i] = static_cast<std::uint64_t>(i + 1) * (i + 1) * (i + 1);
  add(Family::mirrored);
  add(Family::duplicated);
  add(Family::perturbed_pairs);
  return out;
}

std::string corpus_label(const GeneratorSpec& spec) {
  std::string s(to_string(spec.family));
  if (spec.family == Family::kronecker) s += "_d" + std::to_string(spec.degree);
  if (spec.family == Family::dilated) s += "_cubes";
  return s;
}

double loglog_slope(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 2) throw InvalidArgument("slope fit needs two or more points");
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double lx = std::log(x[i]), ly = std::log(y[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  const double r = static_cast<double>(x.size());
  return (r * sxy - sx * sy) / (r * sxx - sx * sx);
}

SweepResult run_sweep(std::string_view statistic, const GeneratorSpec& base, std::span<const std::uint64_t> grid,
                      unsigned k, std::uint64_t t, MemoryBudget budget) {
  if (grid.empty()) throw InvalidArgument("sweep grid is empty");
  if (!std::is_sorted(grid.begin(), grid.end()) || std::adjacent_find(grid.begin(), grid.end()) != grid.end())
    throw InvalidArgument("sweep grid must be strictly ascending");
  SweepResult out;
  out.statistic = std::string(statistic);
  std::vector<double> xs, ys;
  auto spec_at = [&](std::uint64_t n) {
    GeneratorSpec s = base;
    s.n = n;
    if (s.family == Family::dilated && s.dilation.size() < n)
      throw InvalidArgument("dilated sweep needs at least N dilation factors");
    if (s.family == Family::dilated) s.dilation.resize(n);
    return generate(s);
  };
  if (statistic == "discrepancy") {
    out.table = {"sweep_discrepancy",
                 {"N", "D_N", "et_bound", "et_M", "inv_sqrt_N", "envelope", "theorem5_model"},
                 {}};
    out.fitted_column = "D_N";
    for (auto n : grid) {
      const auto seq = spec_at(n);
      const double d = exact_discrepancy(seq);
      const std::uint64_t m = std::min<std::uint64_t>(n, 100000);
      const double et = erdos_turan_bound(weyl_sums(seq, m, WeylMethod::automatic, budget), m);
      const double nd = static_cast<double>(n);
      BoundInputs in;
      in.k = k;
      in.n = n;
      in.t = std::max(1.0, std::pow(nd, k / (1 + 1.0 / (2 * k))));
      in.d2k = in.t / std::pow(nd, k);
      const double model = theorem5_bound(in).value;
      out.table.add_row({fmt(n), fmt(d), fmt(et), fmt(m), fmt(1 / std::sqrt(nd)), fmt(random_envelope(k, nd)),
                         fmt(model)});
      xs.push_back(nd);
      ys.push_back(d);
    }
  } else if (statistic == "paircorr") {
    out.table = {"sweep_paircorr", {"N", "s", "normalized", "limit_2s", "abs_deviation"}, {}};
    out.fitted_column = "abs_deviation";
    for (auto n : grid) {
      const auto r = count_pair(spec_at(n), Rational(static_cast<std::int64_t>(t)));
      const double dev = std::abs(r.normalized - 2.0 * static_cast<double>(t));
      out.table.add_row({fmt(n), fmt(t), fmt(r.normalized), fmt(2.0 * static_cast<double>(t)), fmt(dev)});
      xs.push_back(static_cast<double>(n));
      ys.push_back(dev);
    }
  } else if (statistic == "corrdisc") {
    out.table = {"sweep_corrdisc", {"N", "k", "T", "D2k", "D2k_Nk_over_T", "sqrt_T_over_Nk"}, {}};
    out.fitted_column = "D2k";
    for (auto n : grid) {
      const auto c = correlation_discrepancy(spec_at(n), k, t, budget);
      const double nk = std::pow(static_cast<double>(n), k);
      const double tt = static_cast<double>(t);
      out.table.add_row({fmt(n), fmt(std::uint64_t{k}), fmt(t), fmt(c.value), fmt(c.value * nk / tt),
                         fmt(std::sqrt(tt / nk))});
      xs.push_back(static_cast<double>(n));
      ys.push_back(c.value);
    }
  } else {
    throw InvalidArgument("unknown sweep statistic '" + std::string(statistic) +
                          "' (discrepancy, paircorr, corrdisc)");
  }
  const bool fit = xs.size() >= 2 && std::all_of(ys.begin(), ys.end(), [](double v) { return v > 0; });
  out.slope = fit ? loglog_slope(xs, ys) : std::numeric_limits<double>::quiet_NaN();
  return out;
}

}  // namespace torcor
