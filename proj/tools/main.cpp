// torcor command-line front end.

#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "torcor/correlation.hpp"
#include "torcor/discrepancy.hpp"
#include "torcor/energy.hpp"
#include "torcor/error.hpp"
#include "torcor/experiments.hpp"
#include "torcor/json.hpp"
#include "torcor/seqio.hpp"
#include "torcor/spectral.hpp"

using namespace torcor;
using nlohmann::json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitAssertion = 2;

struct SequenceOptions {
  std::string family = "uniform";
  std::uint64_t seed = 1;
  std::size_t n = 1000;
  std::string theta;          // kronecker/dilated multiplier as a decimal in [0, 1)
  std::uint64_t theta_word = 0;
  unsigned degree = 1;
  std::string a_file;         // dilated integers, one per line
  std::string in;             // TSEQ input file
};

struct Common {
  std::string format = "json";
  std::string out;
  std::string budget_mem;
};

void add_sequence_options(CLI::App* app, SequenceOptions& o) {
  app->add_option("--family", o.family, "uniform, equispaced, kronecker, dilated, mirrored, duplicated, perturbed_pairs")
      ->capture_default_str();
  app->add_option("--seed", o.seed, "generator seed")->capture_default_str();
  app->add_option("--n", o.n, "sequence length")->capture_default_str();
  app->add_option("--theta", o.theta, "multiplier for kronecker/dilated, decimal in [0,1) (default golden ratio)");
  app->add_option("--theta-word", o.theta_word, "multiplier as a 64-bit fixed-point word");
  app->add_option("--degree", o.degree, "kronecker degree d in {alpha n^d}")->capture_default_str();
  app->add_option("--a-file", o.a_file, "dilated: file of increasing integers a_n");
  app->add_option("--in", o.in, "read the sequence from a TSEQ file instead of generating it");
}

void add_common(CLI::App* app, Common& c, bool csv) {
  if (csv)
    app->add_option("--format", c.format, "output format")->check(CLI::IsMember({"json", "csv"}))->capture_default_str();
  app->add_option("--out", c.out, "write output to this path instead of stdout");
  app->add_option("--budget-mem", c.budget_mem, "memory budget, e.g. 512M or 2G (default $TORCOR_MEM_BUDGET or 2G)");
}

MemoryBudget budget_of(const Common& c) {
  return c.budget_mem.empty() ? MemoryBudget::from_env() : MemoryBudget::parse(c.budget_mem);
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open '" + path + "'");
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

TorusPoint multiplier(const SequenceOptions& o) {
  if (o.theta_word != 0) return TorusPoint(o.theta_word);
  if (!o.theta.empty()) return reduce(std::stod(o.theta));
  return kGoldenFraction;
}

TorusSequence make_sequence(const SequenceOptions& o) {
  if (!o.in.empty()) return load_sequence(o.in);
  const Family f = parse_family(o.family);
  switch (f) {
    case Family::dilated: {
      std::vector<std::uint64_t> a;
      if (!o.a_file.empty()) {
        a = parse_integer_sequence(read_file(o.a_file));
      } else {
        for (std::uint64_t i = 1; i <= o.n; ++i) a.push_back(i);
      }
      return gen_dilated(a, multiplier(o));
    }
    case Family::external: throw InvalidArgument("family 'external' needs --in");
    default: {
      GeneratorSpec spec;
      spec.family = f;
      spec.seed = o.seed;
      spec.n = o.n;
      spec.alpha = multiplier(o);
      spec.degree = o.degree;
      return generate(spec);
    }
  }
}

std::vector<Rational> parse_rationals(const std::vector<std::string>& items) {
  std::vector<Rational> v;
  for (const auto& s : items) v.push_back(Rational::parse(s));
  return v;
}

void emit(const Common& c, const std::string& text) {
  if (c.out.empty()) {
    std::cout << text;
    if (!text.empty() && text.back() != '\n') std::cout << '\n';
    return;
  }
  const std::filesystem::path p(c.out);
  if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path());
  std::ofstream f(p, std::ios::binary);
  if (!f) throw Error("cannot write '" + c.out + "'");
  f << text;
  if (!text.empty() && text.back() != '\n') f << '\n';
}

std::string correlation_csv(const std::vector<CorrelationResult>& rows) {
  CsvTable t{"correlation", {"k", "alpha", "s", "N", "raw_count", "excluded_C", "normalized", "comparison", "exact_threshold"}, {}};
  for (const auto& r : rows)
    t.add_row({std::to_string(r.k), r.alpha.to_string(), r.s.to_string(), std::to_string(r.n),
               std::to_string(r.raw_count), std::to_string(r.excluded_c), format_number(r.normalized),
               std::string(to_string(r.comparison)), r.exact_threshold ? "true" : "false"});
  std::ostringstream s;
  t.write(s);
  return s.str();
}

std::string table_csv(const CsvTable& t) {
  std::ostringstream s;
  t.write(s);
  return s.str();
}

std::vector<std::uint64_t> parse_u64_list(const std::vector<std::string>& items) {
  std::vector<std::uint64_t> v;
  for (const auto& s : items) {
    std::size_t used = 0;
    const auto x = std::stoull(s, &used);
    if (used != s.size()) throw InvalidArgument("not an integer: '" + s + "'");
    v.push_back(x);
  }
  return v;
}

std::vector<std::uint64_t> named_integer_sequence(const std::string& name, std::size_t n) {
  std::vector<std::uint64_t> a;
  for (std::uint64_t i = 1; i <= n; ++i) {
    if (name == "linear") a.push_back(i);
    else if (name == "squares") a.push_back(i * i);
    else if (name == "cubes") a.push_back(i * i * i);
    else if (name == "geometric") {
      if (i > 63) throw InvalidArgument("geometric sequence 2^n needs N <= 63 in 64-bit mode");
      a.push_back(std::uint64_t{1} << i);
    } else
      throw InvalidArgument("unknown integer family '" + name + "' (linear, squares, cubes, geometric)");
  }
  return a;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Correlation and discrepancy statistics for sequences on the torus"};
  app.require_subcommand(1);

  SequenceOptions seq_opt;
  Common common;
  unsigned k = 1;
  std::string alpha_text;
  std::vector<std::string> s_items{"1", "2", "3", "4", "5"};
  std::string cmp_text = "le";
  std::uint64_t big_t = 5;
  double t_real = 5;
  std::uint64_t m = 0;
  std::string method_text = "auto";
  std::uint64_t grid_g = 0;

  auto* generate_cmd = app.add_subcommand("generate", "generate a sequence and save it as TSEQ");
  add_sequence_options(generate_cmd, seq_opt);
  generate_cmd->add_option("--out", common.out, "output TSEQ path")->required();

  auto* paircorr = app.add_subcommand("paircorr", "pair correlation counts at windows s/N");
  add_sequence_options(paircorr, seq_opt);
  add_common(paircorr, common, true);
  paircorr->add_option("--s", s_items, "window multipliers s (rational), comma separated")->delimiter(',');
  paircorr->add_option("--cmp", cmp_text, "window comparison")->check(CLI::IsMember({"le", "lt"}))->capture_default_str();

  auto* kcorr = app.add_subcommand("kcorr", "2k-fold correlation counts at windows s/N^alpha");
  add_sequence_options(kcorr, seq_opt);
  add_common(kcorr, common, true);
  kcorr->add_option("--k", k, "fold order (1..6)")->capture_default_str();
  kcorr->add_option("--alpha", alpha_text, "rate alpha in [0, k] (rational, default k)");
  kcorr->add_option("--s", s_items, "window multipliers s (rational), comma separated")->delimiter(',');
  kcorr->add_option("--cmp", cmp_text, "window comparison")->check(CLI::IsMember({"le", "lt"}))->capture_default_str();

  auto* corrdisc = app.add_subcommand("corrdisc", "correlation discrepancy D^(2k)_{T,N}");
  add_sequence_options(corrdisc, seq_opt);
  add_common(corrdisc, common, false);
  corrdisc->add_option("--k", k, "fold order")->capture_default_str();
  corrdisc->add_option("--t,--T", big_t, "largest integer window T")->capture_default_str();

  auto* weyl = app.add_subcommand("weyl", "Weyl sums S_N(m) for m = 1..M");
  add_sequence_options(weyl, seq_opt);
  add_common(weyl, common, true);
  weyl->add_option("--m", m, "largest frequency M (default N)");
  weyl->add_option("--method", method_text, "auto, direct or fast")->check(CLI::IsMember({"auto", "direct", "fast"}));

  auto* disc = app.add_subcommand("discrepancy", "exact discrepancy, Erdos-Turan and correlation bounds");
  add_sequence_options(disc, seq_opt);
  add_common(disc, common, false);
  disc->add_option("--m", m, "Erdos-Turan cutoff M (default min(N, 10^5))");
  disc->add_option("--k", k, "fold order for the correlation bound")->capture_default_str();
  disc->add_option("--t,--T", big_t, "window T for the correlation bound")->capture_default_str();
  disc->add_option("--grid", grid_g, "also report the grid-restricted discrepancy with G cells");

  auto* bounds = app.add_subcommand("bounds", "evaluate the discrepancy bounds and the key inequality");
  add_sequence_options(bounds, seq_opt);
  add_common(bounds, common, false);
  bounds->add_option("--k", k, "fold order")->capture_default_str();
  bounds->add_option("--alpha", alpha_text, "rate alpha in [0, k] (rational, default k)");
  bounds->add_option("--t,--T", big_t, "integer window T")->capture_default_str();

  std::string energy_family = "linear";
  std::vector<std::string> prefix_items;
  double epsilon = 0.5;
  auto* energy = app.add_subcommand("energy", "additive energy of an integer sequence");
  energy->add_option("--family", energy_family, "linear, squares, cubes or geometric")->capture_default_str();
  energy->add_option("--n", seq_opt.n, "length")->capture_default_str();
  energy->add_option("--a-file", seq_opt.a_file, "file of increasing integers, one per line");
  energy->add_option("--prefixes", prefix_items, "prefix lengths for the growth classifier")->delimiter(',');
  energy->add_option("--epsilon", epsilon, "classifier margin")->capture_default_str();
  add_common(energy, common, false);

  std::string preset_id;
  std::string tier_text = "default";
  auto* preset = app.add_subcommand("preset", "run an experiment preset and write its report");
  preset->add_option("--id", preset_id, "preset name")->required();
  preset->add_option("--seed", seq_opt.seed, "seed")->capture_default_str();
  preset->add_option("--tier", tier_text, "small, default or large")->capture_default_str();
  preset->add_option("--out", common.out, "report directory (default stdout JSON only)");
  preset->add_option("--budget-mem", common.budget_mem, "memory budget");

  std::string statistic = "discrepancy";
  std::vector<std::string> grid_items{"1000", "3000", "10000", "30000", "100000"};
  auto* sweep = app.add_subcommand("sweep", "statistic over an ascending N grid, as CSV");
  add_sequence_options(sweep, seq_opt);
  add_common(sweep, common, true);
  sweep->add_option("--statistic", statistic, "discrepancy, paircorr or corrdisc")->capture_default_str();
  sweep->add_option("--grid", grid_items, "ascending N values")->delimiter(',');
  sweep->add_option("--k", k, "fold order for corrdisc")->capture_default_str();
  sweep->add_option("--t,--T", big_t, "window T")->capture_default_str();

  if (argc <= 1) {
    std::cerr << app.help();
    return kExitUsage;
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    const MemoryBudget budget = budget_of(common);
    const Comparison cmp = parse_comparison(cmp_text);

    if (*generate_cmd) {
      const auto seq = make_sequence(seq_opt);
      save_sequence(seq, common.out);
      std::cout << json{{"path", common.out}, {"N", seq.size()},
                        {"provenance", json::parse(provenance_to_json(seq.provenance))}}
                       .dump(2)
                << '\n';
      return kExitOk;
    }

    if (*paircorr || *kcorr) {
      const auto seq = make_sequence(seq_opt);
      const unsigned kk = *paircorr ? 1 : k;
      Rational alpha(kk);
      if (*kcorr && !alpha_text.empty()) alpha = Rational::parse(alpha_text);
      const auto rows = count_kfold(seq, {kk, alpha, parse_rationals(s_items), cmp}, budget);
      emit(common, common.format == "csv" ? correlation_csv(rows) : json(rows).dump(2));
      return kExitOk;
    }

    if (*corrdisc) {
      const auto seq = make_sequence(seq_opt);
      emit(common, json(correlation_discrepancy(seq, k, big_t, budget)).dump(2));
      return kExitOk;
    }

    if (*weyl) {
      const auto seq = make_sequence(seq_opt);
      const WeylMethod method = method_text == "direct" ? WeylMethod::direct
                                : method_text == "fast" ? WeylMethod::fast
                                                        : WeylMethod::automatic;
      const auto table = weyl_sums(seq, m == 0 ? seq.size() : m, method, budget);
      if (common.format == "csv") {
        std::ostringstream s;
        table.write_csv(s);
        emit(common, s.str());
      } else {
        json values = json::array();
        for (std::uint64_t i = 1; i <= table.size(); ++i)
          values.push_back({{"m", i}, {"re", table.at(i).real()}, {"im", table.at(i).imag()}, {"abs", std::abs(table.at(i))}});
        emit(common, json{{"N", table.n}, {"error_bound", table.error_bound}, {"sums", values}}.dump(2));
      }
      return kExitOk;
    }

    if (*disc) {
      const auto seq = make_sequence(seq_opt);
      const std::uint64_t mm = m == 0 ? std::min<std::uint64_t>(seq.size(), 100000) : m;
      json j = discrepancy_report(seq, mm, k, big_t);
      if (grid_g > 0) j["grid_discrepancy"] = {{"G", grid_g}, {"value", grid_discrepancy(seq, grid_g)}};
      emit(common, j.dump(2));
      return kExitOk;
    }

    if (*bounds) {
      const auto seq = make_sequence(seq_opt);
      const Rational alpha = alpha_text.empty() ? Rational(k) : Rational::parse(alpha_text);
      BoundInputs in;
      in.k = k;
      in.t = static_cast<double>(big_t);
      in.n = seq.size();
      in.alpha = alpha.to_double();
      in.d2k = correlation_discrepancy(seq, k, big_t, budget).value;
      in.f = weak_correlation_excess(seq, k, alpha, big_t);
      in.delta = excess_ratio(seq, big_t);
      json j{{"inputs", in},
             {"theorem5", theorem5_bound(in)},
             {"alpha_bound", alpha_bound(in)},
             {"delta_form", delta_form_bound(in)},
             {"random_envelope", random_envelope(k, static_cast<double>(seq.size()))},
             {"D_N", exact_discrepancy(seq)}};
      const auto opt = optimize_alpha_bound(in);
      j["alpha_bound_optimized"] = {{"T", opt.t}, {"value", opt.value}};
      bool holds = true;
      if (lemma_cutoff(seq.size(), k, static_cast<double>(big_t)) >= 1) {
        const auto key = key_inequality_check(seq, k, big_t);
        j["key_inequality"] = key;
        holds = key.holds;
      }
      emit(common, j.dump(2));
      return holds ? kExitOk : kExitAssertion;
    }

    if (*energy) {
      const auto a = seq_opt.a_file.empty() ? named_integer_sequence(energy_family, seq_opt.n)
                                            : parse_integer_sequence(read_file(seq_opt.a_file));
      const std::uint64_t e = additive_energy(a, budget);
      const double n = static_cast<double>(a.size());
      json j{{"N", a.size()}, {"energy", e}, {"ratio", static_cast<double>(e) / (n * n)},
             {"excess", (static_cast<double>(e) - 2 * n * n + n) / (n * n)}};
      if (!prefix_items.empty()) j["classifier"] = energy_classifier(a, parse_u64_list(prefix_items), epsilon, budget);
      emit(common, j.dump(2));
      return kExitOk;
    }

    if (*preset) {
      const auto report = run_preset(parse_preset(preset_id), seq_opt.seed, parse_tier(tier_text), budget);
      if (!common.out.empty()) write_report(report, common.out);
      std::cout << report.to_json().dump(2) << '\n';
      for (const auto& a : report.assertions)
        if (!a.passed) std::cerr << "assertion failed: " << a.name << " = " << format_number(a.value) << " (" << a.tolerance << ")\n";
      return report.passed() ? kExitOk : kExitAssertion;
    }

    if (*sweep) {
      GeneratorSpec base;
      base.family = parse_family(seq_opt.family);
      base.seed = seq_opt.seed;
      base.alpha = multiplier(seq_opt);
      base.degree = seq_opt.degree;
      if (base.family == Family::dilated) {
        const auto grid = parse_u64_list(grid_items);
        base.dilation = seq_opt.a_file.empty() ? named_integer_sequence("linear", grid.empty() ? 0 : grid.back())
                                               : parse_integer_sequence(read_file(seq_opt.a_file));
      }
      const auto grid = parse_u64_list(grid_items);
      const auto r = run_sweep(statistic, base, grid, k, big_t, budget);
      if (common.format == "csv") {
        emit(common, table_csv(r.table));
      } else {
        json rows = json::array();
        for (const auto& row : r.table.rows) {
          json o;
          for (std::size_t i = 0; i < row.size(); ++i) o[r.table.columns[i]] = row[i];
          rows.push_back(o);
        }
        emit(common, json{{"statistic", r.statistic}, {"fitted_column", r.fitted_column}, {"slope", r.slope},
                          {"rows", rows}}
                         .dump(2));
      }
      return kExitOk;
    }
  } catch (const BudgetExceeded& e) {
    std::cerr << "resource error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const ParseError& e) {
    std::cerr << "parse error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  }
  return kExitUsage;
}
