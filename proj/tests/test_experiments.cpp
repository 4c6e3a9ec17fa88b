#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include "torcor/error.hpp"
#include "torcor/experiments.hpp"

using namespace torcor;
namespace fs = std::filesystem;

TEST(Names, PresetAndTierRoundTrip) {
  for (auto id : kAllPresets) EXPECT_EQ(parse_preset(to_string(id)), id);
  EXPECT_THROW(parse_preset("nope"), InvalidArgument);
  EXPECT_EQ(to_string(Tier::standard), "default");
  EXPECT_EQ(parse_tier("default"), Tier::standard);
  EXPECT_EQ(parse_tier("small"), Tier::small);
  EXPECT_EQ(parse_tier("large"), Tier::large);
  EXPECT_THROW(parse_tier("huge"), InvalidArgument);
}

TEST(FormatNumber, ShortestRoundTrip) {
  EXPECT_EQ(format_number(0.1), "0.1");
  EXPECT_EQ(format_number(2.0), "2");
  EXPECT_EQ(format_number(std::uint64_t{18446744073709551615ULL}), "18446744073709551615");
  const double x = 1.0 / 3;
  EXPECT_EQ(std::stod(format_number(x)), x);
}

TEST(CsvTable, WritesHeaderAndRows) {
  CsvTable t{"demo", {"a", "b"}, {}};
  t.add_row({"1", "2"});
  t.add_row({"3", "4"});
  EXPECT_THROW(t.add_row({"5"}), InvalidArgument);
  std::ostringstream out;
  t.write(out);
  EXPECT_EQ(out.str(), "a,b\n1,2\n3,4\n");
}

TEST(Corpus, FamiliesAndLabels) {
  const auto corpus = generator_corpus(100, 3);
  ASSERT_EQ(corpus.size(), 8u);
  std::set<std::string> labels;
  for (const auto& spec : corpus) {
    labels.insert(corpus_label(spec));
    EXPECT_EQ(generate(spec).size(), 100u);
  }
  EXPECT_EQ(labels.size(), 8u);
  EXPECT_TRUE(labels.count("kronecker_d2"));
}

TEST(LoglogSlope, ExactPowerLaw) {
  const std::vector<double> x{10, 100, 1000}, y{1, 0.1, 0.01};
  EXPECT_NEAR(loglog_slope(x, y), -1.0, 1e-12);
}

TEST(Sweep, EquispacedDiscrepancyIsOneOverN) {
  GeneratorSpec base{.family = Family::equispaced};
  const std::vector<std::uint64_t> grid{64, 256, 1024, 4096};
  const auto r = run_sweep("discrepancy", base, grid);
  EXPECT_EQ(r.table.rows.size(), 4u);
  EXPECT_NEAR(r.slope, -1.0, 1e-9);
  for (std::size_t i = 0; i < grid.size(); ++i) EXPECT_EQ(std::stod(r.table.rows[i][1]), 1.0 / grid[i]);
  EXPECT_THROW(run_sweep("entropy", base, grid), InvalidArgument);
}

TEST(Sweep, UniformDiscrepancySlope) {
  GeneratorSpec base{.family = Family::uniform, .seed = 1};
  const std::vector<std::uint64_t> grid{1000, 4000, 16000, 64000, 256000};
  const auto r = run_sweep("discrepancy", base, grid);
  EXPECT_GT(r.slope, -0.75);
  EXPECT_LT(r.slope, -0.25);
}

TEST(Sweep, PairCorrelationColumns) {
  GeneratorSpec base{.family = Family::uniform, .seed = 2};
  const std::vector<std::uint64_t> grid{500, 1000, 2000};
  const auto r = run_sweep("paircorr", base, grid, 1, 3);
  EXPECT_EQ(r.table.rows.size(), 3u);
  EXPECT_EQ(r.table.columns.front(), "N");
}

TEST(Presets, SmallTierIsDeterministicAndPasses) {
  for (auto id : {PresetId::pair_not_fourfold, PresetId::fourfold_not_pair_rate1, PresetId::identity_check}) {
    const auto a = run_preset(id, 5, Tier::small);
    const auto b = run_preset(id, 5, Tier::small);
    EXPECT_EQ(a.to_json().dump(), b.to_json().dump()) << to_string(id);
    EXPECT_TRUE(a.passed()) << to_string(id) << "\n" << a.to_json().dump(2);
    EXPECT_FALSE(a.assertions.empty());
  }
}

TEST(Presets, SeedChangesRandomContent) {
  const auto a = run_preset(PresetId::pair_not_fourfold, 1, Tier::small);
  const auto b = run_preset(PresetId::pair_not_fourfold, 2, Tier::small);
  EXPECT_NE(a.to_json().dump(), b.to_json().dump());
}

TEST(Presets, WritesReportFiles) {
  const auto dir = fs::temp_directory_path() / "torcor_report_test";
  fs::remove_all(dir);
  const auto r = run_preset(PresetId::identity_check, 1, Tier::small);
  write_report(r, dir);
  EXPECT_TRUE(fs::exists(dir / "report.json"));
  EXPECT_TRUE(fs::exists(dir / "metrics.json"));
  std::ifstream in(dir / "report.json");
  const auto j = nlohmann::json::parse(in);
  EXPECT_EQ(j.at("preset"), "identity_check");
  EXPECT_FALSE(j.contains("metrics"));
  for (const auto& t : r.tables) EXPECT_TRUE(fs::exists(dir / (t.name + ".csv")));
}
