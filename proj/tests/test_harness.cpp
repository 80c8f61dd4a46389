#include <gtest/gtest.h>

#include <filesystem>
#include <regex>

#include "netcent/harness.hpp"

using namespace netcent;
using harness::json;
namespace fs = std::filesystem;

namespace {

json er_cell(json n, json p) { return {{"model", "er"}, {"n", n}, {"p", p}}; }

harness::ExperimentPlan plan(json models, int samples = 2, std::uint64_t seed = 1) {
  return harness::plan_from_json({{"models", models}, {"samples_per_cell", samples}, {"base_seed", seed}},
                                 NETCENT_SOURCE_DIR "/configs");
}

std::string slurp(const fs::path& p) { return read_text_file(p); }

fs::path scratch(const std::string& name) {
  const auto dir = fs::temp_directory_path() / ("netcent_harness_" + name);
  fs::remove_all(dir);
  return dir;
}

stats::RankCorrelationMatrix uniform_matrix(double off) {
  stats::RankCorrelationMatrix m;
  m.metrics.assign(kAllMeasures.begin(), kAllMeasures.end());
  for (int i = 0; i < 28; ++i) m.pairs.push_back({off, std::nullopt, 1});
  return m;
}

}  // namespace

TEST(Plan, ErGridArithmetic) {
  const auto p = plan(json::array({er_cell({100, 500}, {0.1, 0.3, 0.5})}), 100);
  ASSERT_EQ(p.cells.size(), 6u);
  EXPECT_EQ(p.total_networks(), 600u);
}

TEST(Plan, SwGridArithmetic) {
  const auto p = plan(json::array({{{"model", "sw"}, {"n", {100, 500}}, {"p", {0.1, 0.3, 0.5}}, {"k", {4, 8, 16}}}}), 100);
  EXPECT_EQ(p.cells.size(), 18u);
  EXPECT_EQ(p.total_networks(), 1800u);
}

TEST(Plan, LastKeyVariesFastestAndSeedsStable) {
  const auto p = plan(json::array({er_cell({100, 200}, {0.1, 0.2})}));
  ASSERT_EQ(p.cells.size(), 4u);
  EXPECT_EQ(p.cells[0].params, (json{{"n", 100}, {"p", 0.1}}));
  EXPECT_EQ(p.cells[1].params, (json{{"n", 100}, {"p", 0.2}}));
  EXPECT_EQ(p.cells[2].params, (json{{"n", 200}, {"p", 0.1}}));
  const auto again = plan(json::array({er_cell({100, 200}, {0.1, 0.2})}));
  for (std::size_t i = 0; i < 4; ++i) EXPECT_EQ(again.cells[i].params, p.cells[i].params);
}

TEST(Plan, CsDivisorAndMembershipDefault) {
  const auto p = plan(json::array({{{"model", "cs"}, {"n", 500}, {"p_c", 0.1}, {"p", 0.5}, {"c_divisor", {10, 50}}}}));
  ASSERT_EQ(p.cells.size(), 2u);
  EXPECT_EQ(p.cells[0].params["c"], 50);
  EXPECT_EQ(p.cells[1].params["c"], 10);
  EXPECT_TRUE(std::get<CsParams>(*p.cells[0].generator).require_membership);
}

TEST(Plan, NonIsomorphicCells) {
  const auto p = plan(json::array({{{"model", "ni"}, {"n", {6, 7}}}}));
  ASSERT_EQ(p.cells.size(), 2u);
  EXPECT_EQ(p.cells[0].samples, 112u);
  EXPECT_EQ(p.total_networks(), 965u);
}

TEST(Plan, KroneckerNeedsInitiators) {
  const auto p = harness::plan_from_json(
      {{"models", {{{"model", "kg"}, {"initiators", {"Epinions", "As-Newman"}}, {"k", {7, 9}}}}},
       {"kronecker_initiators_path", "kronecker_initiators.json"}},
      NETCENT_SOURCE_DIR "/configs");
  EXPECT_EQ(p.cells.size(), 4u);
  EXPECT_EQ(p.cells[1].params["n"], 512);
  EXPECT_THROW(plan(json::array({{{"model", "kg"}, {"initiators", "Epinions"}, {"k", 7}}})), ConfigError);
}

TEST(Plan, ConfigErrorsNameTheKey) {
  auto message = [](const json& cfg) -> std::string {
    try {
      harness::plan_from_json(cfg);
    } catch (const ConfigError& e) {
      return e.what();
    }
    return "no error";
  };
  EXPECT_NE(message({{"models", json::array()}}).find("models"), std::string::npos);
  EXPECT_NE(message({{"models", {er_cell(10, 0.5)}}, {"sample_count", 3}}).find("sample_count"), std::string::npos);
  EXPECT_NE(message({{"models", {{{"model", "xx"}}}}}).find("xx"), std::string::npos);
  EXPECT_NE(message({{"models", {{{"model", "er"}, {"n", 10}, {"p", 0.5}, {"kappa", 2}}}}}).find("kappa"),
            std::string::npos);
  EXPECT_NE(message({{"models", {er_cell(10, {0.5, 0.5})}}}).find("duplicate"), std::string::npos);
  EXPECT_NE(message({{"models", {er_cell(10, 0.5), er_cell(10, 0.5)}}}).find("duplicate"), std::string::npos);
  EXPECT_NE(message({{"models", {er_cell(10, 0.5)}}, {"samples_per_cell", 0}}).find("samples_per_cell"),
            std::string::npos);
  EXPECT_NE(message({{"models", {{{"model", "gr"}, {"n", 500}, {"kappa", 2}}}}}).find("perfect square"),
            std::string::npos);
  EXPECT_NE(message({{"models", {er_cell(10, 0.5)}}, {"metrics", {"degree", "pagerank"}}}).find("pagerank"),
            std::string::npos);
  EXPECT_NE(message({{"models", {{{"model", "er"}, {"n", 10}}}}}).find("'p'"), std::string::npos);
}

TEST(Plan, MissingFile) { EXPECT_THROW(harness::plan_experiments("/nonexistent/cfg.json"), ConfigError); }

TEST(Run, StructureOfOneCell) {
  const auto p = plan(json::array({er_cell(100, 0.3)}));
  const auto results = harness::run_experiment(p, 1);
  ASSERT_EQ(results.size(), 2u);
  for (const auto& r : results) {
    EXPECT_TRUE(r.ok) << r.error;
    EXPECT_EQ(r.metrics.size(), 8u);
    EXPECT_EQ(r.distinct.size(), 8u);
    EXPECT_EQ(r.tau.size(), 28u);
    for (double t : r.tau) EXPECT_LE(std::abs(t), 1.0);
    EXPECT_EQ(r.n, 100u);
    EXPECT_EQ(r.seed, derive_seed(1, {2, 0, r.sample}));
  }
  EXPECT_NE(results[0].m, results[1].m);
}

TEST(Run, MetricSubset) {
  auto cfg = json{{"models", {er_cell(30, 0.3)}}, {"samples_per_cell", 1}, {"metrics", {"C_d", "closeness", "C_x"}}};
  const auto results = harness::run_experiment(harness::plan_from_json(cfg));
  ASSERT_EQ(results[0].metrics.size(), 3u);
  EXPECT_EQ(results[0].tau.size(), 3u);
}

TEST(Run, NonIsomorphicSix) {
  const auto results = harness::run_experiment(plan(json::array({{{"model", "ni"}, {"n", 6}}})), 2);
  EXPECT_EQ(results.size(), 112u);
  EXPECT_EQ(harness::failure_count(results), 0u);
}

TEST(Run, FailuresAreIsolated) {
  const auto models = json::array({er_cell(5, 0.0), er_cell(40, 0.3)});
  const auto with_failure = harness::run_experiment(plan(models), 2);
  ASSERT_EQ(with_failure.size(), 4u);
  EXPECT_FALSE(with_failure[0].ok);
  EXPECT_NE(with_failure[0].error.find("no connected sample"), std::string::npos);
  EXPECT_EQ(harness::failure_count(with_failure), 2u);
  // the healthy cell's samples match a run in which it sits at the same index
  const auto alone = harness::run_experiment(plan(json::array({er_cell(6, 0.5), er_cell(40, 0.3)})), 1);
  EXPECT_EQ(harness::to_json(with_failure[2]), harness::to_json(alone[2]));
}

TEST(Run, LargestComponentPolicy) {
  const auto p = harness::plan_from_json(
      {{"models", {{{"model", "kg"}, {"initiators", "As-Newman"}, {"k", 7}, {"connectivity", "largest_component"}}}},
       {"kronecker_initiators_path", "kronecker_initiators.json"},
       {"samples_per_cell", 2}},
      NETCENT_SOURCE_DIR "/configs");
  const auto results = harness::run_experiment(p);
  for (const auto& r : results) {
    EXPECT_TRUE(r.ok) << r.error;
    EXPECT_EQ(r.connectivity, "largest_component");
    EXPECT_LE(r.n, 128u);
  }
}

TEST(Persist, DeterministicAcrossWorkerCounts) {
  const auto models = json::array({er_cell({30, 60}, {0.2, 0.4}), {{"model", "sf"}, {"n", 50}, {"k", 2}},
                                   {{"model", "ni"}, {"n", 5}}});
  const auto p = plan(models, 3, 42);
  const auto a = scratch("w1"), b = scratch("w4");
  harness::write_results(a, p, harness::run_experiment(p, 1));
  harness::write_results(b, p, harness::run_experiment(p, 4));
  for (const char* f : {"results.jsonl", "manifest.json", "correlation.csv", "correlation_by_model.csv",
                        "granularity.csv", "best.csv"})
    EXPECT_EQ(slurp(a / f), slurp(b / f)) << f;
  fs::remove_all(a);
  fs::remove_all(b);
}

TEST(Persist, TablesRebuildFromStoredResults) {
  auto p = plan(json::array({er_cell(40, {0.2, 0.5}), {{"model", "ni"}, {"n", 4}}}), 2);
  p.keep_vectors = true;
  const auto dir = scratch("reload");
  const auto results = harness::run_experiment(p);
  harness::write_results(dir, p, results);
  const auto loaded = harness::load_results(dir);
  ASSERT_EQ(loaded.size(), results.size());
  for (auto t : {harness::Table::correlation, harness::Table::granularity, harness::Table::best})
    EXPECT_EQ(harness::emit_tables(loaded, t), harness::emit_tables(results, t));
  EXPECT_TRUE(fs::exists(dir / "vectors" / "cell0_sample1.csv"));
  EXPECT_TRUE(fs::exists(dir / "timings.csv"));
  EXPECT_EQ(slurp(dir / "results.jsonl").find("seconds"), std::string::npos);
  fs::remove_all(dir);
}

TEST(Tables, CorrelationShapeAndOrder) {
  const auto results = harness::run_experiment(plan(json::array({er_cell(40, 0.3)})));
  const auto csv = harness::emit_tables(results, harness::Table::correlation);
  std::istringstream in(csv);
  std::string line;
  std::getline(in, line);
  EXPECT_EQ(line, "metric,C_c,C_b,C_d,C_e,C_i,C_s,C_w,C_x");
  int populated_below = 0, row = 0;
  const std::regex two_dp(R"(-?\d+\.\d\d)");
  while (std::getline(in, line)) {
    std::vector<std::string> cells;
    std::string cell;
    std::istringstream rs(line);
    while (std::getline(rs, cell, ',')) cells.push_back(cell);
    cells.resize(9);
    for (int j = 1; j <= 8; ++j) {
      if (j - 1 < row) {
        EXPECT_TRUE(std::regex_match(cells[j], two_dp)) << line;
        ++populated_below;
      } else if (j - 1 == row) {
        EXPECT_EQ(cells[j], "1.00");
      } else {
        EXPECT_TRUE(cells[j].empty());
      }
    }
    ++row;
  }
  EXPECT_EQ(row, 8);
  EXPECT_EQ(populated_below, 28);
}

TEST(Tables, SingleNetworkGranularityIsRaw) {
  const auto results = harness::run_experiment(plan(json::array({er_cell(40, 0.3)}), 1));
  const auto csv = harness::emit_tables(results, harness::Table::granularity);
  EXPECT_EQ(csv.substr(0, csv.find('\n')), "metric,complex_mean,complex_ci");
  const auto& r = results[0];
  const auto deg = static_cast<std::size_t>(std::find(r.metrics.begin(), r.metrics.end(), Measure::degree) - r.metrics.begin());
  EXPECT_NE(csv.find("C_d," + fixed_decimal(r.percent[deg], 2) + ",\n"), std::string::npos) << csv;
  const auto lines = std::count(csv.begin(), csv.end(), '\n');
  EXPECT_EQ(lines, 9);
  EXPECT_EQ(csv.substr(csv.find('\n') + 1, 4), "C_b,");
}

TEST(Tables, BestByFamilyMaySumAbove100) {
  const auto results = harness::run_experiment(plan(json::array({{{"model", "ni"}, {"n", 4}}, er_cell(30, 0.3)})));
  const auto csv = harness::emit_tables(results, harness::Table::best);
  EXPECT_EQ(csv.substr(0, csv.find('\n')), "metric,N_ni,M_er");
  // K4 ties on all 8 metrics, so the N_ni column totals exceed 100
  double total = 0;
  std::istringstream in(csv);
  std::string line;
  std::getline(in, line);
  while (std::getline(in, line)) total += std::stod(line.substr(4, line.find(',', 4) - 4));
  EXPECT_GT(total, 100.0);
}

TEST(Tables, EmptyResultsRejected) {
  EXPECT_THROW(harness::emit_tables({}, harness::Table::correlation), ContractError);
  harness::RunResult failed;
  failed.ok = false;
  EXPECT_THROW(harness::emit_tables({failed}, harness::Table::best), ContractError);
}

TEST(Heatmap, IdentityRendersSixtyFourCellsDiagonalDarkest) {
  const auto svg = harness::render_heatmap_svg(uniform_matrix(0.0));
  std::size_t cells = 0;
  for (auto pos = svg.find("class=\"cell\""); pos != std::string::npos; pos = svg.find("class=\"cell\"", pos + 1)) ++cells;
  EXPECT_EQ(cells, 64u);
  EXPECT_EQ(std::count(svg.begin(), svg.end(), '\n') > 64, true);
  const auto darkest = "rgb(178,24,43)";
  std::size_t dark = 0;
  for (auto pos = svg.find(darkest); pos != std::string::npos; pos = svg.find(darkest, pos + 1)) ++dark;
  EXPECT_EQ(dark, 8u);
  EXPECT_NE(svg.find(">0.00<"), std::string::npos);
}

TEST(Heatmap, AllOnesUniform) {
  const auto svg = harness::render_heatmap_svg(uniform_matrix(1.0));
  std::size_t dark = 0;
  for (auto pos = svg.find("rgb(178,24,43)"); pos != std::string::npos; pos = svg.find("rgb(178,24,43)", pos + 1)) ++dark;
  EXPECT_EQ(dark, 64u);
}

TEST(Heatmap, IncompleteMatrixRejected) {
  stats::RankCorrelationMatrix m;
  m.metrics = {Measure::degree, Measure::closeness};
  m.pairs = {{0.5, std::nullopt, 1}};
  EXPECT_THROW(harness::render_heatmap_svg(m), ContractError);
}

TEST(Heatmap, WritesFile) {
  const auto dir = scratch("svg");
  fs::create_directories(dir);
  harness::emit_heatmap(uniform_matrix(-0.5), dir / "h.svg");
  EXPECT_EQ(slurp(dir / "h.svg").substr(0, 4), "<svg");
  fs::remove_all(dir);
}
