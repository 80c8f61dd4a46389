#pragma once

#include <algorithm>
#include <array>
#include <atomic>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "json.hpp"
#include "netcent/centrality.hpp"
#include "netcent/error.hpp"
#include "netcent/format.hpp"
#include "netcent/generators.hpp"
#include "netcent/graph.hpp"
#include "netcent/stats.hpp"

namespace netcent::harness {

using nlohmann::json;

enum class Connectivity { retry, largest_component };

inline std::string_view name(Connectivity c) { return c == Connectivity::retry ? "retry" : "largest_component"; }

/// Model-family column label, e.g. "M_er" or "N_ni".
inline std::string family_of(std::string_view model) {
  return model == "ni" ? "N_ni" : "M_" + std::string(model);
}

// Seed-derivation id per model; ni is deterministic but keeps an id for symmetry.
inline std::uint64_t model_id(std::string_view model) {
  if (model == "ni") return 7;
  for (auto m : {Model::cs, Model::er, Model::gr, Model::sf, Model::sw, Model::kg})
    if (netcent::name(m) == model) return static_cast<std::uint64_t>(m);
  throw ConfigError("unknown model '" + std::string(model) + "'");
}

/// One parameter combination: either a synthetic model or a fixed graph corpus.
struct Cell {
  std::size_t index = 0;
  std::string model;  // cs er gr sf sw kg ni
  json params;        // echo of the concrete parameter values
  std::optional<ModelParams> generator;
  std::shared_ptr<const std::vector<Graph>> corpus;  // ni cells
  Connectivity connectivity = Connectivity::retry;
  std::size_t samples = 0;
};

struct ExperimentPlan {
  std::vector<Cell> cells;
  std::uint64_t base_seed = 0;
  std::vector<Measure> metrics;
  std::filesystem::path output_dir;
  double confidence = 0.99;
  unsigned max_retries = kDefaultMaxRetries;
  bool keep_vectors = false;
  json config;  // as read

  std::size_t total_networks() const {
    std::size_t total = 0;
    for (const auto& c : cells) total += c.samples;
    return total;
  }
};

// ---------------------------------------------------------------------------
// Planning
// ---------------------------------------------------------------------------

namespace detail {

inline std::vector<json> value_list(const json& entry, const std::string& key) {
  const auto& v = entry.at(key);
  std::vector<json> out = v.is_array() ? std::vector<json>(v.begin(), v.end()) : std::vector<json>{v};
  if (out.empty()) throw ConfigError("models: '" + key + "' has no values");
  for (std::size_t i = 0; i < out.size(); ++i)
    for (std::size_t j = i + 1; j < out.size(); ++j)
      if (out[i] == out[j]) throw ConfigError("models: duplicate value in '" + key + "'");
  return out;
}

inline double number(const json& v, const std::string& key) {
  if (!v.is_number()) throw ConfigError("models: '" + key + "' must be numeric");
  return v.get<double>();
}

inline std::size_t count(const json& v, const std::string& key) {
  const double x = number(v, key);
  if (x < 0 || x != std::floor(x)) throw ConfigError("models: '" + key + "' must be a non-negative integer");
  return static_cast<std::size_t>(x);
}

// Cartesian product over keys, last key varying fastest.
inline std::vector<json> expand(const json& entry, const std::vector<std::string>& keys) {
  std::vector<std::vector<json>> lists;
  std::vector<std::string> present;
  for (const auto& k : keys) {
    if (!entry.contains(k)) continue;
    present.push_back(k);
    lists.push_back(value_list(entry, k));
  }
  std::vector<json> out;
  std::vector<std::size_t> odo(lists.size(), 0);
  for (;;) {
    json combo = json::object();
    for (std::size_t i = 0; i < lists.size(); ++i) combo[present[i]] = lists[i][odo[i]];
    out.push_back(std::move(combo));
    std::size_t pos = lists.size();
    while (pos > 0) {
      --pos;
      if (++odo[pos] < lists[pos].size()) break;
      odo[pos] = 0;
      if (pos == 0) return out;
    }
    if (lists.empty()) return out;
  }
}

inline const std::map<std::string, std::vector<std::string>>& model_keys() {
  static const std::map<std::string, std::vector<std::string>> keys = {
      {"cs", {"n", "p_c", "p", "c", "c_divisor"}},
      {"er", {"n", "p"}},
      {"gr", {"n", "kappa"}},
      {"sf", {"n", "k"}},
      {"sw", {"n", "p", "k"}},
      {"kg", {"initiators", "k"}},
      {"ni", {"n", "graph6"}},
  };
  return keys;
}

inline const std::set<std::string>& common_model_keys() {
  static const std::set<std::string> keys = {"model", "connectivity", "samples", "require_membership"};
  return keys;
}

inline void require_keys(const json& combo, std::string_view model, std::initializer_list<const char*> keys) {
  for (const char* k : keys)
    if (!combo.contains(k)) throw ConfigError("models: " + std::string(model) + " requires '" + k + "'");
}

}  // namespace detail

/**
 * Expands a parsed experiment config into cells.
 *
 * Top-level keys: models[], samples_per_cell, base_seed, metrics[],
 * output_dir, kronecker_initiators_path, plus optional confidence,
 * max_retries and keep_vectors. Each models[] entry names a model and lists
 * values per parameter (scalar or array); cells are the cartesian product in
 * entry order with the last-listed key varying fastest.
 *
 * Relative file paths inside the config resolve against `base_dir`.
 */
inline ExperimentPlan plan_from_json(const json& config, const std::filesystem::path& base_dir = {}) {
  auto resolve = [&](const std::string& text) {
    const std::filesystem::path p(text);
    return p.is_absolute() ? p : base_dir / p;
  };
  static const std::set<std::string> top_keys = {"models",      "samples_per_cell", "base_seed",
                                                 "metrics",     "output_dir",       "kronecker_initiators_path",
                                                 "confidence",  "max_retries",      "keep_vectors"};
  if (!config.is_object()) throw ConfigError("config: expected a JSON object");
  for (const auto& [key, _] : config.items())
    if (!top_keys.contains(key)) throw ConfigError("config: unknown key '" + key + "'");
  if (!config.contains("models") || !config["models"].is_array() || config["models"].empty()) {
    throw ConfigError("config: 'models' must be a non-empty array");
  }

  ExperimentPlan plan;
  plan.config = config;
  try {
    const auto samples = config.value("samples_per_cell", 10);
    if (samples < 1) throw ConfigError("config: 'samples_per_cell' must be >= 1");
    plan.base_seed = config.value("base_seed", std::uint64_t{0});
    plan.output_dir = config.value("output_dir", std::string("results"));
    plan.confidence = config.value("confidence", 0.99);
    plan.max_retries = config.value("max_retries", kDefaultMaxRetries);
    plan.keep_vectors = config.value("keep_vectors", false);
    if (!(plan.confidence > 0.0 && plan.confidence < 1.0)) throw ConfigError("config: 'confidence' must lie in (0, 1)");
    if (plan.max_retries < 1) throw ConfigError("config: 'max_retries' must be >= 1");

    if (config.contains("metrics")) {
      for (const auto& m : config["metrics"]) {
        const auto parsed = parse_measure(m.get<std::string>());
        if (!parsed) throw ConfigError("config: unknown metric '" + m.get<std::string>() + "'");
        if (std::find(plan.metrics.begin(), plan.metrics.end(), *parsed) != plan.metrics.end())
          throw ConfigError("config: duplicate metric '" + m.get<std::string>() + "'");
        plan.metrics.push_back(*parsed);
      }
      if (plan.metrics.size() < 2) throw ConfigError("config: 'metrics' needs at least two entries");
      std::sort(plan.metrics.begin(), plan.metrics.end());
    } else {
      plan.metrics.assign(kAllMeasures.begin(), kAllMeasures.end());
    }

    std::optional<std::map<std::string, KroneckerInitiator>> initiators;
    std::set<std::string> seen_cells;
    std::map<std::size_t, std::shared_ptr<const std::vector<Graph>>> enumerated;

    for (const auto& entry : config["models"]) {
      if (!entry.is_object() || !entry.contains("model")) throw ConfigError("models: entry without 'model'");
      const auto model = entry["model"].get<std::string>();
      const auto keys_it = detail::model_keys().find(model);
      if (keys_it == detail::model_keys().end()) throw ConfigError("models: unknown model '" + model + "'");
      const auto& keys = keys_it->second;
      for (const auto& [key, _] : entry.items()) {
        if (!detail::common_model_keys().contains(key) && std::find(keys.begin(), keys.end(), key) == keys.end())
          throw ConfigError("models: unknown parameter '" + key + "' for model " + model);
      }
      if (entry.contains("require_membership") && model != "cs")
        throw ConfigError("models: unknown parameter 'require_membership' for model " + model);

      Connectivity connectivity = Connectivity::retry;
      if (entry.contains("connectivity")) {
        const auto c = entry["connectivity"].get<std::string>();
        if (c == "largest_component") connectivity = Connectivity::largest_component;
        else if (c != "retry") throw ConfigError("models: unknown connectivity '" + c + "'");
      }
      const auto cell_samples = entry.contains("samples") ? detail::count(entry["samples"], "samples") : std::size_t(samples);
      if (cell_samples < 1) throw ConfigError("models: 'samples' must be >= 1");

      for (auto combo : detail::expand(entry, keys)) {
        Cell cell;
        cell.model = model;
        cell.connectivity = connectivity;
        cell.samples = cell_samples;
        if (model == "cs") {
          detail::require_keys(combo, model, {"n", "p_c", "p"});
          CsParams p;
          p.n = detail::count(combo["n"], "n");
          p.p_c = detail::number(combo["p_c"], "p_c");
          p.p = detail::number(combo["p"], "p");
          if (combo.contains("c") == combo.contains("c_divisor"))
            throw ConfigError("models: cs requires exactly one of 'c' or 'c_divisor'");
          if (combo.contains("c")) {
            p.c = detail::count(combo["c"], "c");
          } else {
            const auto d = detail::count(combo["c_divisor"], "c_divisor");
            if (d == 0) throw ConfigError("models: 'c_divisor' must be >= 1");
            p.c = std::max<std::size_t>(1, p.n / d);
            combo["c"] = p.c;
          }
          p.require_membership = entry.value("require_membership", true);
          combo["require_membership"] = p.require_membership;
          cell.generator = p;
        } else if (model == "er") {
          detail::require_keys(combo, model, {"n", "p"});
          cell.generator = ErParams{detail::count(combo["n"], "n"), detail::number(combo["p"], "p")};
        } else if (model == "gr") {
          detail::require_keys(combo, model, {"n", "kappa"});
          cell.generator = GrParams{detail::count(combo["n"], "n"), detail::number(combo["kappa"], "kappa")};
        } else if (model == "sf") {
          detail::require_keys(combo, model, {"n", "k"});
          cell.generator = SfParams{detail::count(combo["n"], "n"), detail::count(combo["k"], "k")};
        } else if (model == "sw") {
          detail::require_keys(combo, model, {"n", "p", "k"});
          cell.generator = SwParams{detail::count(combo["n"], "n"), detail::count(combo["k"], "k"),
                                    detail::number(combo["p"], "p")};
        } else if (model == "kg") {
          detail::require_keys(combo, model, {"initiators", "k"});
          if (!initiators) {
            if (!config.contains("kronecker_initiators_path"))
              throw ConfigError("config: kg cells need 'kronecker_initiators_path'");
            initiators = load_initiators(resolve(config["kronecker_initiators_path"].get<std::string>()));
          }
          const auto init_name = combo["initiators"].get<std::string>();
          const auto it = initiators->find(init_name);
          if (it == initiators->end()) throw ConfigError("models: unknown initiator '" + init_name + "'");
          const auto k = detail::count(combo["k"], "k");
          cell.generator = KgParams{it->second, static_cast<unsigned>(k)};
          combo["n"] = std::size_t{1} << std::min<std::size_t>(k, 62);
        } else {  // ni
          if (combo.contains("n") == combo.contains("graph6"))
            throw ConfigError("models: ni requires exactly one of 'n' or 'graph6'");
          if (entry.contains("samples")) throw ConfigError("models: ni cells take their size from the corpus");
          std::vector<Graph> graphs;
          if (combo.contains("n")) {
            const auto n = detail::count(combo["n"], "n");
            if (n < 1 || n > kMaxEnumerationVertices) throw ConfigError("models: ni 'n' must lie in 1..7");
            auto& cached = enumerated[n];
            if (!cached) cached = std::make_shared<const std::vector<Graph>>(enumerate_connected_nonisomorphic(n));
            cell.corpus = cached;
          } else {
            for (auto& entry_graph : load_graph6_corpus(resolve(combo["graph6"].get<std::string>())))
              graphs.push_back(std::move(entry_graph.graph));
            cell.corpus = std::make_shared<const std::vector<Graph>>(std::move(graphs));
          }
          cell.samples = cell.corpus->size();
          if (cell.samples == 0) throw ConfigError("models: ni corpus is empty");
        }
        if (cell.generator) {
          try {
            validate(*cell.generator);
          } catch (const ContractError& e) {
            throw ConfigError(std::string("models: ") + e.what());
          }
        }
        cell.params = combo;
        const auto key = model + combo.dump();
        if (!seen_cells.insert(key).second) throw ConfigError("models: duplicate cell " + key);
        cell.index = plan.cells.size();
        plan.cells.push_back(std::move(cell));
      }
    }
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config: ") + e.what());
  } catch (const FormatError& e) {
    throw ConfigError(std::string("config: ") + e.what());
  } catch (const ConfigError&) {
    throw;
  } catch (const Error& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
  return plan;
}

inline ExperimentPlan plan_experiments(const std::filesystem::path& config_file) {
  json config;
  try {
    config = json::parse(read_text_file(config_file));
  } catch (const json::exception& e) {
    throw ConfigError("config: " + std::string(e.what()));
  } catch (const Error& e) {
    throw ConfigError(e.what());
  }
  return plan_from_json(config, config_file.parent_path());
}

// ---------------------------------------------------------------------------
// Execution
// ---------------------------------------------------------------------------

/// One sampled network's full output.
struct RunResult {
  std::size_t cell = 0;
  std::size_t sample = 0;
  std::string model;
  json params;
  std::size_t n = 0;
  std::size_t m = 0;
  std::uint64_t seed = 0;       // sample seed
  std::uint64_t draw_seed = 0;  // seed of the accepted draw
  unsigned retries = 0;
  std::string connectivity;
  bool ok = false;
  std::string error;
  std::vector<Measure> metrics;
  std::vector<std::size_t> distinct;
  std::vector<double> percent;
  std::vector<double> tau;      // by stats::pair_slot over metrics
  std::vector<double> seconds;  // wall clock per metric, not persisted in results.jsonl
  std::vector<std::vector<double>> vectors;  // only with keep_vectors

  std::string family() const { return family_of(model); }
};

namespace detail {

inline RunResult run_sample(const ExperimentPlan& plan, const Cell& cell, std::size_t sample) {
  RunResult r;
  r.cell = cell.index;
  r.sample = sample;
  r.model = cell.model;
  r.params = cell.params;
  r.metrics = plan.metrics;
  r.connectivity = cell.corpus ? "corpus" : std::string(name(cell.connectivity));
  try {
    Graph g;
    if (cell.corpus) {
      g = (*cell.corpus)[sample];
    } else {
      r.seed = derive_seed(plan.base_seed, {model_id(cell.model), cell.index, sample});
      if (cell.connectivity == Connectivity::retry) {
        auto drawn = ensure_connected(ModelConfig{*cell.generator, r.seed}, plan.max_retries);
        r.retries = drawn.retries;
        r.draw_seed = derive_seed(r.seed, {drawn.retries});
        g = std::move(drawn.graph);
      } else {
        r.draw_seed = derive_seed(r.seed, {0});
        g = largest_component(generate(*cell.generator, r.draw_seed));
      }
    }
    r.n = g.num_vertices();
    r.m = g.num_edges();

    std::vector<std::vector<double>> rounded;
    for (auto m : plan.metrics) {
      const auto start = std::chrono::steady_clock::now();
      CentralityVector cv;
      try {
        cv = compute(m, g);
      } catch (const Error& e) {
        throw Error(std::string(netcent::name(m)) + ": " + e.what());
      }
      r.seconds.push_back(std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count());
      r.distinct.push_back(stats::distinct_count(cv.values));
      r.percent.push_back(100.0 * static_cast<double>(r.distinct.back()) / static_cast<double>(r.n));
      std::vector<double> rv(cv.values.size());
      for (std::size_t i = 0; i < rv.size(); ++i) rv[i] = round_decimal(cv.values[i], 6);
      rounded.push_back(std::move(rv));
      if (plan.keep_vectors) r.vectors.push_back(std::move(cv.values));
    }
    const std::size_t k = plan.metrics.size();
    for (std::size_t i = 0; i < k; ++i)
      for (std::size_t j = i + 1; j < k; ++j) r.tau.push_back(stats::kendall_tau_b(rounded[i], rounded[j]));
    r.ok = true;
  } catch (const std::exception& e) {
    r.ok = false;
    r.error = e.what();
    r.distinct.clear();
    r.percent.clear();
    r.tau.clear();
    r.vectors.clear();
  }
  return r;
}

}  // namespace detail

/**
 * Runs every (cell, sample) of the plan on a pool of worker threads.
 *
 * Each sample is a pure function of (plan, cell, sample index) and lands in
 * its canonical slot, so the result vector does not depend on `workers`.
 * Failures are recorded in the sample's RunResult.
 */
inline std::vector<RunResult> run_experiment(const ExperimentPlan& plan, unsigned workers = 1) {
  std::vector<std::pair<const Cell*, std::size_t>> tasks;
  for (const auto& cell : plan.cells)
    for (std::size_t s = 0; s < cell.samples; ++s) tasks.emplace_back(&cell, s);

  std::vector<RunResult> results(tasks.size());
  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t i = next++; i < tasks.size(); i = next++) {
      results[i] = detail::run_sample(plan, *tasks[i].first, tasks[i].second);
    }
  };
  workers = std::max(1U, workers);
  if (workers == 1) {
    work();
  } else {
    std::vector<std::jthread> pool;
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work);
  }
  return results;
}

inline std::size_t failure_count(const std::vector<RunResult>& results) {
  return static_cast<std::size_t>(std::count_if(results.begin(), results.end(), [](const auto& r) { return !r.ok; }));
}

// ---------------------------------------------------------------------------
// Persistence
// ---------------------------------------------------------------------------

inline json to_json(const RunResult& r) {
  json j = {{"cell", r.cell},
            {"sample", r.sample},
            {"model", r.model},
            {"family", r.family()},
            {"params", r.params},
            {"n", r.n},
            {"m", r.m},
            {"seed", r.seed},
            {"draw_seed", r.draw_seed},
            {"retries", r.retries},
            {"connectivity", r.connectivity},
            {"status", r.ok ? "ok" : "failed"}};
  json metrics = json::array();
  for (auto m : r.metrics) metrics.push_back(netcent::name(m));
  j["metrics"] = metrics;
  if (!r.ok) {
    j["error"] = r.error;
    return j;
  }
  j["distinct"] = r.distinct;
  j["tau"] = r.tau;
  return j;
}

inline RunResult from_json(const json& j) {
  RunResult r;
  r.cell = j.at("cell").get<std::size_t>();
  r.sample = j.at("sample").get<std::size_t>();
  r.model = j.at("model").get<std::string>();
  r.params = j.at("params");
  r.n = j.at("n").get<std::size_t>();
  r.m = j.at("m").get<std::size_t>();
  r.seed = j.at("seed").get<std::uint64_t>();
  r.draw_seed = j.at("draw_seed").get<std::uint64_t>();
  r.retries = j.at("retries").get<unsigned>();
  r.connectivity = j.at("connectivity").get<std::string>();
  r.ok = j.at("status").get<std::string>() == "ok";
  for (const auto& m : j.at("metrics")) {
    const auto parsed = parse_measure(m.get<std::string>());
    if (!parsed) throw FormatError("results: unknown metric " + m.get<std::string>());
    r.metrics.push_back(*parsed);
  }
  if (!r.ok) {
    r.error = j.value("error", std::string{});
    return r;
  }
  r.distinct = j.at("distinct").get<std::vector<std::size_t>>();
  r.tau = j.at("tau").get<std::vector<double>>();
  if (r.n > 0) {
    for (auto d : r.distinct) r.percent.push_back(100.0 * static_cast<double>(d) / static_cast<double>(r.n));
  }
  return r;
}

inline std::vector<RunResult> load_results(const std::filesystem::path& dir) {
  std::ifstream in(dir / "results.jsonl");
  if (!in) throw Error("cannot open " + (dir / "results.jsonl").string());
  std::vector<RunResult> out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    try {
      out.push_back(from_json(json::parse(line)));
    } catch (const json::exception& e) {
      throw FormatError("results.jsonl line " + std::to_string(line_no) + ": " + e.what());
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Tables
// ---------------------------------------------------------------------------

enum class Table { correlation, granularity, best };

// Row/column orders of the published tables.
inline constexpr std::array<Measure, 8> kCorrelationOrder = {
    Measure::closeness,   Measure::betweenness, Measure::degree,           Measure::eigenvector,
    Measure::information, Measure::subgraph,    Measure::walk_betweenness, Measure::eccentricity,
};
inline constexpr std::array<Measure, 8> kGranularityOrder = {
    Measure::betweenness, Measure::closeness,   Measure::degree,   Measure::eccentricity,
    Measure::eigenvector, Measure::information, Measure::subgraph, Measure::walk_betweenness,
};
inline const std::vector<std::string>& family_order() {
  static const std::vector<std::string> order = {"N_ni", "M_cs", "M_sf", "M_sw", "M_gr", "M_er", "M_kg"};
  return order;
}

namespace detail {

inline std::vector<const RunResult*> successful(const std::vector<RunResult>& results) {
  std::vector<const RunResult*> ok;
  for (const auto& r : results)
    if (r.ok) ok.push_back(&r);
  if (ok.empty()) throw ContractError("tables: no successful results");
  for (const auto* r : ok)
    if (r->metrics != ok.front()->metrics) throw ContractError("tables: results use different metric sets");
  return ok;
}

inline std::string ci_text(const std::optional<double>& hw, int places) {
  return hw ? fixed_decimal(*hw, places) : std::string{};
}

}  // namespace detail

/// Mean tau-b matrix over the given results (all must share one metric set).
inline stats::RankCorrelationMatrix correlation_of(const std::vector<const RunResult*>& results, double confidence) {
  std::vector<std::vector<double>> taus;
  for (const auto* r : results) taus.push_back(r->tau);
  return stats::correlation_matrix(results.front()->metrics, taus, confidence);
}

inline stats::RankCorrelationMatrix correlation_of(const std::vector<RunResult>& results, double confidence) {
  return correlation_of(detail::successful(results), confidence);
}

inline std::string correlation_csv(const stats::RankCorrelationMatrix& mat) {
  std::string out = "metric";
  for (auto m : kCorrelationOrder) out += "," + std::string(label(m));
  out += '\n';
  for (std::size_t i = 0; i < kCorrelationOrder.size(); ++i) {
    out += label(kCorrelationOrder[i]);
    for (std::size_t j = 0; j < kCorrelationOrder.size(); ++j) {
      out += ',';
      const auto a = kCorrelationOrder[i], b = kCorrelationOrder[j];
      if (j <= i && mat.index_of(a) && mat.index_of(b)) out += fixed_decimal(mat.mean(a, b), 2);
    }
    out += '\n';
  }
  return out;
}

/// Long-form pair means per family plus the pooled set.
inline std::string correlation_by_model_csv(const std::vector<RunResult>& results, double confidence) {
  const auto ok = detail::successful(results);
  std::string out = "family,metric_a,metric_b,mean,half_width,networks\n";
  auto emit = [&](const std::string& family, const std::vector<const RunResult*>& subset) {
    const auto mat = correlation_of(subset, confidence);
    for (std::size_t i = 0; i < kCorrelationOrder.size(); ++i) {
      for (std::size_t j = 0; j < i; ++j) {
        const auto a = kCorrelationOrder[i], b = kCorrelationOrder[j];
        if (!mat.index_of(a) || !mat.index_of(b)) continue;
        const auto s = mat.at(a, b);
        out += family + "," + std::string(label(a)) + "," + std::string(label(b)) + "," + fixed_decimal(s.mean, 4) +
               "," + detail::ci_text(s.half_width, 4) + "," + std::to_string(s.count) + "\n";
      }
    }
  };
  for (const auto& family : family_order()) {
    std::vector<const RunResult*> subset;
    for (const auto* r : ok)
      if (r->family() == family) subset.push_back(r);
    if (!subset.empty()) emit(family, subset);
  }
  emit("pooled", ok);
  return out;
}

namespace detail {

struct GranularityGroup {
  std::string name;
  std::vector<const RunResult*> members;
};

inline std::vector<GranularityGroup> granularity_groups(const std::vector<const RunResult*>& ok) {
  GranularityGroup complex{"complex", {}}, ni{"nonisomorphic", {}};
  std::map<std::size_t, GranularityGroup> by_size;
  for (const auto* r : ok) {
    if (r->model == "ni") {
      ni.members.push_back(r);
      auto& g = by_size[r->n];
      g.name = "ni_n" + std::to_string(r->n);
      g.members.push_back(r);
    } else {
      complex.members.push_back(r);
    }
  }
  std::vector<GranularityGroup> out;
  if (!complex.members.empty()) out.push_back(std::move(complex));
  if (!ni.members.empty()) {
    const bool several_sizes = by_size.size() > 1;
    out.push_back(std::move(ni));
    if (several_sizes)
      for (auto& [_, g] : by_size) out.push_back(std::move(g));
  }
  return out;
}

inline stats::GranularityReport report_of(const std::vector<const RunResult*>& members, double confidence) {
  std::vector<std::vector<double>> percents;
  std::vector<std::vector<std::size_t>> distinct;
  for (const auto* r : members) {
    percents.push_back(r->percent);
    distinct.push_back(r->distinct);
  }
  return stats::granularity_report(members.front()->metrics, percents, distinct, confidence);
}

}  // namespace detail

inline std::string granularity_csv(const std::vector<RunResult>& results, double confidence) {
  const auto ok = detail::successful(results);
  const auto groups = detail::granularity_groups(ok);
  std::vector<stats::GranularityReport> reports;
  for (const auto& g : groups) reports.push_back(detail::report_of(g.members, confidence));

  std::string out = "metric";
  for (const auto& g : groups) out += "," + g.name + "_mean," + g.name + "_ci";
  out += '\n';
  const auto& metrics = ok.front()->metrics;
  for (auto m : kGranularityOrder) {
    const auto it = std::find(metrics.begin(), metrics.end(), m);
    if (it == metrics.end()) continue;
    const auto k = static_cast<std::size_t>(it - metrics.begin());
    out += label(m);
    for (const auto& rep : reports) {
      const auto& row = rep.rows[k];
      out += "," + fixed_decimal(row.percent.mean, 2) + "," + detail::ci_text(row.percent.half_width, 2);
    }
    out += '\n';
  }
  return out;
}

inline std::string best_csv(const std::vector<RunResult>& results, double confidence) {
  const auto ok = detail::successful(results);
  std::vector<std::string> families;
  std::vector<stats::GranularityReport> reports;
  for (const auto& family : family_order()) {
    std::vector<const RunResult*> subset;
    for (const auto* r : ok)
      if (r->family() == family) subset.push_back(r);
    if (subset.empty()) continue;
    families.push_back(family);
    reports.push_back(detail::report_of(subset, confidence));
  }
  std::string out = "metric";
  for (const auto& f : families) out += "," + f;
  out += '\n';
  const auto& metrics = ok.front()->metrics;
  for (auto m : kGranularityOrder) {
    const auto it = std::find(metrics.begin(), metrics.end(), m);
    if (it == metrics.end()) continue;
    const auto k = static_cast<std::size_t>(it - metrics.begin());
    out += label(m);
    for (const auto& rep : reports) out += "," + fixed_decimal(rep.rows[k].best_share, 1);
    out += '\n';
  }
  return out;
}

inline std::string emit_tables(const std::vector<RunResult>& results, Table which, double confidence = 0.99) {
  if (results.empty()) throw ContractError("emit_tables: empty results");
  switch (which) {
    case Table::correlation: return correlation_csv(correlation_of(results, confidence));
    case Table::granularity: return granularity_csv(results, confidence);
    case Table::best: return best_csv(results, confidence);
  }
  throw ContractError("emit_tables: unknown table");
}

// ---------------------------------------------------------------------------
// Heatmap
// ---------------------------------------------------------------------------

/**
 * SVG heatmap of a full 8x8 tau-b matrix in the correlation-table order.
 * Colour ramp: -1 deep blue, 0 white, +1 deep red, linear in between.
 */
inline std::string render_heatmap_svg(const stats::RankCorrelationMatrix& mat) {
  for (auto m : kCorrelationOrder)
    if (!mat.index_of(m)) throw ContractError("heatmap: matrix lacks " + std::string(label(m)));
  constexpr int cell = 60, margin = 50;
  const int size = margin + cell * static_cast<int>(kCorrelationOrder.size()) + 10;

  auto colour = [](double v) {
    v = std::clamp(v, -1.0, 1.0);
    // endpoints: red (178, 24, 43), blue (33, 102, 172)
    const double t = std::abs(v);
    const int r0 = v >= 0 ? 178 : 33, g0 = v >= 0 ? 24 : 102, b0 = v >= 0 ? 43 : 172;
    auto mix = [t](int end) { return static_cast<int>(std::lround(255.0 + (end - 255.0) * t)); };
    std::ostringstream os;
    os << "rgb(" << mix(r0) << "," << mix(g0) << "," << mix(b0) << ")";
    return os.str();
  };

  std::ostringstream svg;
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << size << "\" height=\"" << size
      << "\" font-family=\"sans-serif\" font-size=\"13\">\n";
  svg << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  for (std::size_t i = 0; i < kCorrelationOrder.size(); ++i) {
    const int pos = margin + cell * static_cast<int>(i) + cell / 2;
    svg << "<text x=\"" << pos << "\" y=\"" << margin - 10 << "\" text-anchor=\"middle\">"
        << label(kCorrelationOrder[i]) << "</text>\n";
    svg << "<text x=\"" << margin - 8 << "\" y=\"" << pos + 4 << "\" text-anchor=\"end\">"
        << label(kCorrelationOrder[i]) << "</text>\n";
  }
  for (std::size_t i = 0; i < kCorrelationOrder.size(); ++i) {
    for (std::size_t j = 0; j < kCorrelationOrder.size(); ++j) {
      const double v = mat.mean(kCorrelationOrder[i], kCorrelationOrder[j]);
      const int x = margin + cell * static_cast<int>(j), y = margin + cell * static_cast<int>(i);
      svg << "<rect class=\"cell\" x=\"" << x << "\" y=\"" << y << "\" width=\"" << cell << "\" height=\"" << cell
          << "\" fill=\"" << colour(v) << "\" stroke=\"white\"/>\n";
      svg << "<text x=\"" << x + cell / 2 << "\" y=\"" << y + cell / 2 + 4 << "\" text-anchor=\"middle\" fill=\""
          << (std::abs(v) > 0.6 ? "white" : "black") << "\">" << fixed_decimal(v, 2) << "</text>\n";
    }
  }
  svg << "</svg>\n";
  return svg.str();
}

inline void emit_heatmap(const stats::RankCorrelationMatrix& mat, const std::filesystem::path& path) {
  const auto svg = render_heatmap_svg(mat);
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path.string());
  out << svg;
}

// ---------------------------------------------------------------------------
// Results directory
// ---------------------------------------------------------------------------

inline void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path.string());
  out << text;
}

/// Regenerates every roll-up CSV from stored results.
inline void write_tables(const std::filesystem::path& dir, const std::vector<RunResult>& results, double confidence) {
  write_text(dir / "correlation.csv", emit_tables(results, Table::correlation, confidence));
  write_text(dir / "correlation_by_model.csv", correlation_by_model_csv(results, confidence));
  write_text(dir / "granularity.csv", emit_tables(results, Table::granularity, confidence));
  write_text(dir / "best.csv", emit_tables(results, Table::best, confidence));
}

inline json manifest_json(const ExperimentPlan& plan, const std::vector<RunResult>& results) {
  json cells = json::array();
  for (const auto& c : plan.cells) {
    cells.push_back({{"cell", c.index},
                     {"model", c.model},
                     {"family", family_of(c.model)},
                     {"params", c.params},
                     {"connectivity", c.corpus ? "corpus" : std::string(name(c.connectivity))},
                     {"samples", c.samples}});
  }
  json metrics = json::array();
  for (auto m : plan.metrics) metrics.push_back(netcent::name(m));
  return {{"config", plan.config},
          {"base_seed", plan.base_seed},
          {"metrics", metrics},
          {"confidence", plan.confidence},
          {"max_retries", plan.max_retries},
          {"total_networks", plan.total_networks()},
          {"failures", failure_count(results)},
          {"seed_derivation",
           "sample seed = derive_seed(base_seed, {model_id, cell, sample}); attempt r uses derive_seed(sample seed, "
           "{r}); derive_seed folds ids with SplitMix64: h = mix64(base), h = mix64(h ^ id)"},
          {"tau_conventions",
           "tau-b on values rounded to 6 decimals; both rankings constant -> 1, exactly one constant -> 0"},
          {"cells", cells}};
}

/**
 * Writes manifest.json, results.jsonl (one record per sample, canonical
 * order), timings.csv, optional vectors/ and the roll-up tables.
 */
inline void write_results(const std::filesystem::path& dir, const ExperimentPlan& plan,
                          const std::vector<RunResult>& results) {
  std::filesystem::create_directories(dir);
  write_text(dir / "manifest.json", manifest_json(plan, results).dump(2) + "\n");

  std::string lines, timings = "cell,sample,metric,seconds\n";
  for (const auto& r : results) {
    lines += to_json(r).dump() + "\n";
    for (std::size_t k = 0; k < r.seconds.size(); ++k) {
      timings += std::to_string(r.cell) + "," + std::to_string(r.sample) + "," +
                 std::string(netcent::name(r.metrics[k])) + "," + fixed_decimal(r.seconds[k], 6) + "\n";
    }
  }
  write_text(dir / "results.jsonl", lines);
  write_text(dir / "timings.csv", timings);

  if (plan.keep_vectors) {
    std::filesystem::create_directories(dir / "vectors");
    for (const auto& r : results) {
      if (!r.ok) continue;
      std::vector<CentralityVector> cvs;
      for (std::size_t k = 0; k < r.metrics.size(); ++k) cvs.push_back({r.metrics[k], r.vectors[k]});
      write_text(dir / "vectors" / ("cell" + std::to_string(r.cell) + "_sample" + std::to_string(r.sample) + ".csv"),
                 to_centrality_csv(r.n, cvs));
    }
  }
  if (results.size() > failure_count(results)) write_tables(dir, results, plan.confidence);
}

inline double stored_confidence(const std::filesystem::path& dir) {
  std::ifstream in(dir / "manifest.json");
  if (!in) return 0.99;
  return json::parse(in).value("confidence", 0.99);
}

}  // namespace netcent::harness
