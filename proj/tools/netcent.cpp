// netcent command-line front end.

#include <iostream>
#include <thread>

#include "CLI11.hpp"
#include "netcent/netcent.hpp"

namespace fs = std::filesystem;
using namespace netcent;

namespace {

void write_output(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  harness::write_text(path, text);
}

std::string read_input(const std::string& path) {
  if (path.empty() || path == "-") {
    std::ostringstream ss;
    ss << std::cin.rdbuf();
    return ss.str();
  }
  return read_text_file(path);
}

// CSV with a header row; returns the named column as doubles.
std::vector<double> csv_column(const std::string& text, const std::string& column) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line)) throw FormatError("csv: empty input");
  auto split = [](const std::string& row) {
    std::vector<std::string> cells;
    std::string cell;
    std::istringstream rs(row);
    while (std::getline(rs, cell, ',')) cells.push_back(std::string(detail::trim(cell)));
    if (!row.empty() && row.back() == ',') cells.emplace_back();
    return cells;
  };
  const auto header = split(line);
  const auto it = std::find(header.begin(), header.end(), column);
  if (it == header.end()) throw FormatError("csv: no column '" + column + "'");
  const auto idx = static_cast<std::size_t>(it - header.begin());
  std::vector<double> out;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (detail::trim(line).empty()) continue;
    const auto cells = split(line);
    if (idx >= cells.size()) throw FormatError("csv line " + std::to_string(line_no) + ": missing cell");
    const auto& c = cells[idx];
    double v = 0;
    const auto [p, ec] = std::from_chars(c.data(), c.data() + c.size(), v);
    if (ec != std::errc{} || p != c.data() + c.size())
      throw FormatError("csv line " + std::to_string(line_no) + ": bad number '" + c + "'");
    out.push_back(v);
  }
  return out;
}

std::vector<Measure> parse_metric_list(const std::vector<std::string>& names) {
  if (names.empty()) return {kAllMeasures.begin(), kAllMeasures.end()};
  std::vector<Measure> out;
  for (const auto& s : names) {
    const auto m = parse_measure(s);
    if (!m) throw ConfigError("unknown metric '" + s + "'");
    out.push_back(*m);
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Vertex centrality measures, network generators and rank-correlation experiments"};
  app.require_subcommand(1);

  // generate
  auto* gen = app.add_subcommand("generate", "Sample one network (or a corpus) from a model");
  std::string model, init_file, init_name, out_path, out_dir, connectivity = "retry";
  std::size_t n = 0, k = 0, c = 0, count = 1;
  double p = 0, p_c = 0, kappa = 0;
  std::uint64_t seed = 0;
  unsigned max_retries = kDefaultMaxRetries;
  bool require_membership = false;
  gen->add_option("--model", model, "cs, er, gr, sf, sw or kg")->required();
  gen->add_option("-n,--vertices", n, "Vertex count");
  gen->add_option("-p,--p", p, "Edge / rewiring probability");
  gen->add_option("-k,--k", k, "Model k (sf, sw, Kronecker power)");
  gen->add_option("--p-c", p_c, "Community membership probability (cs)");
  gen->add_option("-c,--communities", c, "Community count (cs)");
  gen->add_flag("--require-membership", require_membership, "Every vertex joins at least one community (cs)");
  gen->add_option("--kappa", kappa, "Distance decay base (gr)");
  gen->add_option("--initiators", init_file, "Initiator JSON file (kg)");
  gen->add_option("--initiator", init_name, "Initiator name (kg)");
  gen->add_option("--seed", seed, "Seed");
  gen->add_option("--connectivity", connectivity, "retry, largest_component or none")
      ->check(CLI::IsMember({"retry", "largest_component", "none"}));
  gen->add_option("--max-retries", max_retries, "Attempts before giving up");
  gen->add_option("-o,--output", out_path, "Edge-list output (default stdout)");
  gen->add_option("--count", count, "Number of samples (corpus mode)");
  gen->add_option("--out-dir", out_dir, "Corpus directory: sample_<i>.edges + manifest.json");

  // compute
  auto* comp = app.add_subcommand("compute", "Edge list -> centrality CSV");
  std::string in_path;
  std::vector<std::string> metric_names;
  std::optional<std::size_t> n_hint;
  comp->add_option("input", in_path, "Edge-list file ('-' for stdin)")->required();
  comp->add_option("-m,--metrics", metric_names, "Subset of measures (default all)");
  comp->add_option("-n,--vertices", n_hint, "Vertex count (overrides header)");
  comp->add_option("-o,--output", out_path, "CSV output (default stdout)");

  // correlate
  auto* corr = app.add_subcommand("correlate", "Kendall tau-b between two CSV columns");
  std::string csv_a, col_a, csv_b, col_b;
  corr->add_option("csv", csv_a, "CSV file")->required();
  corr->add_option("column_a", col_a, "First column")->required();
  corr->add_option("column_b", col_b, "Second column")->required();
  corr->add_option("--other", csv_b, "Take column_b from this CSV instead");

  // enumerate
  auto* en = app.add_subcommand("enumerate", "All connected non-isomorphic graphs on n vertices, graph6");
  std::size_t en_n = 0;
  bool en_all = false;
  en->add_option("n", en_n, "Vertex count (1..7)")->required()->check(CLI::Range(1, 7));
  en->add_flag("--all", en_all, "Include disconnected classes");
  en->add_option("-o,--output", out_path, "Output file (default stdout)");

  // experiment
  auto* ex = app.add_subcommand("experiment", "Run a config grid, persist results and tables");
  std::string config_path, ex_out;
  unsigned workers = std::max(1U, std::thread::hardware_concurrency());
  bool keep_vectors = false;
  ex->add_option("config", config_path, "Experiment JSON")->required();
  ex->add_option("-w,--workers", workers, "Worker threads")->check(CLI::PositiveNumber);
  ex->add_option("--output", ex_out, "Results directory (overrides output_dir)");
  ex->add_flag("--keep-vectors", keep_vectors, "Persist full centrality vectors");

  // tables
  auto* tb = app.add_subcommand("tables", "Rebuild roll-up CSVs from a results directory");
  std::string results_dir, which = "all";
  tb->add_option("results", results_dir, "Results directory")->required();
  tb->add_option("--table", which, "correlation, granularity, best or all")
      ->check(CLI::IsMember({"correlation", "granularity", "best", "all"}));

  // heatmap
  auto* hm = app.add_subcommand("heatmap", "Correlation heatmap SVG from a results directory");
  std::string family;
  hm->add_option("results", results_dir, "Results directory")->required();
  hm->add_option("-o,--output", out_path, "SVG path (default <results>/heatmap.svg)");
  hm->add_option("--family", family, "Restrict to one model family, e.g. M_er");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*gen) {
      const auto models = std::vector<std::string>{"cs", "er", "gr", "sf", "sw", "kg"};
      if (std::find(models.begin(), models.end(), model) == models.end())
        throw ConfigError("unknown model '" + model + "'");
      ModelParams params;
      if (model == "cs") params = CsParams{n, p_c, p, c, require_membership};
      else if (model == "er") params = ErParams{n, p};
      else if (model == "gr") params = GrParams{n, kappa};
      else if (model == "sf") params = SfParams{n, k};
      else if (model == "sw") params = SwParams{n, k, p};
      else {
        if (init_file.empty() || init_name.empty()) throw ConfigError("kg needs --initiators and --initiator");
        const auto inits = load_initiators(init_file);
        const auto it = inits.find(init_name);
        if (it == inits.end()) throw ConfigError("unknown initiator '" + init_name + "'");
        params = KgParams{it->second, static_cast<unsigned>(k)};
      }
      validate(params);
      std::vector<CorpusSample> samples;
      for (std::size_t i = 0; i < count; ++i) {
        CorpusSample s;
        s.config = {params, count == 1 ? seed : derive_seed(seed, {i})};
        s.connectivity = connectivity;
        if (connectivity == "retry") {
          auto drawn = ensure_connected(s.config, max_retries);
          s.retries = drawn.retries;
          s.draw_seed = derive_seed(s.config.seed, {drawn.retries});
          s.graph = std::move(drawn.graph);
        } else {
          s.draw_seed = derive_seed(s.config.seed, {0});
          s.graph = generate(params, s.draw_seed);
          if (connectivity == "largest_component") s.graph = largest_component(s.graph);
        }
        samples.push_back(std::move(s));
      }
      if (!out_dir.empty()) {
        write_corpus(out_dir, samples);
      } else {
        if (count != 1) throw ConfigError("--count > 1 needs --out-dir");
        write_output(out_path, to_edge_list(samples.front().graph));
      }
      return 0;
    }

    if (*comp) {
      const auto g = graph_from_edge_list(read_input(in_path), n_hint);
      std::vector<CentralityVector> vectors;
      for (auto m : parse_metric_list(metric_names)) vectors.push_back(compute(m, g));
      write_output(out_path, to_centrality_csv(g.num_vertices(), vectors));
      return 0;
    }

    if (*corr) {
      const auto text_a = read_text_file(csv_a);
      const auto x = csv_column(text_a, col_a);
      const auto y = csv_column(csv_b.empty() ? text_a : read_text_file(csv_b), col_b);
      std::cout << fixed_decimal(stats::kendall_tau_b(x, y), 6) << '\n';
      return 0;
    }

    if (*en) {
      const auto graphs = en_all ? enumerate_nonisomorphic(en_n) : enumerate_connected_nonisomorphic(en_n);
      write_output(out_path, to_graph6_corpus(graphs));
      return 0;
    }

    if (*ex) {
      harness::ExperimentPlan plan;
      try {
        plan = harness::plan_experiments(config_path);
      } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return 2;
      }
      if (!ex_out.empty()) plan.output_dir = ex_out;
      if (keep_vectors) plan.keep_vectors = true;
      std::cerr << "planned " << plan.cells.size() << " cells, " << plan.total_networks() << " networks, "
                << workers << " workers\n";
      const auto results = harness::run_experiment(plan, workers);
      harness::write_results(plan.output_dir, plan, results);
      const auto failures = harness::failure_count(results);
      for (const auto& r : results)
        if (!r.ok) std::cerr << "cell " << r.cell << " sample " << r.sample << ": " << r.error << '\n';
      std::cerr << results.size() - failures << " ok, " << failures << " failed -> " << plan.output_dir.string()
                << '\n';
      return failures == 0 ? 0 : 1;
    }

    if (*tb) {
      const auto results = harness::load_results(results_dir);
      const double conf = harness::stored_confidence(results_dir);
      if (which == "all") {
        harness::write_tables(results_dir, results, conf);
      } else {
        const auto t = which == "correlation"   ? harness::Table::correlation
                       : which == "granularity" ? harness::Table::granularity
                                                : harness::Table::best;
        std::cout << harness::emit_tables(results, t, conf);
      }
      return 0;
    }

    if (*hm) {
      auto results = harness::load_results(results_dir);
      if (!family.empty()) {
        std::erase_if(results, [&](const auto& r) { return r.family() != family; });
        if (results.empty()) throw ContractError("no results for family " + family);
      }
      const auto mat = harness::correlation_of(results, harness::stored_confidence(results_dir));
      harness::emit_heatmap(mat, out_path.empty() ? fs::path(results_dir) / "heatmap.svg" : fs::path(out_path));
      return 0;
    }
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
