#pragma once

#include <algorithm>
#include <bit>
#include <array>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <map>
#include <numeric>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include "json.hpp"
#include "netcent/error.hpp"
#include "netcent/graph.hpp"

namespace netcent {

// ---------------------------------------------------------------------------
// Seeds and random numbers
// ---------------------------------------------------------------------------

/// SplitMix64 finaliser.
inline constexpr std::uint64_t mix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/**
 * Folds a sequence of identifiers into a 64-bit seed:
 * h = mix64(base); h = mix64(h ^ id) for each id in order.
 *
 * Experiment samples use derive_seed(base, {model, cell, sample}) and each
 * connectivity retry r of that sample uses derive_seed(sample_seed, {r}).
 */
inline constexpr std::uint64_t derive_seed(std::uint64_t base, std::initializer_list<std::uint64_t> ids) {
  std::uint64_t h = mix64(base);
  for (auto id : ids) h = mix64(h ^ id);
  return h;
}

/// mt19937_64 with portable uniform draws (the std distributions are not
/// specified bit-for-bit across standard libraries).
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  double uniform01() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  bool bernoulli(double p) { return uniform01() < p; }

  std::uint64_t below(std::uint64_t bound) {
    const std::uint64_t threshold = (0 - bound) % bound;
    for (;;) {
      const std::uint64_t r = engine_();
      if (r >= threshold) return r % bound;
    }
  }

 private:
  std::mt19937_64 engine_;
};

// ---------------------------------------------------------------------------
// Model configuration
// ---------------------------------------------------------------------------

enum class Model : std::uint8_t { cs = 1, er = 2, gr = 3, sf = 4, sw = 5, kg = 6 };

inline std::string_view name(Model m) {
  switch (m) {
    case Model::cs: return "cs";
    case Model::er: return "er";
    case Model::gr: return "gr";
    case Model::sf: return "sf";
    case Model::sw: return "sw";
    case Model::kg: return "kg";
  }
  return "";
}

struct KroneckerInitiator {
  std::string name;
  std::array<double, 4> p{};  // row-major 2x2

  double at(unsigned row, unsigned col) const { return p[row * 2 + col]; }
};

// Community structure: c communities, joined independently with probability
// p_c; pairs sharing a community linked with probability p. With
// require_membership a vertex that drew no community redraws its whole
// membership vector until it has at least one.
struct CsParams {
  std::size_t n = 0;
  double p_c = 0.0;
  double p = 0.0;
  std::size_t c = 1;
  bool require_membership = false;
};
struct ErParams {
  std::size_t n = 0;
  double p = 0.0;
};
struct GrParams {
  std::size_t n = 0;
  double kappa = 2.0;
};
struct SfParams {
  std::size_t n = 0;
  std::size_t k = 2;
};
struct SwParams {
  std::size_t n = 0;
  std::size_t k = 4;
  double p = 0.0;
};
struct KgParams {
  KroneckerInitiator initiator;
  unsigned k = 1;
};

using ModelParams = std::variant<CsParams, ErParams, GrParams, SfParams, SwParams, KgParams>;

struct ModelConfig {
  ModelParams params;
  std::uint64_t seed = 0;
};

inline Model model_of(const ModelParams& params) {
  return std::visit(
      [](const auto& p) -> Model {
        using T = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<T, CsParams>) return Model::cs;
        else if constexpr (std::is_same_v<T, ErParams>) return Model::er;
        else if constexpr (std::is_same_v<T, GrParams>) return Model::gr;
        else if constexpr (std::is_same_v<T, SfParams>) return Model::sf;
        else if constexpr (std::is_same_v<T, SwParams>) return Model::sw;
        else return Model::kg;
      },
      params);
}

/// Ordered (name, value) pairs; the kg initiator is reported by name separately.
inline std::vector<std::pair<std::string, double>> param_list(const ModelParams& params) {
  return std::visit(
      [](const auto& p) -> std::vector<std::pair<std::string, double>> {
        using T = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<T, CsParams>)
          return {{"n", double(p.n)}, {"p_c", p.p_c}, {"p", p.p}, {"c", double(p.c)}};
        else if constexpr (std::is_same_v<T, ErParams>)
          return {{"n", double(p.n)}, {"p", p.p}};
        else if constexpr (std::is_same_v<T, GrParams>)
          return {{"n", double(p.n)}, {"kappa", p.kappa}};
        else if constexpr (std::is_same_v<T, SfParams>)
          return {{"n", double(p.n)}, {"k", double(p.k)}};
        else if constexpr (std::is_same_v<T, SwParams>)
          return {{"n", double(p.n)}, {"k", double(p.k)}, {"p", p.p}};
        else
          return {{"n", double(std::size_t{1} << p.k)}, {"k", double(p.k)}};
      },
      params);
}

inline std::string describe(const ModelConfig& cfg) {
  std::ostringstream os;
  os << name(model_of(cfg.params)) << '(';
  bool first = true;
  for (const auto& [key, value] : param_list(cfg.params)) {
    os << (first ? "" : ", ") << key << '=' << value;
    first = false;
  }
  if (const auto* kg = std::get_if<KgParams>(&cfg.params)) os << ", initiator=" << kg->initiator.name;
  os << ", seed=" << cfg.seed << ')';
  return os.str();
}

namespace detail {

inline void require_probability(double p, std::string_view what) {
  if (!(p >= 0.0 && p <= 1.0)) throw ContractError(std::string(what) + " must lie in [0, 1]");
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Generators
// ---------------------------------------------------------------------------

/// G(n, p): each pair (i < j), in lexicographic order, kept with probability p.
inline Graph gen_er(std::size_t n, double p, std::uint64_t seed) {
  detail::require_probability(p, "er: p");
  Rng rng(seed);
  GraphBuilder b(n);
  for (Vertex i = 0; i < n; ++i)
    for (Vertex j = i + 1; j < n; ++j)
      if (rng.bernoulli(p)) b.add_edge(i, j);
  return b.build();
}

/**
 * Preferential attachment from a K_k seed. Each new vertex picks k distinct
 * existing targets with probability proportional to current degree; draws
 * come from the endpoint multiset and repeats are rejected.
 */
inline Graph gen_sf(std::size_t n, std::size_t k, std::uint64_t seed) {
  if (k < 2 || k >= n) throw ContractError("sf: requires 2 <= k < n");
  Rng rng(seed);
  GraphBuilder b(n);
  std::vector<Vertex> endpoints;
  endpoints.reserve(2 * (k * (k - 1) / 2 + (n - k) * k));
  for (Vertex i = 0; i < k; ++i) {
    for (Vertex j = i + 1; j < k; ++j) {
      b.add_edge(i, j);
      endpoints.push_back(i);
      endpoints.push_back(j);
    }
  }
  std::vector<Vertex> targets;
  for (auto v = static_cast<Vertex>(k); v < n; ++v) {
    targets.clear();
    while (targets.size() < k) {
      const Vertex t = endpoints[rng.below(endpoints.size())];
      if (std::find(targets.begin(), targets.end(), t) == targets.end()) targets.push_back(t);
    }
    for (Vertex t : targets) {
      b.add_edge(v, t);
      endpoints.push_back(v);
      endpoints.push_back(t);
    }
  }
  return b.build();
}

/**
 * Watts-Strogatz: ring lattice joining each vertex to its k nearest neighbours,
 * then each lattice edge (i, i+j), scanned once in order of i then j, is moved
 * with probability p to (i, w) for a uniform w that is neither i nor already
 * adjacent to i. Edge count stays n*k/2.
 */
inline Graph gen_sw(std::size_t n, std::size_t k, double p, std::uint64_t seed) {
  if (k < 2 || k % 2 != 0 || k >= n) throw ContractError("sw: requires even k with 2 <= k < n");
  detail::require_probability(p, "sw: p");
  Rng rng(seed);
  GraphBuilder b(n);
  std::vector<std::size_t> deg(n, k);
  const std::size_t half = k / 2;
  for (Vertex i = 0; i < n; ++i)
    for (std::size_t j = 1; j <= half; ++j) b.add_edge(i, static_cast<Vertex>((i + j) % n));

  for (Vertex i = 0; i < n; ++i) {
    for (std::size_t j = 1; j <= half; ++j) {
      if (!rng.bernoulli(p)) continue;
      if (deg[i] >= n - 1) continue;
      const auto old = static_cast<Vertex>((i + j) % n);
      Vertex w;
      do {
        w = static_cast<Vertex>(rng.below(n));
      } while (w == i || b.has_edge(i, w));
      b.remove_edge(i, old);
      b.add_edge(i, w);
      --deg[old];
      ++deg[w];
    }
  }
  return b.build();
}

/**
 * Geographical model on a sqrt(n) x sqrt(n) grid: vertex i sits at
 * (i / side, i % side) and pair (i, j) is linked with probability
 * kappa^(-s_ij), s_ij the Manhattan distance.
 */
inline Graph gen_gr(std::size_t n, double kappa, std::uint64_t seed) {
  if (!(kappa > 1.0)) throw ContractError("gr: requires kappa > 1");
  const auto side = static_cast<std::size_t>(std::llround(std::sqrt(static_cast<double>(n))));
  if (side * side != n) throw ContractError("gr: n=" + std::to_string(n) + " is not a perfect square");
  std::vector<double> prob(2 * side + 1);
  for (std::size_t s = 0; s < prob.size(); ++s) prob[s] = std::pow(kappa, -static_cast<double>(s));
  Rng rng(seed);
  GraphBuilder b(n);
  for (Vertex i = 0; i < n; ++i) {
    for (Vertex j = i + 1; j < n; ++j) {
      const auto dr = static_cast<std::ptrdiff_t>(i / side) - static_cast<std::ptrdiff_t>(j / side);
      const auto dc = static_cast<std::ptrdiff_t>(i % side) - static_cast<std::ptrdiff_t>(j % side);
      const auto s = static_cast<std::size_t>(std::abs(dr) + std::abs(dc));
      if (rng.bernoulli(prob[s])) b.add_edge(i, j);
    }
  }
  return b.build();
}

namespace detail {

// Membership bitsets, `words` 64-bit words per vertex, drawn first from rng.
inline std::vector<std::uint64_t> draw_memberships(const CsParams& params, Rng& rng) {
  const auto& [n, p_c, p, c, require_membership] = params;
  detail::require_probability(p_c, "cs: p_c");
  detail::require_probability(p, "cs: p");
  if (c < 1) throw ContractError("cs: requires c >= 1");
  if (require_membership && p_c == 0.0) throw ContractError("cs: require_membership needs p_c > 0");
  const std::size_t words = (c + 63) / 64;
  std::vector<std::uint64_t> member(n * words, 0);
  for (std::size_t v = 0; v < n; ++v) {
    auto* bits = member.data() + v * words;
    bool any = false;
    do {
      std::fill(bits, bits + words, 0);
      for (std::size_t k = 0; k < c; ++k) {
        if (rng.bernoulli(p_c)) {
          bits[k / 64] |= std::uint64_t{1} << (k % 64);
          any = true;
        }
      }
    } while (require_membership && !any);
  }
  return member;
}

}  // namespace detail

/// Number of communities each vertex joins in gen_cs(params, seed).
inline std::vector<std::size_t> cs_membership_counts(const CsParams& params, std::uint64_t seed) {
  Rng rng(seed);
  const auto member = detail::draw_memberships(params, rng);
  const std::size_t words = (params.c + 63) / 64;
  std::vector<std::size_t> out(params.n, 0);
  for (std::size_t v = 0; v < params.n; ++v)
    for (std::size_t w = 0; w < words; ++w) out[v] += static_cast<std::size_t>(std::popcount(member[v * words + w]));
  return out;
}

/// Community-structure model; see CsParams. One Bernoulli(p) trial per pair
/// sharing at least one community.
inline Graph gen_cs(const CsParams& params, std::uint64_t seed) {
  Rng rng(seed);
  const auto member = detail::draw_memberships(params, rng);
  const std::size_t n = params.n, words = (params.c + 63) / 64;
  GraphBuilder b(n);
  for (Vertex i = 0; i < n; ++i) {
    const auto* bi = member.data() + i * words;
    for (Vertex j = i + 1; j < n; ++j) {
      const auto* bj = member.data() + j * words;
      bool shared = false;
      for (std::size_t w = 0; w < words && !shared; ++w) shared = (bi[w] & bj[w]) != 0;
      if (shared && rng.bernoulli(params.p)) b.add_edge(i, j);
    }
  }
  return b.build();
}

inline Graph gen_cs(std::size_t n, double p_c, double p, std::size_t c, std::uint64_t seed) {
  return gen_cs(CsParams{n, p_c, p, c, false}, seed);
}

inline constexpr unsigned kMaxKroneckerPower = 14;

/// Stochastic Kronecker graph: n = 2^k, pair (i < j) linked with probability
/// prod_l P[bit_l(i)][bit_l(j)], upper triangle sampled once per pair.
inline Graph gen_kg(const KroneckerInitiator& initiator, unsigned k, std::uint64_t seed) {
  if (k < 1 || k > kMaxKroneckerPower) throw ContractError("kg: requires 1 <= k <= 14");
  for (double x : initiator.p) detail::require_probability(x, "kg: initiator entry");
  const std::size_t n = std::size_t{1} << k;
  Rng rng(seed);
  GraphBuilder b(n);
  for (Vertex i = 0; i < n; ++i) {
    for (Vertex j = i + 1; j < n; ++j) {
      double prob = 1.0;
      for (unsigned l = 0; l < k && prob > 0.0; ++l) prob *= initiator.at((i >> l) & 1U, (j >> l) & 1U);
      if (rng.bernoulli(prob)) b.add_edge(i, j);
    }
  }
  return b.build();
}

/// Throws ContractError for parameters any generator would reject.
inline void validate(const ModelParams& params) {
  std::visit(
      [](const auto& p) {
        using T = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<T, CsParams>) {
          detail::require_probability(p.p_c, "cs: p_c");
          detail::require_probability(p.p, "cs: p");
          if (p.c < 1) throw ContractError("cs: requires c >= 1");
          if (p.require_membership && p.p_c == 0.0) throw ContractError("cs: require_membership needs p_c > 0");
        } else if constexpr (std::is_same_v<T, ErParams>) {
          detail::require_probability(p.p, "er: p");
        } else if constexpr (std::is_same_v<T, GrParams>) {
          if (!(p.kappa > 1.0)) throw ContractError("gr: requires kappa > 1");
          const auto side = static_cast<std::size_t>(std::llround(std::sqrt(static_cast<double>(p.n))));
          if (side * side != p.n) throw ContractError("gr: n=" + std::to_string(p.n) + " is not a perfect square");
        } else if constexpr (std::is_same_v<T, SfParams>) {
          if (p.k < 2 || p.k >= p.n) throw ContractError("sf: requires 2 <= k < n");
        } else if constexpr (std::is_same_v<T, SwParams>) {
          if (p.k < 2 || p.k % 2 != 0 || p.k >= p.n) throw ContractError("sw: requires even k with 2 <= k < n");
          detail::require_probability(p.p, "sw: p");
        } else {
          if (p.k < 1 || p.k > kMaxKroneckerPower) throw ContractError("kg: requires 1 <= k <= 14");
          for (double x : p.initiator.p) detail::require_probability(x, "kg: initiator entry");
        }
      },
      params);
}

inline Graph generate(const ModelParams& params, std::uint64_t seed) {
  return std::visit(
      [seed](const auto& p) -> Graph {
        using T = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<T, CsParams>) return gen_cs(p, seed);
        else if constexpr (std::is_same_v<T, ErParams>) return gen_er(p.n, p.p, seed);
        else if constexpr (std::is_same_v<T, GrParams>) return gen_gr(p.n, p.kappa, seed);
        else if constexpr (std::is_same_v<T, SfParams>) return gen_sf(p.n, p.k, seed);
        else if constexpr (std::is_same_v<T, SwParams>) return gen_sw(p.n, p.k, p.p, seed);
        else return gen_kg(p.initiator, p.k, seed);
      },
      params);
}

inline Graph generate(const ModelConfig& cfg) { return generate(cfg.params, cfg.seed); }

struct ConnectedSample {
  Graph graph;
  unsigned retries = 0;
};

inline constexpr unsigned kDefaultMaxRetries = 100;

/// Attempt r (0-based, at most max_retries attempts) draws with seed
/// derive_seed(cfg.seed, {r}); the first connected graph wins.
inline ConnectedSample ensure_connected(const ModelConfig& cfg, unsigned max_retries = kDefaultMaxRetries) {
  if (max_retries < 1) throw ContractError("ensure_connected: max_retries must be >= 1");
  for (unsigned r = 0; r < max_retries; ++r) {
    auto g = generate(cfg.params, derive_seed(cfg.seed, {r}));
    if (is_connected(g)) return {std::move(g), r};
  }
  throw GenerationError("no connected sample after " + std::to_string(max_retries) + " attempts for " +
                        describe(cfg));
}

// ---------------------------------------------------------------------------
// Kronecker initiators
// ---------------------------------------------------------------------------

/// JSON object: name -> [p00, p01, p10, p11].
inline std::map<std::string, KroneckerInitiator> parse_initiators(std::string_view text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("initiators: ") + e.what());
  }
  if (!doc.is_object()) throw ConfigError("initiators: expected a JSON object");
  std::map<std::string, KroneckerInitiator> out;
  for (const auto& [key, value] : doc.items()) {
    if (!value.is_array() || value.size() != 4) {
      throw ConfigError("initiators: '" + key + "' must be an array of 4 probabilities");
    }
    KroneckerInitiator init{key, {}};
    for (std::size_t i = 0; i < 4; ++i) {
      if (!value[i].is_number()) throw ConfigError("initiators: '" + key + "' has a non-numeric entry");
      init.p[i] = value[i].get<double>();
      if (!(init.p[i] >= 0.0 && init.p[i] <= 1.0)) {
        throw ConfigError("initiators: '" + key + "' entry outside [0, 1]");
      }
    }
    out.emplace(key, std::move(init));
  }
  return out;
}

inline std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline std::map<std::string, KroneckerInitiator> load_initiators(const std::filesystem::path& path) {
  return parse_initiators(read_text_file(path));
}

// ---------------------------------------------------------------------------
// Non-isomorphic graph corpus
// ---------------------------------------------------------------------------

inline constexpr std::size_t kMaxEnumerationVertices = 7;

namespace detail {

// Bit string of the upper triangle in graph6 column order (0,1),(0,2),(1,2),
// (0,3)...; the first pair is the most significant bit.
inline std::size_t pair_index(Vertex i, Vertex j) {
  if (i > j) std::swap(i, j);
  return static_cast<std::size_t>(j) * (j - 1) / 2 + i;
}

inline std::uint32_t adjacency_code(std::size_t n, std::span<const Edge> edges, std::span<const Vertex> perm) {
  const std::size_t bits = n * (n - (n > 0 ? 1 : 0)) / 2;
  std::uint32_t code = 0;
  for (const auto& e : edges) code |= std::uint32_t{1} << (bits - 1 - pair_index(perm[e.u], perm[e.v]));
  return code;
}

inline Graph graph_from_code(std::size_t n, std::uint32_t code) {
  const std::size_t bits = n * (n - (n > 0 ? 1 : 0)) / 2;
  std::vector<Edge> edges;
  for (Vertex j = 1; j < n; ++j)
    for (Vertex i = 0; i < j; ++i)
      if ((code >> (bits - 1 - pair_index(i, j))) & 1U) edges.push_back({i, j});
  std::sort(edges.begin(), edges.end());
  return Graph::from_edges(n, edges);
}

inline std::vector<std::vector<Vertex>> all_permutations(std::size_t n) {
  std::vector<Vertex> perm(n);
  std::iota(perm.begin(), perm.end(), Vertex{0});
  std::vector<std::vector<Vertex>> out;
  do {
    out.push_back(perm);
  } while (std::next_permutation(perm.begin(), perm.end()));
  return out;
}

}  // namespace detail

/// Minimum adjacency bit string over all vertex permutations (n <= 7).
inline std::uint32_t canonical_code(const Graph& g) {
  const std::size_t n = g.num_vertices();
  if (n > kMaxEnumerationVertices) throw ContractError("canonical_code: n > 7 unsupported");
  const auto edges = g.edges();
  std::uint32_t best = std::numeric_limits<std::uint32_t>::max();
  for (const auto& perm : detail::all_permutations(n)) best = std::min(best, detail::adjacency_code(n, edges, perm));
  return best;
}

/**
 * One representative per isomorphism class of simple graphs on n vertices
 * (connected or not), each in canonical labelling, ordered by canonical code.
 *
 * Classes on n vertices are grown from classes on n - 1 vertices by adding
 * vertex n - 1 with every possible neighbour subset. Deleting the last vertex
 * of any graph leaves a graph isomorphic to some smaller representative, so
 * the extension reaches every class; duplicates collapse on canonical code.
 */
inline std::vector<Graph> enumerate_nonisomorphic(std::size_t n) {
  if (n < 1 || n > kMaxEnumerationVertices) throw ContractError("enumerate: requires 1 <= n <= 7");
  std::vector<Graph> current{Graph(1)};
  for (std::size_t size = 2; size <= n; ++size) {
    const auto perms = detail::all_permutations(size);
    std::set<std::uint32_t> codes;
    for (const auto& base : current) {
      const auto base_edges = base.edges();
      for (std::uint32_t subset = 0; subset < (1U << (size - 1)); ++subset) {
        std::vector<Edge> edges = base_edges;
        for (Vertex u = 0; u + 1 < size; ++u)
          if ((subset >> u) & 1U) edges.push_back({u, static_cast<Vertex>(size - 1)});
        std::uint32_t best = std::numeric_limits<std::uint32_t>::max();
        for (const auto& perm : perms) best = std::min(best, detail::adjacency_code(size, edges, perm));
        codes.insert(best);
      }
    }
    current.clear();
    for (auto code : codes) current.push_back(detail::graph_from_code(size, code));
  }
  return current;
}

inline std::vector<Graph> enumerate_connected_nonisomorphic(std::size_t n) {
  auto all = enumerate_nonisomorphic(n);
  std::vector<Graph> out;
  for (auto& g : all)
    if (is_connected(g)) out.push_back(std::move(g));
  return out;
}

struct CorpusGraph {
  Graph graph;
  bool connected = false;
};

/// One graph6 record per line; blank lines and a ">>graph6<<" prefix are skipped.
inline std::vector<CorpusGraph> parse_graph6_corpus(std::string_view text) {
  std::vector<CorpusGraph> out;
  std::size_t line_no = 0;
  while (!text.empty()) {
    const auto eol = text.find('\n');
    std::string_view line = detail::trim(text.substr(0, eol));
    text = eol == std::string_view::npos ? std::string_view{} : text.substr(eol + 1);
    ++line_no;
    if (line.starts_with(">>graph6<<")) line.remove_prefix(10);
    if (line.empty()) continue;
    try {
      auto g = parse_graph6(line);
      const bool connected = is_connected(g);
      out.push_back({std::move(g), connected});
    } catch (const FormatError& e) {
      throw FormatError("line " + std::to_string(line_no) + ": " + e.what());
    }
  }
  return out;
}

inline std::vector<CorpusGraph> load_graph6_corpus(const std::filesystem::path& path) {
  return parse_graph6_corpus(read_text_file(path));
}

inline std::string to_graph6_corpus(std::span<const Graph> graphs) {
  std::string out;
  for (const auto& g : graphs) {
    out += to_graph6(g);
    out += '\n';
  }
  return out;
}

// ---------------------------------------------------------------------------
// Corpus output: edge-list files plus a JSON manifest
// ---------------------------------------------------------------------------

struct CorpusSample {
  ModelConfig config;
  std::uint64_t draw_seed = 0;  // seed of the accepted attempt
  unsigned retries = 0;
  std::string connectivity = "retry";
  Graph graph;
};

inline nlohmann::json config_json(const ModelConfig& cfg) {
  nlohmann::json params = nlohmann::json::object();
  for (const auto& [key, value] : param_list(cfg.params)) params[key] = value;
  if (const auto* kg = std::get_if<KgParams>(&cfg.params)) params["initiator"] = kg->initiator.name;
  if (const auto* cs = std::get_if<CsParams>(&cfg.params)) params["require_membership"] = cs->require_membership;
  return {{"model", name(model_of(cfg.params))}, {"params", params}, {"seed", cfg.seed}};
}

/// Writes sample_<i>.edges for every sample plus manifest.json.
inline void write_corpus(const std::filesystem::path& dir, std::span<const CorpusSample> samples) {
  std::filesystem::create_directories(dir);
  nlohmann::json manifest = nlohmann::json::array();
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const auto& s = samples[i];
    const auto file = "sample_" + std::to_string(i) + ".edges";
    std::ofstream(dir / file, std::ios::binary) << to_edge_list(s.graph);
    auto entry = config_json(s.config);
    entry["file"] = file;
    entry["draw_seed"] = s.draw_seed;
    entry["retries"] = s.retries;
    entry["connectivity"] = s.connectivity;
    entry["n"] = s.graph.num_vertices();
    entry["m"] = s.graph.num_edges();
    manifest.push_back(std::move(entry));
  }
  std::ofstream(dir / "manifest.json", std::ios::binary) << manifest.dump(2) << '\n';
}

}  // namespace netcent
