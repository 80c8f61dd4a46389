#pragma once

#include <algorithm>
#include <charconv>
#include <cstdint>
#include <limits>
#include <numeric>
#include <optional>
#include <span>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "netcent/error.hpp"

namespace netcent {

using Vertex = std::uint32_t;

struct Edge {
  Vertex u;
  Vertex v;

  friend bool operator==(const Edge&, const Edge&) = default;
  friend auto operator<=>(const Edge&, const Edge&) = default;
};

/**
 * Immutable simple undirected unweighted graph on vertices 0..n-1.
 *
 * Adjacency lists are sorted; every edge is stored in both endpoint lists.
 * Construction rejects self-loops, duplicate edges and out-of-range
 * endpoints, so every Graph value satisfies the simple-graph invariants.
 */
class Graph {
 public:
  Graph() = default;

  explicit Graph(std::size_t n) : adj_(n) {}

  static Graph from_edges(std::size_t n, std::span<const Edge> edges) {
    Graph g(n);
    for (const auto& e : edges) {
      if (e.u >= n || e.v >= n) {
        throw ContractError("edge (" + std::to_string(e.u) + "," + std::to_string(e.v) +
                            ") out of range for n=" + std::to_string(n));
      }
      if (e.u == e.v) {
        throw ContractError("self-loop at vertex " + std::to_string(e.u));
      }
      g.adj_[e.u].push_back(e.v);
      g.adj_[e.v].push_back(e.u);
    }
    for (Vertex v = 0; v < n; ++v) {
      auto& list = g.adj_[v];
      std::sort(list.begin(), list.end());
      if (auto it = std::adjacent_find(list.begin(), list.end()); it != list.end()) {
        throw ContractError("duplicate edge (" + std::to_string(std::min<Vertex>(v, *it)) + "," +
                            std::to_string(std::max<Vertex>(v, *it)) + ")");
      }
    }
    g.m_ = edges.size();
    return g;
  }

  std::size_t num_vertices() const { return adj_.size(); }
  std::size_t num_edges() const { return m_; }

  std::span<const Vertex> neighbors(Vertex v) const { return adj_[v]; }
  std::size_t degree(Vertex v) const { return adj_[v].size(); }

  bool has_edge(Vertex u, Vertex v) const {
    const auto& list = adj_[u];
    return std::binary_search(list.begin(), list.end(), v);
  }

  // Each undirected edge once, smaller endpoint first, lexicographic order.
  std::vector<Edge> edges() const {
    std::vector<Edge> out;
    out.reserve(m_);
    for (Vertex u = 0; u < adj_.size(); ++u) {
      for (Vertex v : adj_[u]) {
        if (u < v) out.push_back({u, v});
      }
    }
    return out;
  }

  friend bool operator==(const Graph&, const Graph&) = default;

 private:
  std::vector<std::vector<Vertex>> adj_;
  std::size_t m_ = 0;
};

/// Returns the graph with vertex v renamed to perm[v].
inline Graph permute(const Graph& g, std::span<const Vertex> perm) {
  if (perm.size() != g.num_vertices()) throw ContractError("permutation size mismatch");
  std::vector<Edge> edges;
  edges.reserve(g.num_edges());
  for (const auto& e : g.edges()) {
    Vertex a = perm[e.u], b = perm[e.v];
    edges.push_back({std::min(a, b), std::max(a, b)});
  }
  return Graph::from_edges(g.num_vertices(), edges);
}

/// Mutable dense edge set for generators. O(n^2) bits of storage.
class GraphBuilder {
 public:
  explicit GraphBuilder(std::size_t n) : n_(n), bits_(n * n, false) {}

  std::size_t num_vertices() const { return n_; }
  std::size_t num_edges() const { return m_; }

  bool has_edge(Vertex u, Vertex v) const { return bits_[u * n_ + v]; }

  // Returns false (and changes nothing) for self-loops and existing edges.
  bool add_edge(Vertex u, Vertex v) {
    if (u == v || has_edge(u, v)) return false;
    bits_[u * n_ + v] = bits_[v * n_ + u] = true;
    ++m_;
    return true;
  }

  bool remove_edge(Vertex u, Vertex v) {
    if (u == v || !has_edge(u, v)) return false;
    bits_[u * n_ + v] = bits_[v * n_ + u] = false;
    --m_;
    return true;
  }

  Graph build() const {
    std::vector<Edge> edges;
    edges.reserve(m_);
    for (Vertex u = 0; u < n_; ++u) {
      for (Vertex v = u + 1; v < n_; ++v) {
        if (has_edge(u, v)) edges.push_back({u, v});
      }
    }
    return Graph::from_edges(n_, edges);
  }

 private:
  std::size_t n_;
  std::vector<bool> bits_;
  std::size_t m_ = 0;
};

// ---------------------------------------------------------------------------
// Edge-list text format
// ---------------------------------------------------------------------------

namespace detail {

inline std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

inline std::optional<std::uint64_t> parse_uint(std::string_view tok) {
  std::uint64_t value = 0;
  auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), value);
  if (ec != std::errc{} || ptr != tok.data() + tok.size()) return std::nullopt;
  return value;
}

}  // namespace detail

/**
 * Parses "u v" lines into a simple graph.
 *
 * An optional first line "# n=<count>" fixes the vertex count so isolated
 * trailing vertices survive a round trip; other lines starting with '#' are
 * comments. n_hint, when given, takes precedence over the header. Without
 * either, n = 1 + max index (0 for an empty list).
 */
inline Graph graph_from_edge_list(std::string_view text,
                                  std::optional<std::size_t> n_hint = std::nullopt) {
  std::vector<Edge> edges;
  std::optional<std::size_t> header_n;
  std::uint64_t max_index = 0;
  bool any = false;
  std::size_t line_no = 0;

  while (!text.empty()) {
    const auto eol = text.find('\n');
    std::string_view line = text.substr(0, eol);
    text = eol == std::string_view::npos ? std::string_view{} : text.substr(eol + 1);
    ++line_no;
    line = detail::trim(line);
    if (line.empty()) continue;
    if (line.front() == '#') {
      auto body = detail::trim(line.substr(1));
      if (line_no == 1 && body.starts_with("n=")) {
        auto value = detail::parse_uint(detail::trim(body.substr(2)));
        if (!value) throw FormatError("line 1: malformed vertex-count header");
        header_n = *value;
      }
      continue;
    }
    const auto sep = line.find_first_of(" \t");
    if (sep == std::string_view::npos) {
      throw FormatError("line " + std::to_string(line_no) + ": expected two vertex indices");
    }
    auto a = detail::parse_uint(line.substr(0, sep));
    auto b = detail::parse_uint(detail::trim(line.substr(sep)));
    if (!a || !b) {
      throw FormatError("line " + std::to_string(line_no) + ": malformed token in '" +
                        std::string(line) + "'");
    }
    if (*a == *b) {
      throw FormatError("line " + std::to_string(line_no) + ": self-loop at vertex " +
                        std::to_string(*a));
    }
    if (*a > std::numeric_limits<Vertex>::max() || *b > std::numeric_limits<Vertex>::max()) {
      throw FormatError("line " + std::to_string(line_no) + ": vertex index too large");
    }
    max_index = std::max({max_index, *a, *b});
    any = true;
    edges.push_back({static_cast<Vertex>(std::min(*a, *b)), static_cast<Vertex>(std::max(*a, *b))});
  }

  const std::size_t n = n_hint ? *n_hint : header_n ? *header_n : (any ? max_index + 1 : 0);
  if (any && max_index >= n) {
    throw FormatError("vertex index " + std::to_string(max_index) + " out of range for n=" +
                      std::to_string(n));
  }
  std::vector<Edge> sorted = edges;
  std::sort(sorted.begin(), sorted.end());
  if (auto it = std::adjacent_find(sorted.begin(), sorted.end()); it != sorted.end()) {
    throw FormatError("duplicate edge " + std::to_string(it->u) + " " + std::to_string(it->v));
  }
  return Graph::from_edges(n, sorted);
}

/// Canonical edge list: "# n=<count>" header, then one "u v" line per edge, u < v.
inline std::string to_edge_list(const Graph& g) {
  std::string out = "# n=" + std::to_string(g.num_vertices()) + "\n";
  for (const auto& e : g.edges()) {
    out += std::to_string(e.u);
    out += ' ';
    out += std::to_string(e.v);
    out += '\n';
  }
  return out;
}

// ---------------------------------------------------------------------------
// graph6 (short form only, n <= 62)
// ---------------------------------------------------------------------------

inline constexpr std::size_t kGraph6MaxVertices = 62;

inline Graph parse_graph6(std::string_view record) {
  record = detail::trim(record);
  if (record.empty()) throw FormatError("graph6: empty record");
  for (char ch : record) {
    const auto c = static_cast<unsigned char>(ch);
    if (c < 63 || c > 126) throw FormatError("graph6: byte " + std::to_string(c) + " out of range");
  }
  if (record.front() == 126) throw FormatError("graph6: long form (n > 62) not supported");

  const std::size_t n = static_cast<unsigned char>(record.front()) - 63;
  const std::size_t nbits = n * (n - (n > 0 ? 1 : 0)) / 2;
  const std::size_t nbytes = (nbits + 5) / 6;
  const auto payload = record.substr(1);
  if (payload.size() < nbytes) throw FormatError("graph6: truncated bit payload");
  if (payload.size() > nbytes) throw FormatError("graph6: trailing bytes after payload");

  auto bit = [&](std::size_t k) {
    const auto group = static_cast<unsigned>(static_cast<unsigned char>(payload[k / 6]) - 63);
    return (group >> (5 - k % 6)) & 1U;
  };
  for (std::size_t k = nbits; k < nbytes * 6; ++k) {
    if (bit(k)) throw FormatError("graph6: non-zero padding bits");
  }

  std::vector<Edge> edges;
  std::size_t k = 0;
  for (Vertex j = 1; j < n; ++j) {
    for (Vertex i = 0; i < j; ++i, ++k) {
      if (bit(k)) edges.push_back({i, j});
    }
  }
  std::sort(edges.begin(), edges.end());
  return Graph::from_edges(n, edges);
}

inline std::string to_graph6(const Graph& g) {
  const std::size_t n = g.num_vertices();
  if (n > kGraph6MaxVertices) throw ContractError("graph6: long form (n > 62) not supported");
  std::string out(1, static_cast<char>(63 + n));
  unsigned group = 0;
  int filled = 0;
  for (Vertex j = 1; j < n; ++j) {
    for (Vertex i = 0; i < j; ++i) {
      group = (group << 1) | (g.has_edge(i, j) ? 1U : 0U);
      if (++filled == 6) {
        out.push_back(static_cast<char>(63 + group));
        group = 0;
        filled = 0;
      }
    }
  }
  if (filled > 0) out.push_back(static_cast<char>(63 + (group << (6 - filled))));
  return out;
}

// ---------------------------------------------------------------------------
// Traversal
// ---------------------------------------------------------------------------

inline constexpr std::uint32_t kUnreachable = std::numeric_limits<std::uint32_t>::max();

/// Hop distances from source; kUnreachable for vertices in other components.
inline std::vector<std::uint32_t> bfs_distances(const Graph& g, Vertex source) {
  std::vector<std::uint32_t> dist(g.num_vertices(), kUnreachable);
  std::vector<Vertex> queue;
  queue.reserve(g.num_vertices());
  dist[source] = 0;
  queue.push_back(source);
  for (std::size_t head = 0; head < queue.size(); ++head) {
    const Vertex v = queue[head];
    for (Vertex w : g.neighbors(v)) {
      if (dist[w] == kUnreachable) {
        dist[w] = dist[v] + 1;
        queue.push_back(w);
      }
    }
  }
  return dist;
}

inline bool is_connected(const Graph& g) {
  if (g.num_vertices() == 0) return false;
  const auto dist = bfs_distances(g, 0);
  return std::none_of(dist.begin(), dist.end(), [](auto d) { return d == kUnreachable; });
}

/// All-pairs hop distances and shortest-path counts, row-major n x n.
struct GeodesicData {
  std::size_t n = 0;
  std::vector<std::uint32_t> dist;
  std::vector<double> sigma;

  std::uint32_t distance(Vertex i, Vertex j) const { return dist[i * n + j]; }
  double paths(Vertex i, Vertex j) const { return sigma[i * n + j]; }
};

inline GeodesicData bfs_all_pairs(const Graph& g) {
  const std::size_t n = g.num_vertices();
  GeodesicData out{n, std::vector<std::uint32_t>(n * n, kUnreachable), std::vector<double>(n * n, 0.0)};
  std::vector<Vertex> queue;
  queue.reserve(n);
  for (Vertex s = 0; s < n; ++s) {
    auto* dist = out.dist.data() + s * n;
    auto* sigma = out.sigma.data() + s * n;
    queue.clear();
    dist[s] = 0;
    sigma[s] = 1.0;
    queue.push_back(s);
    for (std::size_t head = 0; head < queue.size(); ++head) {
      const Vertex v = queue[head];
      for (Vertex w : g.neighbors(v)) {
        if (dist[w] == kUnreachable) {
          dist[w] = dist[v] + 1;
          queue.push_back(w);
        }
        if (dist[w] == dist[v] + 1) sigma[w] += sigma[v];
      }
    }
  }
  return out;
}

/// Largest connected component, relabeled in increasing original order.
/// Ties between equal-size components go to the one holding the smallest vertex.
inline Graph largest_component(const Graph& g) {
  const std::size_t n = g.num_vertices();
  std::vector<std::uint32_t> comp(n, kUnreachable);
  std::vector<std::size_t> sizes;
  for (Vertex s = 0; s < n; ++s) {
    if (comp[s] != kUnreachable) continue;
    const auto id = static_cast<std::uint32_t>(sizes.size());
    std::vector<Vertex> stack{s};
    comp[s] = id;
    std::size_t size = 0;
    while (!stack.empty()) {
      const Vertex v = stack.back();
      stack.pop_back();
      ++size;
      for (Vertex w : g.neighbors(v)) {
        if (comp[w] == kUnreachable) {
          comp[w] = id;
          stack.push_back(w);
        }
      }
    }
    sizes.push_back(size);
  }
  if (sizes.empty()) return g;
  const auto best = static_cast<std::uint32_t>(std::max_element(sizes.begin(), sizes.end()) - sizes.begin());
  std::vector<Vertex> relabel(n, 0);
  Vertex next = 0;
  for (Vertex v = 0; v < n; ++v) {
    if (comp[v] == best) relabel[v] = next++;
  }
  std::vector<Edge> edges;
  for (const auto& e : g.edges()) {
    if (comp[e.u] == best) edges.push_back({relabel[e.u], relabel[e.v]});
  }
  return Graph::from_edges(next, edges);
}

}  // namespace netcent
