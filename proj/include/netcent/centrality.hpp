#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "netcent/error.hpp"
#include "netcent/format.hpp"
#include "netcent/graph.hpp"
#include "netcent/linalg.hpp"

namespace netcent {

enum class Measure : std::uint8_t {
  betweenness,
  closeness,
  degree,
  eccentricity,
  eigenvector,
  information,
  subgraph,
  walk_betweenness,
};

inline constexpr std::array<Measure, 8> kAllMeasures = {
    Measure::betweenness, Measure::closeness,   Measure::degree,   Measure::eccentricity,
    Measure::eigenvector, Measure::information, Measure::subgraph, Measure::walk_betweenness,
};

inline constexpr std::string_view name(Measure m) {
  switch (m) {
    case Measure::betweenness: return "betweenness";
    case Measure::closeness: return "closeness";
    case Measure::degree: return "degree";
    case Measure::eccentricity: return "eccentricity";
    case Measure::eigenvector: return "eigenvector";
    case Measure::information: return "information";
    case Measure::subgraph: return "subgraph";
    case Measure::walk_betweenness: return "walk_betweenness";
  }
  return "";
}

// Short table label, e.g. "C_b".
inline constexpr std::string_view label(Measure m) {
  switch (m) {
    case Measure::betweenness: return "C_b";
    case Measure::closeness: return "C_c";
    case Measure::degree: return "C_d";
    case Measure::eccentricity: return "C_x";
    case Measure::eigenvector: return "C_e";
    case Measure::information: return "C_i";
    case Measure::subgraph: return "C_s";
    case Measure::walk_betweenness: return "C_w";
  }
  return "";
}

inline std::optional<Measure> parse_measure(std::string_view s) {
  for (auto m : kAllMeasures) {
    if (s == name(m) || s == label(m)) return m;
  }
  return std::nullopt;
}

struct CentralityVector {
  Measure measure;
  std::vector<double> values;
};

namespace detail {

inline void require_connected(const Graph& g, std::string_view what) {
  if (!is_connected(g)) throw DisconnectedGraphError(std::string(what) + ": graph is not connected");
}

}  // namespace detail

inline linalg::DenseMatrix adjacency_matrix(const Graph& g) {
  const std::size_t n = g.num_vertices();
  linalg::DenseMatrix a(n, n);
  for (Vertex v = 0; v < n; ++v)
    for (Vertex w : g.neighbors(v)) a(v, w) = 1.0;
  return a;
}

// ---------------------------------------------------------------------------
// Distance-based measures
// ---------------------------------------------------------------------------

inline CentralityVector degree(const Graph& g) {
  CentralityVector out{Measure::degree, std::vector<double>(g.num_vertices())};
  for (Vertex v = 0; v < g.num_vertices(); ++v) out.values[v] = static_cast<double>(g.degree(v));
  return out;
}

/// 1 / sum of hop distances to every other vertex.
inline CentralityVector closeness(const Graph& g) {
  detail::require_connected(g, "closeness");
  const std::size_t n = g.num_vertices();
  CentralityVector out{Measure::closeness, std::vector<double>(n)};
  for (Vertex v = 0; v < n; ++v) {
    const auto dist = bfs_distances(g, v);
    std::uint64_t total = 0;
    for (auto d : dist) total += d;
    // K1 has an empty distance sum; its only vertex gets 0 rather than 1/0.
    out.values[v] = total == 0 ? 0.0 : 1.0 / static_cast<double>(total);
  }
  return out;
}

/// 1 / largest hop distance to any other vertex.
inline CentralityVector eccentricity(const Graph& g) {
  if (g.num_vertices() < 2) throw ContractError("eccentricity: requires at least two vertices");
  detail::require_connected(g, "eccentricity");
  const std::size_t n = g.num_vertices();
  CentralityVector out{Measure::eccentricity, std::vector<double>(n)};
  for (Vertex v = 0; v < n; ++v) {
    const auto dist = bfs_distances(g, v);
    out.values[v] = 1.0 / static_cast<double>(*std::max_element(dist.begin(), dist.end()));
  }
  return out;
}

/**
 * Shortest-path betweenness over unordered pairs {i, j}, counting v only as
 * an interior vertex.
 *
 * Brandes dependency accumulation: one BFS per source counts geodesics, then
 * vertices are popped in order of non-increasing distance and each pushes
 * sigma[v]/sigma[w] * (1 + delta[w]) back to its predecessors v. Summing over
 * all sources visits every unordered pair twice, hence the final halving.
 */
inline CentralityVector betweenness(const Graph& g) {
  detail::require_connected(g, "betweenness");
  const std::size_t n = g.num_vertices();
  std::vector<double> score(n, 0.0);
  std::vector<std::uint32_t> dist(n);
  std::vector<double> sigma(n), delta(n);
  std::vector<Vertex> order;
  order.reserve(n);

  for (Vertex s = 0; s < n; ++s) {
    std::fill(dist.begin(), dist.end(), kUnreachable);
    std::fill(sigma.begin(), sigma.end(), 0.0);
    std::fill(delta.begin(), delta.end(), 0.0);
    order.clear();
    dist[s] = 0;
    sigma[s] = 1.0;
    order.push_back(s);
    for (std::size_t head = 0; head < order.size(); ++head) {
      const Vertex v = order[head];
      for (Vertex w : g.neighbors(v)) {
        if (dist[w] == kUnreachable) {
          dist[w] = dist[v] + 1;
          order.push_back(w);
        }
        if (dist[w] == dist[v] + 1) sigma[w] += sigma[v];
      }
    }
    for (std::size_t idx = order.size(); idx-- > 1;) {
      const Vertex w = order[idx];
      const double coeff = (1.0 + delta[w]) / sigma[w];
      for (Vertex v : g.neighbors(w)) {
        if (dist[v] + 1 == dist[w]) delta[v] += sigma[v] * coeff;
      }
      score[w] += delta[w];
    }
  }
  for (auto& x : score) x *= 0.5;
  return {Measure::betweenness, std::move(score)};
}

// ---------------------------------------------------------------------------
// Spectral measures
// ---------------------------------------------------------------------------

struct PowerIterationOptions {
  double tolerance = 1e-12;
  std::uint64_t max_iterations = 1'000'000;
};

struct PowerIterationState {
  std::vector<double> iterate;
  std::uint64_t iterations = 0;
  double last_delta = 0.0;
};

/**
 * Power iteration on (A + I) from the all-ones vector, renormalised to unit
 * sum after every step. The unit diagonal shifts the spectrum so the iteration
 * also converges on bipartite graphs.
 */
inline PowerIterationState eigenvector_iteration(const Graph& g, const PowerIterationOptions& opts = {}) {
  detail::require_connected(g, "eigenvector");
  const std::size_t n = g.num_vertices();
  PowerIterationState state{std::vector<double>(n, 1.0 / static_cast<double>(n)), 0, 0.0};
  std::vector<double> next(n);
  while (state.iterations < opts.max_iterations) {
    double total = 0.0;
    for (Vertex v = 0; v < n; ++v) {
      double acc = state.iterate[v];
      for (Vertex w : g.neighbors(v)) acc += state.iterate[w];
      next[v] = acc;
      total += acc;
    }
    double change = 0.0;
    for (Vertex v = 0; v < n; ++v) {
      next[v] /= total;
      change = std::max(change, std::abs(next[v] - state.iterate[v]));
    }
    state.iterate.swap(next);
    ++state.iterations;
    state.last_delta = change;
    if (change < opts.tolerance) return state;
  }
  throw ConvergenceError("eigenvector: power iteration did not converge after " +
                         std::to_string(opts.max_iterations) + " iterations");
}

/**
 * Converged power iterate rescaled so the largest score is 1.
 *
 * Unit-sum scores shrink like 1/n, and at n = 500 six decimals no longer
 * separate most vertices; the max-scaled vector keeps full resolution and
 * ranks identically.
 */
inline CentralityVector eigenvector(const Graph& g, const PowerIterationOptions& opts = {}) {
  auto values = eigenvector_iteration(g, opts).iterate;
  const double top = *std::max_element(values.begin(), values.end());
  for (auto& x : values) x /= top;
  return {Measure::eigenvector, std::move(values)};
}

/// (e^A)_vv: closed walks at v weighted by 1/length!.
inline CentralityVector subgraph(const Graph& g) {
  const std::size_t n = g.num_vertices();
  const auto eig = linalg::sym_eigen(adjacency_matrix(g));
  std::vector<double> weight(n);
  for (std::size_t j = 0; j < n; ++j) weight[j] = std::exp(eig.values[j]);
  CentralityVector out{Measure::subgraph, std::vector<double>(n, 0.0)};
  for (std::size_t k = 0; k < n; ++k) {
    const auto row = eig.vectors.row(k);
    double acc = 0.0;
    for (std::size_t j = 0; j < n; ++j) acc += row[j] * row[j] * weight[j];
    out.values[k] = acc;
  }
  return out;
}

// ---------------------------------------------------------------------------
// Resistance-based measures
// ---------------------------------------------------------------------------

struct InformationIntermediate {
  linalg::DenseMatrix b;  // (D - A + U)^{-1}
  double trace = 0.0;
  double row_sum = 0.0;
  double max_row_sum_deviation = 0.0;
};

inline constexpr double kRowSumTolerance = 1e-8;

inline InformationIntermediate information_intermediate(const Graph& g) {
  detail::require_connected(g, "information");
  const std::size_t n = g.num_vertices();
  if (n < 2) throw ContractError("information: requires at least two vertices");
  linalg::DenseMatrix m(n, n, 1.0);
  for (Vertex v = 0; v < n; ++v) {
    m(v, v) += static_cast<double>(g.degree(v));
    for (Vertex w : g.neighbors(v)) m(v, w) -= 1.0;
  }
  InformationIntermediate out;
  try {
    out.b = linalg::inverse(m);
  } catch (const SingularMatrixError& e) {
    throw Error(std::string("information: D - A + U unexpectedly singular: ") + e.what());
  }
  std::vector<double> sums(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    out.trace += out.b(i, i);
    for (double x : out.b.row(i)) sums[i] += x;
  }
  out.row_sum = sums[0];
  for (double s : sums) out.max_row_sum_deviation = std::max(out.max_row_sum_deviation, std::abs(s - out.row_sum));
  return out;
}

/// 1 / (b_kk + (T - 2R)/n) with B = (D - A + U)^{-1}, T = trace(B), R a row sum of B.
inline CentralityVector information(const Graph& g) {
  const auto mid = information_intermediate(g);
  if (mid.max_row_sum_deviation > kRowSumTolerance) {
    throw Error("information: row sums of B differ by " + std::to_string(mid.max_row_sum_deviation));
  }
  const std::size_t n = g.num_vertices();
  const double offset = (mid.trace - 2.0 * mid.row_sum) / static_cast<double>(n);
  CentralityVector out{Measure::information, std::vector<double>(n)};
  for (std::size_t k = 0; k < n; ++k) out.values[k] = 1.0 / (mid.b(k, k) + offset);
  return out;
}

/// Inverse of the Laplacian with row/column `grounded` removed, zero-padded back to n x n.
struct FlowMatrix {
  linalg::DenseMatrix t;
  Vertex grounded = 0;
};

inline FlowMatrix flow_matrix(const Graph& g, Vertex grounded = 0) {
  detail::require_connected(g, "walk_betweenness");
  const std::size_t n = g.num_vertices();
  if (n < 2) throw ContractError("walk_betweenness: requires at least two vertices");
  auto reduced_index = [&](Vertex v) { return v < grounded ? v : v - 1; };
  linalg::DenseMatrix lap(n - 1, n - 1);
  for (Vertex v = 0; v < n; ++v) {
    if (v == grounded) continue;
    lap(reduced_index(v), reduced_index(v)) = static_cast<double>(g.degree(v));
    for (Vertex w : g.neighbors(v)) {
      if (w != grounded) lap(reduced_index(v), reduced_index(w)) = -1.0;
    }
  }
  const auto inv = linalg::inverse(lap);
  FlowMatrix out{linalg::DenseMatrix(n, n), grounded};
  for (Vertex i = 0; i < n; ++i) {
    if (i == grounded) continue;
    for (Vertex j = 0; j < n; ++j) {
      if (j == grounded) continue;
      out.t(i, j) = inv(reduced_index(i), reduced_index(j));
    }
  }
  return out;
}

/**
 * Random-walk (current-flow) betweenness, unnormalised.
 *
 * For a unit current from s to t the potentials are column s minus column t
 * of the flow matrix, and the current through v is half the sum of
 * |V_v - V_u| over its neighbours u. Endpoints count 1 for their own pairs.
 *
 * Rather than visiting all n^2/2 pairs per vertex, the sum is regrouped by
 * edge: for edge (v, u) let q_s = T_vs - T_us; the edge carries |q_s - q_t|
 * for pair (s, t), and sum_{s<t} |q_s - q_t| follows from one sort of q.
 * Pairs in which v is itself an endpoint are subtracted back out. Cost is
 * O(m n log n) after the O(n^3) inversion.
 */
inline CentralityVector walk_betweenness(const Graph& g) {
  const std::size_t n = g.num_vertices();
  const auto flow = flow_matrix(g);
  const auto& t = flow.t;

  std::vector<double> value(n, static_cast<double>(n - 1));
  std::vector<double> q(n), sorted(n);
  for (Vertex v = 0; v < n; ++v) {
    const auto tv = t.row(v);
    for (Vertex u : g.neighbors(v)) {
      if (u < v) continue;
      const auto tu = t.row(u);
      for (std::size_t s = 0; s < n; ++s) q[s] = tv[s] - tu[s];
      sorted = q;
      std::sort(sorted.begin(), sorted.end());
      double all_pairs = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        all_pairs += (2.0 * static_cast<double>(i) - static_cast<double>(n - 1)) * sorted[i];
      }
      double own_v = 0.0, own_u = 0.0;
      for (std::size_t s = 0; s < n; ++s) {
        own_v += std::abs(q[v] - q[s]);
        own_u += std::abs(q[u] - q[s]);
      }
      value[v] += 0.5 * (all_pairs - own_v);
      value[u] += 0.5 * (all_pairs - own_u);
    }
  }
  return {Measure::walk_betweenness, std::move(value)};
}

// ---------------------------------------------------------------------------

/// Fixed header, one row per vertex, six decimals; absent measures leave empty cells.
inline std::string to_centrality_csv(std::size_t n, const std::vector<CentralityVector>& vectors) {
  std::array<const CentralityVector*, kAllMeasures.size()> by_measure{};
  for (const auto& cv : vectors) {
    if (cv.values.size() != n) throw ContractError("centrality csv: vector length mismatch");
    by_measure[static_cast<std::size_t>(cv.measure)] = &cv;
  }
  std::string out = "vertex";
  for (auto m : kAllMeasures) {
    out += ',';
    out += name(m);
  }
  out += '\n';
  for (std::size_t v = 0; v < n; ++v) {
    out += std::to_string(v);
    for (const auto* cv : by_measure) {
      out += ',';
      if (cv) out += fixed_decimal(cv->values[v], 6);
    }
    out += '\n';
  }
  return out;
}

inline CentralityVector compute(Measure m, const Graph& g) {
  switch (m) {
    case Measure::betweenness: return betweenness(g);
    case Measure::closeness: return closeness(g);
    case Measure::degree: return degree(g);
    case Measure::eccentricity: return eccentricity(g);
    case Measure::eigenvector: return eigenvector(g);
    case Measure::information: return information(g);
    case Measure::subgraph: return subgraph(g);
    case Measure::walk_betweenness: return walk_betweenness(g);
  }
  throw ContractError("unknown measure");
}

}  // namespace netcent
