#pragma once

#include <vector>

#include "netcent/generators.hpp"
#include "netcent/graph.hpp"

namespace fixture {

using netcent::Edge;
using netcent::Graph;
using netcent::Vertex;

inline Graph path(std::size_t n) {
  std::vector<Edge> e;
  for (Vertex i = 0; i + 1 < n; ++i) e.push_back({i, i + 1});
  return Graph::from_edges(n, e);
}

inline Graph cycle(std::size_t n) {
  std::vector<Edge> e;
  for (Vertex i = 0; i + 1 < n; ++i) e.push_back({i, i + 1});
  e.push_back({0, static_cast<Vertex>(n - 1)});
  return Graph::from_edges(n, e);
}

inline Graph complete(std::size_t n) {
  std::vector<Edge> e;
  for (Vertex j = 1; j < n; ++j)
    for (Vertex i = 0; i < j; ++i) e.push_back({i, j});
  return Graph::from_edges(n, e);
}

// Center 0.
inline Graph star(std::size_t n) {
  std::vector<Edge> e;
  for (Vertex i = 1; i < n; ++i) e.push_back({0, i});
  return Graph::from_edges(n, e);
}

// Connected classes on 6 and 7 vertices (112 + 853).
inline const std::vector<Graph>& small_corpus() {
  static const std::vector<Graph> graphs = [] {
    auto six = netcent::enumerate_connected_nonisomorphic(6);
    const auto seven = netcent::enumerate_connected_nonisomorphic(7);
    six.insert(six.end(), seven.begin(), seven.end());
    return six;
  }();
  return graphs;
}

}  // namespace fixture
