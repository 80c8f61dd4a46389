#include <gtest/gtest.h>

#include <numeric>
#include <random>

#include "fixtures.hpp"
#include "netcent/centrality.hpp"
#include "oracles.hpp"

using namespace netcent;

namespace {

void expect_values(const CentralityVector& cv, const std::vector<double>& want, double tol) {
  ASSERT_EQ(cv.values.size(), want.size());
  for (std::size_t i = 0; i < want.size(); ++i) EXPECT_NEAR(cv.values[i], want[i], tol) << "vertex " << i;
}

bool constant(const std::vector<double>& v, double tol) {
  const auto [lo, hi] = std::minmax_element(v.begin(), v.end());
  return *hi - *lo <= tol;
}

const Graph kDisconnected = parse_graph6("A?");

}  // namespace

TEST(Degree, Examples) {
  expect_values(degree(fixture::complete(3)), {2, 2, 2}, 0);
  expect_values(degree(fixture::path(3)), {1, 2, 1}, 0);
  expect_values(degree(fixture::star(5)), {4, 1, 1, 1, 1}, 0);
}

TEST(Closeness, Examples) {
  expect_values(closeness(fixture::complete(3)), {0.5, 0.5, 0.5}, 1e-15);
  expect_values(closeness(fixture::path(3)), {1.0 / 3, 0.5, 1.0 / 3}, 1e-15);
  expect_values(closeness(fixture::path(4)), {1.0 / 6, 0.25, 0.25, 1.0 / 6}, 1e-15);
  EXPECT_THROW(closeness(kDisconnected), DisconnectedGraphError);
}

TEST(Eccentricity, Examples) {
  expect_values(eccentricity(fixture::complete(3)), {1, 1, 1}, 0);
  expect_values(eccentricity(fixture::path(3)), {0.5, 1, 0.5}, 0);
  expect_values(eccentricity(fixture::cycle(5)), std::vector<double>(5, 0.5), 0);
  EXPECT_THROW(eccentricity(kDisconnected), DisconnectedGraphError);
  EXPECT_THROW(eccentricity(Graph(1)), ContractError);
}

TEST(Betweenness, Examples) {
  expect_values(betweenness(fixture::complete(6)), std::vector<double>(6, 0.0), 0);
  expect_values(betweenness(fixture::path(3)), {0, 1, 0}, 1e-15);
  expect_values(betweenness(fixture::star(4)), {3, 0, 0, 0}, 1e-15);
  EXPECT_THROW(betweenness(kDisconnected), DisconnectedGraphError);
}

TEST(Betweenness, MatchesGeodesicEnumerationOnRandomGraphs) {
  std::mt19937_64 rng(21);
  for (int trial = 0; trial < 40; ++trial) {
    const auto g = oracle::random_connected_graph(4 + trial % 14, 0.2, rng);
    EXPECT_LE(oracle::max_abs_diff(betweenness(g).values, oracle::betweenness(g)), 1e-9);
  }
}

TEST(Eigenvector, CompleteGraph) {
  const auto state = eigenvector_iteration(fixture::complete(5));
  for (double x : state.iterate) EXPECT_NEAR(x, 0.2, 1e-15);
  expect_values(eigenvector(fixture::complete(5)), std::vector<double>(5, 1.0), 1e-15);
}

TEST(Eigenvector, StarOrdering) {
  const auto e = eigenvector(fixture::star(4)).values;
  EXPECT_GT(e[0], e[1]);
  EXPECT_DOUBLE_EQ(e[1], e[2]);
  EXPECT_DOUBLE_EQ(e[2], e[3]);
}

TEST(Eigenvector, IterateMatchesDenseEigenvector) {
  const auto g = fixture::path(3);
  auto a = adjacency_matrix(g);
  for (std::size_t i = 0; i < 3; ++i) a(i, i) = 1.0;
  const auto eig = linalg::sym_eigen(a);
  std::vector<double> dom(3);
  double total = 0;
  for (std::size_t i = 0; i < 3; ++i) total += (dom[i] = std::abs(eig.vectors(i, 2)));
  for (auto& x : dom) x /= total;
  const auto state = eigenvector_iteration(g);
  EXPECT_LE(oracle::max_abs_diff(state.iterate, dom), 1e-8);
  EXPECT_NEAR(std::accumulate(state.iterate.begin(), state.iterate.end(), 0.0), 1.0, 1e-14);
  // dominant vector of A + I on P3 is (1, sqrt2, 1)
  EXPECT_NEAR(state.iterate[1] / state.iterate[0], std::sqrt(2.0), 1e-9);
}

TEST(Eigenvector, BipartiteConvergesAndCapErrors) {
  EXPECT_NO_THROW(eigenvector_iteration(fixture::cycle(6)));
  EXPECT_THROW(eigenvector_iteration(fixture::path(7), {1e-12, 3}), ConvergenceError);
  EXPECT_THROW(eigenvector(kDisconnected), DisconnectedGraphError);
}

TEST(Information, Examples) {
  const auto k3 = information(fixture::complete(3)).values;
  EXPECT_TRUE(constant(k3, 1e-12));
  expect_values(information(fixture::path(3)), {1, 1.5, 1}, 1e-9);
  EXPECT_TRUE(constant(information(fixture::cycle(4)).values, 1e-12));
  EXPECT_THROW(information(kDisconnected), DisconnectedGraphError);
  EXPECT_THROW(information(Graph(1)), ContractError);
}

TEST(Information, P3Intermediate) {
  const auto mid = information_intermediate(fixture::path(3));
  EXPECT_NEAR(mid.b(0, 0), 2.0 / 3, 1e-12);
  EXPECT_NEAR(mid.b(1, 1), 1.0 / 3, 1e-12);
  EXPECT_NEAR(mid.trace, 5.0 / 3, 1e-12);
  EXPECT_NEAR(mid.row_sum, 1.0 / 3, 1e-12);
}

TEST(Information, MatchesEffectiveResistance) {
  std::mt19937_64 rng(4);
  for (int trial = 0; trial < 40; ++trial) {
    const auto g = oracle::random_connected_graph(2 + trial % 25, 0.2, rng);
    const auto mid = information_intermediate(g);
    EXPECT_LE(mid.max_row_sum_deviation, 1e-8);
    EXPECT_LE(oracle::max_abs_diff(information(g).values, oracle::information_by_resistance(g)), 1e-9);
  }
}

TEST(Subgraph, Examples) {
  expect_values(subgraph(Graph(1)), {1.0}, 1e-15);
  expect_values(subgraph(fixture::complete(2)), {std::cosh(1.0), std::cosh(1.0)}, 1e-12);
  const auto p3 = subgraph(fixture::path(3)).values;
  EXPECT_GT(p3[1], p3[0]);
  EXPECT_NEAR(p3[0], p3[2], 1e-12);
  expect_values(subgraph(fixture::path(3)), oracle::subgraph_series(fixture::path(3), 20), 1e-12);
}

TEST(Subgraph, SeriesOracleTraceAndLowerBound) {
  for (const auto& g : fixture::small_corpus()) {
    const auto s = subgraph(g).values;
    ASSERT_LE(oracle::max_abs_diff(s, oracle::subgraph_series(g, 60)), 1e-9);
    for (double x : s) ASSERT_GE(x, 1.0);
    const auto eig = linalg::sym_eigen(adjacency_matrix(g));
    double trace = 0;
    for (double l : eig.values) trace += std::exp(l);
    ASSERT_NEAR(std::accumulate(s.begin(), s.end(), 0.0), trace, 1e-8);
  }
}

TEST(WalkBetweenness, Examples) {
  expect_values(walk_betweenness(fixture::path(3)), {2, 3, 2}, 1e-12);
  expect_values(walk_betweenness(fixture::complete(3)), std::vector<double>(3, 7.0 / 3), 1e-12);
  EXPECT_THROW(walk_betweenness(kDisconnected), DisconnectedGraphError);
  EXPECT_THROW(walk_betweenness(Graph(1)), ContractError);
  expect_values(walk_betweenness(fixture::complete(2)), {1, 1}, 1e-15);
}

TEST(WalkBetweenness, FlowMatrixPaddingIsZero) {
  std::mt19937_64 rng(8);
  const auto g = oracle::random_connected_graph(9, 0.3, rng);
  for (Vertex grounded : {0u, 4u, 8u}) {
    const auto f = flow_matrix(g, grounded);
    for (std::size_t i = 0; i < 9; ++i) {
      EXPECT_EQ(f.t(grounded, i), 0.0);
      EXPECT_EQ(f.t(i, grounded), 0.0);
    }
  }
}

TEST(WalkBetweenness, MatchesFormulaAndPerPairCurrents) {
  std::mt19937_64 rng(13);
  for (int trial = 0; trial < 30; ++trial) {
    const auto g = oracle::random_connected_graph(2 + trial % 16, 0.25, rng);
    const auto fast = walk_betweenness(g).values;
    EXPECT_LE(oracle::max_abs_diff(fast, oracle::walk_betweenness_formula(g)), 1e-9);
    EXPECT_LE(oracle::max_abs_diff(fast, oracle::current_flow_betweenness(g)), 1e-9);
  }
}

TEST(WalkBetweenness, TreeIdentityOnRandomTrees) {
  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 30; ++trial) {
    const std::size_t n = 2 + trial * 2;
    const auto t = oracle::random_tree(n, rng);
    const auto w = walk_betweenness(t).values;
    const auto b = betweenness(t).values;
    for (std::size_t k = 0; k < n; ++k) ASSERT_NEAR(w[k] - b[k], static_cast<double>(n - 1), 1e-6);
  }
}

TEST(AllMeasures, NonNegativeFiniteAndVertexTransitive) {
  std::vector<Graph> transitive;
  for (std::size_t n = 3; n <= 12; ++n) transitive.push_back(fixture::cycle(n));
  for (std::size_t n = 2; n <= 12; ++n) transitive.push_back(fixture::complete(n));
  for (const auto& g : transitive) {
    for (auto m : kAllMeasures) {
      const auto v = compute(m, g).values;
      EXPECT_TRUE(constant(v, 1e-9)) << name(m) << " n=" << g.num_vertices();
      for (double x : v) EXPECT_TRUE(std::isfinite(x) && x >= 0.0);
    }
  }
}

TEST(AllMeasures, PermutationEquivariance) {
  std::mt19937_64 rng(29);
  for (int trial = 0; trial < 15; ++trial) {
    const std::size_t n = 3 + trial * 3;
    const auto g = oracle::random_connected_graph(n, 0.15, rng);
    std::vector<Vertex> perm(n);
    std::iota(perm.begin(), perm.end(), 0);
    std::shuffle(perm.begin(), perm.end(), rng);
    const auto h = permute(g, perm);
    for (auto m : kAllMeasures) {
      const auto a = compute(m, g).values;
      const auto b = compute(m, h).values;
      for (std::size_t v = 0; v < n; ++v) ASSERT_NEAR(a[v], b[perm[v]], 1e-9) << name(m);
    }
  }
}

TEST(Measures, NamesAndLabels) {
  for (auto m : kAllMeasures) {
    EXPECT_EQ(parse_measure(name(m)), m);
    EXPECT_EQ(parse_measure(label(m)), m);
  }
  EXPECT_FALSE(parse_measure("pagerank"));
}

TEST(CentralityCsv, HeaderAndSixDecimals) {
  const auto g = fixture::path(3);
  std::vector<CentralityVector> all;
  for (auto m : kAllMeasures) all.push_back(compute(m, g));
  const auto csv = to_centrality_csv(3, all);
  EXPECT_EQ(csv.substr(0, csv.find('\n')),
            "vertex,betweenness,closeness,degree,eccentricity,eigenvector,information,subgraph,walk_betweenness");
  EXPECT_NE(csv.find("\n1,1.000000,0.500000,2.000000,1.000000,1.000000,1.500000,"), std::string::npos);
  const auto partial = to_centrality_csv(3, {degree(g)});
  EXPECT_NE(partial.find("\n0,,,1.000000,,,,,\n"), std::string::npos);
  EXPECT_THROW(to_centrality_csv(4, {degree(g)}), ContractError);
}
