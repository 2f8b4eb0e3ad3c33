#include <gtest/gtest.h>

#include <boost/math/distributions/chi_squared.hpp>
#include <map>

#include "prmgen/dag.hpp"
#include "prmgen/errors.hpp"
#include "test_support.hpp"

namespace prmgen {
namespace {

// Every labelled DAG on n nodes, by filtering all subsets of ordered pairs.
std::vector<std::vector<Edge>> all_dags(std::size_t n) {
  std::vector<Edge> pairs;
  for (std::size_t u = 0; u < n; ++u) {
    for (std::size_t v = 0; v < n; ++v) {
      if (u != v) pairs.push_back({u, v});
    }
  }
  std::vector<std::vector<Edge>> out;
  for (std::size_t mask = 0; mask < (std::size_t{1} << pairs.size()); ++mask) {
    std::vector<std::vector<std::size_t>> children(n);
    std::vector<Edge> edges;
    for (std::size_t i = 0; i < pairs.size(); ++i) {
      if (mask >> i & 1) {
        children[pairs[i].from].push_back(pairs[i].to);
        edges.push_back(pairs[i]);
      }
    }
    if (testing::acyclic_by_peeling(children)) out.push_back(edges);
  }
  return out;
}

bool connected_by_union_find(std::size_t n, const std::vector<Edge>& edges) {
  std::vector<std::size_t> root(n);
  for (std::size_t i = 0; i < n; ++i) root[i] = i;
  auto find = [&](std::size_t x) {
    while (root[x] != x) x = root[x];
    return x;
  };
  std::size_t components = n;
  for (const Edge& e : edges) {
    const auto a = find(e.from), b = find(e.to);
    if (a != b) {
      root[a] = b;
      --components;
    }
  }
  return components == 1;
}

TEST(DagEnumeration, ThreeNodeCounts) {
  const auto dags = all_dags(3);
  EXPECT_EQ(dags.size(), 25u);
  const auto connected = std::count_if(dags.begin(), dags.end(),
                                       [](const auto& e) { return connected_by_union_find(3, e); });
  EXPECT_EQ(connected, 18);
}

TEST(Dag, RejectsCycles) {
  EXPECT_THROW(Dag(3, {{0, 1}, {1, 2}, {2, 0}}), CyclicGraphError);
  EXPECT_FALSE(Dag::unchecked(2, {{0, 1}, {1, 0}}).is_acyclic());
  EXPECT_TRUE(Dag(3, {{0, 1}, {1, 2}}).is_acyclic());
}

TEST(Dag, EdgesAreSortedAndQueryable) {
  const Dag g(3, {{2, 0}, {0, 1}});
  ASSERT_EQ(g.edges().size(), 2u);
  EXPECT_EQ(g.edges()[0], (Edge{0, 1}));
  EXPECT_TRUE(g.has_edge(2, 0));
  EXPECT_FALSE(g.has_edge(0, 2));
  EXPECT_EQ(g.parents(0), std::vector<std::size_t>{2});
}

TEST(GenerateRandomDag, SingleNode) {
  Rng rng(1);
  for (int i = 0; i < 20; ++i) EXPECT_EQ(generate_random_dag(1, {}, rng).edge_count(), 0u);
}

TEST(GenerateRandomDag, ZeroMaxParentsGivesEmptyGraph) {
  Rng rng(2);
  DagPolicy policy;
  policy.max_parents = 0;
  for (int i = 0; i < 50; ++i) EXPECT_EQ(generate_random_dag(3, policy, rng).edge_count(), 0u);
}

TEST(GenerateRandomDag, RespectsMaxParents) {
  Rng rng(3);
  DagPolicy policy;
  policy.max_parents = 1;
  for (int i = 0; i < 100; ++i) {
    const Dag g = generate_random_dag(6, policy, rng);
    for (std::size_t v = 0; v < 6; ++v) EXPECT_LE(g.parents(v).size(), 1u);
  }
}

TEST(GenerateRandomDag, DeterministicPerSeed) {
  Rng a(99), b(99);
  for (int i = 0; i < 10; ++i) EXPECT_EQ(generate_random_dag(7, {}, a), generate_random_dag(7, {}, b));
}

TEST(GenerateRandomDag, UniformOverThreeNodeDags) {
  const auto dags = all_dags(3);
  std::map<std::vector<Edge>, std::size_t> freq;
  for (const auto& d : dags) freq[d] = 0;
  Rng rng(2024);
  constexpr std::size_t kDraws = 100'000;
  for (std::size_t i = 0; i < kDraws; ++i) ++freq.at(generate_random_dag(3, {}, rng).edges());
  const double expected = static_cast<double>(kDraws) / dags.size();
  double chi2 = 0.0;
  for (const auto& [edges, n] : freq) chi2 += (n - expected) * (n - expected) / expected;
  const boost::math::chi_squared dist(static_cast<double>(dags.size() - 1));
  const double critical = boost::math::quantile(boost::math::complement(dist, 0.01));
  EXPECT_NEAR(critical, 42.98, 0.01);
  EXPECT_LT(chi2, critical);
}

TEST(IsWeaklyConnected, Examples) {
  EXPECT_TRUE(is_weakly_connected(Dag(1)));
  EXPECT_FALSE(is_weakly_connected(Dag(3, {{0, 1}})));
  EXPECT_TRUE(is_weakly_connected(Dag(3, {{0, 1}, {2, 1}})));
}

TEST(GenerateConnectedDag, TwoNodesBalanced) {
  Rng rng(5);
  std::size_t forward = 0;
  constexpr std::size_t kDraws = 10'000;
  for (std::size_t i = 0; i < kDraws; ++i) {
    const Dag g = generate_connected_dag(2, {}, rng);
    ASSERT_EQ(g.edge_count(), 1u);
    if (g.has_edge(0, 1)) ++forward;
  }
  EXPECT_NEAR(static_cast<double>(forward) / kDraws, 0.5, 0.02);
}

TEST(GenerateConnectedDag, SingleNodeNoRejections) {
  Rng rng(6);
  std::size_t rejections = 42;
  const Dag g = generate_connected_dag(1, {}, rng, &rejections);
  EXPECT_EQ(g.node_count(), 1u);
  EXPECT_EQ(rejections, 0u);
}

TEST(GenerateConnectedDag, BudgetExhaustion) {
  Rng rng(7);
  DagPolicy policy;
  policy.max_parents = 0;
  policy.max_rejections = 5;
  EXPECT_THROW(generate_connected_dag(3, policy, rng), RejectionBudgetExceeded);
}

TEST(GenerateConnectedDag, AlwaysConnectedAndAcyclic) {
  Rng rng(8);
  for (std::size_t n = 1; n <= 8; ++n) {
    for (int i = 0; i < 20; ++i) {
      const Dag g = generate_connected_dag(n, {}, rng);
      EXPECT_TRUE(is_weakly_connected(g));
      EXPECT_TRUE(g.is_acyclic());
    }
  }
}

TEST(TopologicalOrder, Examples) {
  EXPECT_EQ(topological_order(Dag(3, {{0, 1}, {1, 2}})), (std::vector<std::size_t>{0, 1, 2}));
  EXPECT_EQ(topological_order(Dag(3)), (std::vector<std::size_t>{0, 1, 2}));
  EXPECT_EQ(topological_order(Dag(3, {{2, 0}})), (std::vector<std::size_t>{1, 2, 0}));
}

TEST(TopologicalOrder, CycleThrows) {
  const std::vector<std::vector<std::size_t>> children{{1}, {0}};
  EXPECT_THROW(topological_order(std::span<const std::vector<std::size_t>>(children)), CyclicGraphError);
}

}  // namespace
}  // namespace prmgen
