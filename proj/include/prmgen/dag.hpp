#pragma once

#include <compare>
#include <cstddef>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "prmgen/rng.hpp"

namespace prmgen {

struct Edge {
  std::size_t from = 0;
  std::size_t to = 0;

  auto operator<=>(const Edge&) const = default;
};

/// Directed acyclic graph over nodes 0..n-1.
///
/// The checked constructor rejects self-loops, duplicate edges and cycles.
/// `Dag::unchecked` exists so validators can be handed deliberately broken
/// graphs; everything the generators return goes through the checked path.
class Dag {
 public:
  Dag() = default;
  explicit Dag(std::size_t node_count);
  Dag(std::size_t node_count, std::vector<Edge> edges);

  static Dag unchecked(std::size_t node_count, std::vector<Edge> edges);

  std::size_t node_count() const { return node_count_; }
  std::size_t edge_count() const { return edges_.size(); }
  /// Edges sorted lexicographically by (from, to).
  const std::vector<Edge>& edges() const { return edges_; }
  bool has_edge(std::size_t from, std::size_t to) const;

  const std::vector<std::size_t>& children(std::size_t node) const { return children_[node]; }
  const std::vector<std::size_t>& parents(std::size_t node) const { return parents_[node]; }

  /// False only for graphs built through `unchecked`.
  bool is_acyclic() const;

  bool operator==(const Dag& other) const {
    return node_count_ == other.node_count_ && edges_ == other.edges_;
  }

 private:
  void index_edges();

  std::size_t node_count_ = 0;
  std::vector<Edge> edges_;
  std::vector<std::vector<std::size_t>> children_;
  std::vector<std::vector<std::size_t>> parents_;
};

/// Knobs of the edge-flip Markov chain.
struct DagPolicy {
  /// Chain length; defaults to 50 * n^2 and is never run shorter than n^2.
  std::optional<std::size_t> mixing_steps;
  /// Maximum in-degree of any node, unbounded when empty.
  std::optional<std::size_t> max_parents;
  /// Rejected draws tolerated by generate_connected_dag.
  std::size_t max_rejections = 1'000'000;

  std::size_t effective_mixing_steps(std::size_t n) const;
};

/// Samples a DAG on n nodes by running a Markov chain over DAG space from the
/// empty graph. Each step picks an ordered node pair and either toggles the
/// edge between them (add/remove) or reverses it; proposals that would create
/// a cycle or exceed max_parents are rejected. The proposal is symmetric, so
/// the stationary law is uniform over the admissible DAGs.
Dag generate_random_dag(std::size_t n, const DagPolicy& policy, Rng& rng);

/// True iff the undirected version of g has a single component.
bool is_weakly_connected(const Dag& g);

/// Rejection-samples generate_random_dag until the draw is weakly connected.
/// Throws RejectionBudgetExceeded after policy.max_rejections failed draws.
/// The number of rejected draws is stored in `rejections` when given.
Dag generate_connected_dag(std::size_t n, const DagPolicy& policy, Rng& rng,
                           std::size_t* rejections = nullptr);

/// Kahn's algorithm with ties broken by ascending node index.
/// Throws CyclicGraphError on a cycle.
std::vector<std::size_t> topological_order(const Dag& g);

/// Same ordering rule over an adjacency-list graph; used for large ground
/// networks where building a Dag would be wasteful.
std::vector<std::size_t> topological_order(std::span<const std::vector<std::size_t>> children);

}  // namespace prmgen
