#include "prmgen/dag.hpp"

#include <algorithm>
#include <functional>
#include <queue>
#include <stdexcept>
#include <string>

#include "prmgen/errors.hpp"

namespace prmgen {

Dag::Dag(std::size_t node_count) : node_count_(node_count) { index_edges(); }

Dag::Dag(std::size_t node_count, std::vector<Edge> edges)
    : node_count_(node_count), edges_(std::move(edges)) {
  std::sort(edges_.begin(), edges_.end());
  for (std::size_t i = 0; i < edges_.size(); ++i) {
    const Edge& e = edges_[i];
    if (e.from >= node_count_ || e.to >= node_count_) {
      throw std::invalid_argument("Dag: edge endpoint out of range");
    }
    if (e.from == e.to) throw std::invalid_argument("Dag: self-loop");
    if (i > 0 && edges_[i - 1] == e) throw std::invalid_argument("Dag: duplicate edge");
  }
  index_edges();
  if (!is_acyclic()) throw CyclicGraphError("Dag: edge set contains a directed cycle");
}

Dag Dag::unchecked(std::size_t node_count, std::vector<Edge> edges) {
  Dag g;
  g.node_count_ = node_count;
  g.edges_ = std::move(edges);
  std::sort(g.edges_.begin(), g.edges_.end());
  g.edges_.erase(std::remove_if(g.edges_.begin(), g.edges_.end(),
                                [&](const Edge& e) {
                                  return e.from >= node_count || e.to >= node_count;
                                }),
                 g.edges_.end());
  g.index_edges();
  return g;
}

void Dag::index_edges() {
  children_.assign(node_count_, {});
  parents_.assign(node_count_, {});
  for (const Edge& e : edges_) {
    children_[e.from].push_back(e.to);
    parents_[e.to].push_back(e.from);
  }
  for (auto& p : parents_) std::sort(p.begin(), p.end());
}

bool Dag::has_edge(std::size_t from, std::size_t to) const {
  return std::binary_search(edges_.begin(), edges_.end(), Edge{from, to});
}

bool Dag::is_acyclic() const {
  try {
    (void)topological_order(children_);
    return true;
  } catch (const CyclicGraphError&) {
    return false;
  }
}

std::size_t DagPolicy::effective_mixing_steps(std::size_t n) const {
  const std::size_t floor = n * n;
  return std::max(mixing_steps.value_or(50 * n * n), floor);
}

namespace {

// Dense adjacency used while the chain runs; n is small (classes or the
// attributes of one class).
class ChainState {
 public:
  explicit ChainState(std::size_t n) : n_(n), adj_(n * n, 0), indegree_(n, 0), seen_(n) {}

  bool edge(std::size_t u, std::size_t v) const { return adj_[u * n_ + v] != 0; }
  std::size_t indegree(std::size_t v) const { return indegree_[v]; }

  void add(std::size_t u, std::size_t v) {
    adj_[u * n_ + v] = 1;
    ++indegree_[v];
  }
  void remove(std::size_t u, std::size_t v) {
    adj_[u * n_ + v] = 0;
    --indegree_[v];
  }

  bool reachable(std::size_t from, std::size_t to) {
    std::fill(seen_.begin(), seen_.end(), 0);
    stack_.clear();
    stack_.push_back(from);
    seen_[from] = 1;
    while (!stack_.empty()) {
      const std::size_t x = stack_.back();
      stack_.pop_back();
      if (x == to) return true;
      for (std::size_t y = 0; y < n_; ++y) {
        if (edge(x, y) && !seen_[y]) {
          seen_[y] = 1;
          stack_.push_back(y);
        }
      }
    }
    return false;
  }

  Dag to_dag() const {
    std::vector<Edge> edges;
    for (std::size_t u = 0; u < n_; ++u) {
      for (std::size_t v = 0; v < n_; ++v) {
        if (edge(u, v)) edges.push_back({u, v});
      }
    }
    return Dag(n_, std::move(edges));
  }

 private:
  std::size_t n_;
  std::vector<char> adj_;
  std::vector<std::size_t> indegree_;
  std::vector<char> seen_;
  std::vector<std::size_t> stack_;
};

}  // namespace

Dag generate_random_dag(std::size_t n, const DagPolicy& policy, Rng& rng) {
  if (n == 0) throw std::invalid_argument("generate_random_dag: n must be positive");
  ChainState state(n);
  if (n == 1) return state.to_dag();

  const std::size_t limit = policy.max_parents.value_or(n);
  const std::size_t steps = policy.effective_mixing_steps(n);
  for (std::size_t step = 0; step < steps; ++step) {
    const std::size_t u = rng.index(n);
    std::size_t v = rng.index(n - 1);
    if (v >= u) ++v;
    const bool reverse = rng.index(2) == 1;

    if (!reverse) {
      if (state.edge(u, v)) {
        state.remove(u, v);
      } else if (!state.edge(v, u) && state.indegree(v) < limit && !state.reachable(v, u)) {
        state.add(u, v);
      }
    } else if (state.edge(u, v)) {
      state.remove(u, v);
      if (state.indegree(u) < limit && !state.reachable(u, v)) {
        state.add(v, u);
      } else {
        state.add(u, v);
      }
    }
  }
  return state.to_dag();
}

bool is_weakly_connected(const Dag& g) {
  const std::size_t n = g.node_count();
  if (n <= 1) return true;
  std::vector<char> seen(n, 0);
  std::vector<std::size_t> stack{0};
  seen[0] = 1;
  std::size_t visited = 1;
  while (!stack.empty()) {
    const std::size_t x = stack.back();
    stack.pop_back();
    auto visit = [&](std::size_t y) {
      if (!seen[y]) {
        seen[y] = 1;
        ++visited;
        stack.push_back(y);
      }
    };
    for (std::size_t y : g.children(x)) visit(y);
    for (std::size_t y : g.parents(x)) visit(y);
  }
  return visited == n;
}

Dag generate_connected_dag(std::size_t n, const DagPolicy& policy, Rng& rng,
                           std::size_t* rejections) {
  if (n == 0) throw std::invalid_argument("generate_connected_dag: n must be positive");
  std::size_t rejected = 0;
  for (;;) {
    Dag g = generate_random_dag(n, policy, rng);
    if (is_weakly_connected(g)) {
      if (rejections) *rejections = rejected;
      return g;
    }
    if (++rejected > policy.max_rejections) {
      throw RejectionBudgetExceeded("generate_connected_dag: no connected DAG on " +
                                    std::to_string(n) + " nodes after " +
                                    std::to_string(policy.max_rejections) + " rejections");
    }
  }
}

std::vector<std::size_t> topological_order(std::span<const std::vector<std::size_t>> children) {
  const std::size_t n = children.size();
  std::vector<std::size_t> indegree(n, 0);
  for (const auto& out : children) {
    for (std::size_t v : out) ++indegree[v];
  }
  std::priority_queue<std::size_t, std::vector<std::size_t>, std::greater<>> ready;
  for (std::size_t v = 0; v < n; ++v) {
    if (indegree[v] == 0) ready.push(v);
  }
  std::vector<std::size_t> order;
  order.reserve(n);
  while (!ready.empty()) {
    const std::size_t u = ready.top();
    ready.pop();
    order.push_back(u);
    for (std::size_t v : children[u]) {
      if (--indegree[v] == 0) ready.push(v);
    }
  }
  if (order.size() != n) throw CyclicGraphError("topological_order: graph has a cycle");
  return order;
}

std::vector<std::size_t> topological_order(const Dag& g) {
  std::vector<std::vector<std::size_t>> children(g.node_count());
  for (const Edge& e : g.edges()) children[e.from].push_back(e.to);
  return topological_order(children);
}

}  // namespace prmgen
