#pragma once

#include <algorithm>
#include <set>
#include <string>
#include <vector>

#include "prmgen/dependency.hpp"
#include "prmgen/errors.hpp"
#include "prmgen/gbn.hpp"
#include "prmgen/schema.hpp"
#include "prmgen/skeleton.hpp"

namespace prmgen::testing {

inline constexpr std::size_t kMovie = 0;
inline constexpr std::size_t kUser = 1;
inline constexpr std::size_t kVote = 2;
inline constexpr std::size_t kMovieSlot = 0;
inline constexpr std::size_t kUserSlot = 1;

// Movie{genre}, User{age}, Vote{rating} with Vote.Movie and Vote.User.
inline RelationalSchema movie_schema() {
  std::vector<ClassDef> classes(3);
  classes[kMovie] = {"Movie", "movieid", {make_attribute("genre", 3)}, {}};
  classes[kUser] = {"User", "userid", {make_attribute("age", 2)}, {}};
  classes[kVote] = {"Vote", "voteid", {make_attribute("rating", 2)}, {}};
  std::vector<ReferenceSlot> slots{{"Movie", kVote, kMovie}, {"User", kVote, kUser}};
  return assemble_schema(std::move(classes), std::move(slots));
}

// Steps are slot names, "~" marking an inverse step.
inline SlotChain make_chain(const RelationalSchema& schema, std::size_t source,
                            const std::vector<std::string>& steps) {
  SlotChain chain{source, {}};
  for (const auto& step : steps) {
    const bool inverted = step.starts_with('~');
    const std::string name = inverted ? step.substr(1) : step;
    bool found = false;
    for (std::size_t s = 0; s < schema.slots.size() && !found; ++s) {
      if (schema.slots[s].name == name) {
        chain.slots.push_back({s, inverted});
        found = true;
      }
    }
    if (!found) throw std::invalid_argument("no slot " + name);
  }
  return chain;
}

// Three users, five movies and nine votes; user 0 voted movies 0 and 1.
inline RelationalSkeleton vote_skeleton() {
  RelationalSkeleton sk;
  sk.object_counts = {5, 3, 9};
  const std::size_t movie_of[9] = {0, 1, 1, 2, 3, 2, 4, 3, 4};
  const std::size_t user_of[9] = {0, 0, 1, 1, 1, 2, 2, 2, 2};
  for (std::size_t v = 0; v < 9; ++v) {
    sk.links.push_back({kMovieSlot, {kVote, v}, {kMovie, movie_of[v]}});
    sk.links.push_back({kUserSlot, {kVote, v}, {kUser, user_of[v]}});
  }
  std::sort(sk.links.begin(), sk.links.end());
  return sk;
}

// Walks the raw link list without any index structure.
inline std::set<ObjectRef> brute_force_resolve(const RelationalSchema& schema, const RelationalSkeleton& sk,
                                               ObjectRef start, const SlotChain& chain) {
  std::set<ObjectRef> current{start};
  for (const Slot step : chain.slots) {
    std::set<ObjectRef> next;
    for (const Link& link : sk.links) {
      if (link.slot != step.slot) continue;
      const ObjectRef& from = step.inverted ? link.to : link.from;
      const ObjectRef& to = step.inverted ? link.from : link.to;
      if (current.contains(from)) next.insert(to);
    }
    current = std::move(next);
  }
  (void)schema;
  return current;
}

// Kahn's algorithm on an explicit child list; false if a cycle remains.
inline bool acyclic_by_peeling(const std::vector<std::vector<std::size_t>>& children) {
  std::vector<std::size_t> indeg(children.size(), 0);
  for (const auto& cs : children) {
    for (std::size_t c : cs) ++indeg[c];
  }
  std::vector<std::size_t> ready;
  for (std::size_t v = 0; v < children.size(); ++v) {
    if (indeg[v] == 0) ready.push_back(v);
  }
  std::size_t seen = 0;
  while (!ready.empty()) {
    const std::size_t v = ready.back();
    ready.pop_back();
    ++seen;
    for (std::size_t c : children[v]) {
      if (--indeg[c] == 0) ready.push_back(c);
    }
  }
  return seen == children.size();
}

// Ground graph as child lists: parent node -> dependent nodes.
inline std::vector<std::vector<std::size_t>> ground_children(const GroundBayesianNetwork& gbn) {
  std::vector<std::vector<std::size_t>> children(gbn.nodes().size());
  for (std::size_t n = 0; n < gbn.nodes().size(); ++n) {
    for (const auto& p : gbn.nodes()[n].parents) {
      if (const auto* single = std::get_if<std::size_t>(&p)) {
        children[*single].push_back(n);
      } else {
        for (std::size_t src : std::get<AggregateParent>(p).nodes) children[src].push_back(n);
      }
    }
  }
  return children;
}

inline Dependency dependency(AttributeNode child, AttributeNode parent, SlotChain chain) {
  Dependency d{child, parent, std::move(chain), std::nullopt};
  if (d.chain.is_multi_valued()) d.aggregator = Aggregator::kMode;
  return d;
}

inline DependencyStructure structure_of(std::vector<Dependency> deps) {
  std::sort(deps.begin(), deps.end(), [](const Dependency& a, const Dependency& b) {
    if (a.child != b.child) return a.child < b.child;
    return canonical_parent_less(a, b);
  });
  return {std::move(deps)};
}

}  // namespace prmgen::testing
