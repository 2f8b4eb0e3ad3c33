#include "prmgen/dependency.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <map>
#include <numeric>
#include <set>
#include <stdexcept>

#include "prmgen/errors.hpp"

namespace prmgen {

std::size_t slot_start_class(const RelationalSchema& schema, Slot s) {
  const auto& slot = schema.slots.at(s.slot);
  return s.inverted ? slot.referenced_class : slot.owner_class;
}

std::size_t slot_end_class(const RelationalSchema& schema, Slot s) {
  const auto& slot = schema.slots.at(s.slot);
  return s.inverted ? slot.owner_class : slot.referenced_class;
}

std::size_t SlotChain::end_class(const RelationalSchema& schema) const {
  return slots.empty() ? source_class : slot_end_class(schema, slots.back());
}

bool SlotChain::is_multi_valued() const {
  return std::any_of(slots.begin(), slots.end(), [](Slot s) { return s.inverted; });
}

bool SlotChain::is_well_composed(const RelationalSchema& schema) const {
  if (source_class >= schema.class_count()) return false;
  std::size_t at = source_class;
  for (Slot s : slots) {
    if (s.slot >= schema.slots.size() || slot_start_class(schema, s) != at) return false;
    at = slot_end_class(schema, s);
  }
  return true;
}

std::string chain_path(const RelationalSchema& schema, const SlotChain& chain) {
  std::string out;
  for (std::size_t i = 0; i < chain.slots.size(); ++i) {
    if (i > 0) out += '/';
    if (chain.slots[i].inverted) out += '~';
    out += schema.slots.at(chain.slots[i].slot).name;
  }
  return out;
}

std::string attribute_path(const RelationalSchema& schema, AttributeNode node) {
  const auto& cls = schema.classes.at(node.class_index);
  return cls.name + "." + cls.attributes.at(node.attribute_index).name;
}

std::string_view aggregator_name(Aggregator agg) {
  switch (agg) {
    case Aggregator::kMode:
      return "MODE";
  }
  return "?";
}

std::optional<Aggregator> parse_aggregator(std::string_view name) {
  if (name == "MODE") return Aggregator::kMode;
  return std::nullopt;
}

std::span<const Aggregator> default_aggregators() {
  static constexpr std::array<Aggregator, 1> kAll{Aggregator::kMode};
  return kAll;
}

bool canonical_parent_less(const Dependency& a, const Dependency& b) {
  if (a.parent != b.parent) return a.parent < b.parent;
  if (a.chain.length() != b.chain.length()) return a.chain.length() < b.chain.length();
  return a.chain.slots < b.chain.slots;
}

std::string describe(const RelationalSchema& schema, const Dependency& dep) {
  std::string parent = schema.classes.at(dep.child.class_index).name;
  for (Slot s : dep.chain.slots) {
    parent += '.';
    if (s.inverted) parent += '~';
    parent += schema.slots.at(s.slot).name;
  }
  parent += "." + schema.classes.at(dep.parent.class_index).attributes.at(dep.parent.attribute_index).name;
  if (dep.aggregator) parent = std::string(aggregator_name(*dep.aggregator)) + "(" + parent + ")";
  return parent + " -> " + attribute_path(schema, dep.child);
}

std::vector<Dependency> DependencyStructure::parents_of(AttributeNode child) const {
  std::vector<Dependency> out;
  for (const auto& d : dependencies) {
    if (d.child == child) out.push_back(d);
  }
  std::sort(out.begin(), out.end(), canonical_parent_less);
  return out;
}

AttributeIndex::AttributeIndex(const RelationalSchema& schema) {
  offsets_.reserve(schema.class_count());
  for (std::size_t c = 0; c < schema.class_count(); ++c) {
    offsets_.push_back(nodes_.size());
    for (std::size_t a = 0; a < schema.classes[c].attributes.size(); ++a) nodes_.push_back({c, a});
  }
}

Dag attribute_graph(const RelationalSchema& schema, const DependencyStructure& structure) {
  AttributeIndex index(schema);
  std::set<Edge> edges;
  for (const auto& d : structure.dependencies) {
    edges.insert({index.flat(d.parent), index.flat(d.child)});
  }
  return Dag::unchecked(index.size(), {edges.begin(), edges.end()});
}

namespace {

bool reaches(const std::vector<std::vector<std::size_t>>& children, std::size_t from,
             std::size_t to) {
  std::vector<char> seen(children.size(), 0);
  std::vector<std::size_t> stack{from};
  seen[from] = 1;
  while (!stack.empty()) {
    const std::size_t x = stack.back();
    stack.pop_back();
    if (x == to) return true;
    for (std::size_t y : children[x]) {
      if (!seen[y]) {
        seen[y] = 1;
        stack.push_back(y);
      }
    }
  }
  return false;
}

bool has_child(const std::vector<std::vector<std::size_t>>& children, std::size_t u, std::size_t v) {
  return std::find(children[u].begin(), children[u].end(), v) != children[u].end();
}

// Classes touched by the inter-class edges form one component.
bool links_all_classes(std::size_t class_count, const std::vector<Edge>& class_pairs) {
  std::vector<std::size_t> parent(class_count);
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  std::size_t components = class_count;
  for (const Edge& e : class_pairs) {
    const std::size_t a = find(e.from), b = find(e.to);
    if (a != b) {
      parent[a] = b;
      --components;
    }
  }
  return components == 1;
}

}  // namespace

DependencyStructure generate_dependency_structure(const RelationalSchema& schema,
                                                  const GenerationPolicy& policy, Rng& rng) {
  policy.validate();
  const AttributeIndex index(schema);
  const std::size_t total = index.size();
  const std::size_t n = schema.class_count();

  std::vector<std::vector<std::size_t>> intra(total);
  for (std::size_t c = 0; c < n; ++c) {
    const std::size_t k = schema.classes[c].attributes.size();
    if (k == 0) continue;
    const Dag sub = generate_random_dag(k, policy.dag_policy, rng);
    for (const Edge& e : sub.edges()) {
      intra[index.flat({c, e.from})].push_back(index.flat({c, e.to}));
    }
  }

  std::vector<std::vector<std::size_t>> graph = intra;
  if (n > 1) {
    bool linked = false;
    for (std::size_t attempt = 0; attempt <= policy.max_structure_retries && !linked; ++attempt) {
      graph = intra;
      std::vector<Edge> class_pairs;
      const std::size_t target = 1 + rng.poisson(static_cast<double>(n - 1));
      for (std::size_t e = 0; e < target; ++e) {
        for (std::size_t tries = 0; tries < policy.inter_class_attempts; ++tries) {
          const std::size_t p = rng.index(total);
          const AttributeNode pn = index.node(p);
          const std::size_t own = schema.classes[pn.class_index].attributes.size();
          const std::size_t first = index.flat({pn.class_index, 0});
          std::size_t q = rng.index(total - own);
          if (q >= first) q += own;
          if (has_child(graph, p, q) || reaches(graph, q, p)) continue;
          graph[p].push_back(q);
          class_pairs.push_back({pn.class_index, index.node(q).class_index});
          break;
        }
      }
      linked = links_all_classes(n, class_pairs);
    }
    if (!linked) {
      throw RejectionBudgetExceeded(
          "generate_dependency_structure: inter-class dependencies never linked all classes");
    }
  }

  DependencyStructure out;
  for (std::size_t p = 0; p < total; ++p) {
    for (std::size_t q : graph[p]) {
      const AttributeNode child = index.node(q);
      out.dependencies.push_back({child, index.node(p), SlotChain{child.class_index, {}}, std::nullopt});
    }
  }
  std::sort(out.dependencies.begin(), out.dependencies.end(),
            [](const Dependency& a, const Dependency& b) {
              return std::tie(a.child, a.parent) < std::tie(b.child, b.parent);
            });
  return out;
}

namespace {

// True when appending `next` to `prefix` ends in a pair (rho^-1, rho) that
// maps every set it can be applied to onto itself. That holds when the step
// before the pair is rho itself (every object reached has a referrer through
// rho), or when rho is the only slot pointing at its class (generated
// skeletons give every non-root object a referrer).
bool reduces_with(const RelationalSchema& schema, std::span<const Slot> prefix, Slot next) {
  if (prefix.empty() || next.inverted) return false;
  const Slot last = prefix.back();
  if (!last.inverted || last.slot != next.slot) return false;
  if (prefix.size() >= 2 && prefix[prefix.size() - 2] == Slot{next.slot, false}) return true;
  const std::size_t target = schema.slots.at(next.slot).referenced_class;
  std::size_t referrers = 0;
  for (const auto& s : schema.slots) referrers += s.referenced_class == target ? 1 : 0;
  return referrers == 1;
}

}  // namespace

SlotChain simplify_slot_chain(const RelationalSchema& schema, const SlotChain& chain) {
  SlotChain out{chain.source_class, {}};
  out.slots.reserve(chain.slots.size());
  for (Slot s : chain.slots) {
    if (reduces_with(schema, out.slots, s)) {
      out.slots.pop_back();
    } else {
      out.slots.push_back(s);
    }
  }
  return out;
}

std::vector<SlotChain> enumerate_slot_chains(const RelationalSchema& schema, std::size_t from_class,
                                             std::size_t to_class, std::size_t k_max) {
  if (from_class >= schema.class_count() || to_class >= schema.class_count()) {
    throw std::out_of_range("enumerate_slot_chains: class index out of range");
  }
  // Steps available from each class: forward slots it owns, inverse slots
  // pointing at it.
  std::vector<std::vector<Slot>> steps(schema.class_count());
  for (std::size_t i = 0; i < schema.slots.size(); ++i) {
    steps[schema.slots[i].owner_class].push_back({i, false});
    steps[schema.slots[i].referenced_class].push_back({i, true});
  }

  std::vector<SlotChain> out;
  std::vector<Slot> path;
  auto walk = [&](auto&& self, std::size_t at) -> void {
    if (at == to_class) out.push_back({from_class, path});
    if (path.size() == k_max) return;
    for (Slot s : steps[at]) {
      // Reducible extensions are spelled more shortly elsewhere in the walk.
      if (reduces_with(schema, path, s)) continue;
      path.push_back(s);
      self(self, slot_end_class(schema, s));
      path.pop_back();
    }
  };
  walk(walk, from_class);

  std::sort(out.begin(), out.end(), [](const SlotChain& a, const SlotChain& b) {
    if (a.length() != b.length()) return a.length() < b.length();
    return a.slots < b.slots;
  });
  return out;
}

std::vector<double> slot_chain_weights(std::span<const SlotChain> chains) {
  if (chains.empty()) throw NoCandidateError("slot_chain_weights: no candidate slot chain");
  std::map<std::size_t, std::size_t> occurrences;
  for (const auto& c : chains) ++occurrences[c.length()];
  std::vector<double> w;
  w.reserve(chains.size());
  for (const auto& c : chains) {
    const double l = static_cast<double>(c.length());
    w.push_back(std::exp(-l / static_cast<double>(occurrences[c.length()])));
  }
  const double total = std::accumulate(w.begin(), w.end(), 0.0);
  for (auto& x : w) x /= total;
  return w;
}

std::size_t draw_slot_chain(std::span<const SlotChain> chains, Rng& rng) {
  const auto w = slot_chain_weights(chains);
  return rng.categorical(w);
}

std::size_t effective_k_max(const RelationalSchema& schema, std::size_t k_max) {
  return std::max(k_max, schema.class_count() == 0 ? std::size_t{0} : schema.class_count() - 1);
}

DependencyStructure assign_slot_chains(const RelationalSchema& schema,
                                       const DependencyStructure& structure, std::size_t k_max,
                                       Rng& rng, std::vector<std::string>* dropped) {
  const std::size_t horizon = effective_k_max(schema, k_max);
  std::map<std::pair<std::size_t, std::size_t>, std::vector<SlotChain>> cache;
  const auto aggregators = default_aggregators();

  DependencyStructure out;
  for (const auto& dep : structure.dependencies) {
    const auto key = std::make_pair(dep.child.class_index, dep.parent.class_index);
    auto it = cache.find(key);
    if (it == cache.end()) {
      it = cache.emplace(key, enumerate_slot_chains(schema, key.first, key.second, horizon)).first;
    }
    const auto& candidates = it->second;
    if (candidates.empty()) {
      if (dropped) {
        dropped->push_back("no slot chain within k_max=" + std::to_string(horizon) + " links " +
                           attribute_path(schema, dep.parent) + " to " +
                           attribute_path(schema, dep.child));
      }
      continue;
    }
    Dependency annotated = dep;
    annotated.chain = candidates[draw_slot_chain(candidates, rng)];
    annotated.aggregator = std::nullopt;
    if (annotated.chain.is_multi_valued()) {
      annotated.aggregator = aggregators[rng.index(aggregators.size())];
    }
    out.dependencies.push_back(std::move(annotated));
  }
  return out;
}

std::size_t Cpd::row_index(std::span<const std::size_t> parent_states) const {
  std::size_t idx = 0;
  for (std::size_t i = 0; i < parent_cardinalities.size(); ++i) {
    idx = idx * parent_cardinalities[i] + parent_states[i];
  }
  return idx;
}

const Cpd& Prm::cpd(AttributeNode node) const {
  for (const auto& c : cpds) {
    if (c.child == node) return c;
  }
  throw std::out_of_range("Prm::cpd: no CPD for attribute");
}

Prm generate_cpds(const RelationalSchema& schema, const DependencyStructure& structure,
                  std::size_t k_max, double dirichlet_alpha, Rng& rng) {
  if (!(dirichlet_alpha > 0.0)) {
    throw std::invalid_argument("generate_cpds: dirichlet alpha must be positive");
  }
  Prm prm{schema, structure, {}, k_max};
  const AttributeIndex index(schema);
  for (std::size_t f = 0; f < index.size(); ++f) {
    const AttributeNode child = index.node(f);
    Cpd cpd;
    cpd.child = child;
    cpd.parents = structure.parents_of(child);
    std::size_t rows = 1;
    for (const auto& p : cpd.parents) {
      const std::size_t card =
          schema.classes[p.parent.class_index].attributes[p.parent.attribute_index].cardinality();
      cpd.parent_cardinalities.push_back(card);
      rows *= card;
    }
    const std::size_t card = schema.classes[child.class_index].attributes[child.attribute_index].cardinality();
    cpd.rows.reserve(rows);
    for (std::size_t r = 0; r < rows; ++r) cpd.rows.push_back(rng.dirichlet(card, dirichlet_alpha));
    prm.cpds.push_back(std::move(cpd));
  }
  return prm;
}

std::vector<std::string> validate_structure(const RelationalSchema& schema,
                                            const DependencyStructure& structure,
                                            std::size_t k_max) {
  std::vector<std::string> out;
  auto valid_node = [&](AttributeNode n) {
    return n.class_index < schema.class_count() &&
           n.attribute_index < schema.classes[n.class_index].attributes.size();
  };
  std::set<std::pair<AttributeNode, AttributeNode>> pairs;
  for (const auto& d : structure.dependencies) {
    if (!valid_node(d.child) || !valid_node(d.parent)) {
      out.push_back("dependency names an attribute outside the schema");
      continue;
    }
    const std::string what = describe(schema, d);
    if (!pairs.insert({d.parent, d.child}).second) out.push_back(what + ": duplicate parent");
    if (d.chain.source_class != d.child.class_index || !d.chain.is_well_composed(schema) ||
        d.chain.end_class(schema) != d.parent.class_index) {
      out.push_back(what + ": chain does not lead from child class to parent class");
    }
    if (d.chain.length() > k_max) out.push_back(what + ": chain longer than k_max");
    if (d.chain.is_multi_valued() != d.aggregator.has_value()) {
      out.push_back(what + ": aggregator must be present exactly for multi-valued chains");
    }
  }
  if (out.empty() && !attribute_graph(schema, structure).is_acyclic()) {
    out.push_back("attribute-level dependency graph has a cycle");
  }
  return out;
}

std::vector<std::string> validate_prm(const Prm& prm) {
  std::vector<std::string> out = validate_structure(prm.schema, prm.structure, prm.k_max);
  const AttributeIndex index(prm.schema);
  if (prm.cpds.size() != index.size()) out.push_back("CPD count differs from attribute count");
  for (std::size_t f = 0; f < std::min(index.size(), prm.cpds.size()); ++f) {
    const Cpd& cpd = prm.cpds[f];
    const AttributeNode node = index.node(f);
    const std::string name = attribute_path(prm.schema, node);
    if (cpd.child != node) {
      out.push_back("CPD " + std::to_string(f) + " is not for " + name);
      continue;
    }
    if (cpd.parents != prm.structure.parents_of(node)) {
      out.push_back(name + ": CPD parents differ from the dependency structure");
      continue;
    }
    std::size_t rows = 1;
    bool cards_ok = cpd.parent_cardinalities.size() == cpd.parents.size();
    for (std::size_t i = 0; cards_ok && i < cpd.parents.size(); ++i) {
      const auto& p = cpd.parents[i].parent;
      cards_ok = cpd.parent_cardinalities[i] ==
                 prm.schema.classes[p.class_index].attributes[p.attribute_index].cardinality();
      rows *= cpd.parent_cardinalities[i];
    }
    if (!cards_ok) {
      out.push_back(name + ": CPD parent cardinalities differ from the schema");
      continue;
    }
    if (cpd.rows.size() != rows) out.push_back(name + ": CPD does not cover every parent configuration");
    const std::size_t card = prm.schema.classes[node.class_index].attributes[node.attribute_index].cardinality();
    for (const auto& row : cpd.rows) {
      double sum = 0.0;
      bool negative = false;
      for (double p : row) {
        sum += p;
        negative |= !(p >= 0.0);
      }
      if (row.size() != card || negative || std::abs(sum - 1.0) > 1e-9) {
        out.push_back(name + ": CPD row is not a distribution over the attribute's states");
        break;
      }
    }
  }
  return out;
}

}  // namespace prmgen
