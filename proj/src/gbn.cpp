#include "prmgen/gbn.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

#include "prmgen/dag.hpp"
#include "prmgen/errors.hpp"

namespace prmgen {

std::vector<ObjectRef> resolve_slot_chain(const SkeletonIndex& index, const RelationalSchema& schema,
                                          ObjectRef start, const SlotChain& chain) {
  if (start.class_index != chain.source_class) {
    throw std::invalid_argument("resolve_slot_chain: start object is not of the chain's source class");
  }
  std::vector<std::size_t> current{start.object_id};
  std::vector<std::size_t> next;
  for (Slot s : chain.slots) {
    next.clear();
    if (s.inverted) {
      for (std::size_t id : current) {
        const auto& r = index.referrers(s.slot, id);
        next.insert(next.end(), r.begin(), r.end());
      }
    } else {
      for (std::size_t id : current) next.push_back(index.target(s.slot, id));
    }
    std::sort(next.begin(), next.end());
    next.erase(std::unique(next.begin(), next.end()), next.end());
    current.swap(next);
  }
  const std::size_t end = chain.end_class(schema);
  std::vector<ObjectRef> out;
  out.reserve(current.size());
  for (std::size_t id : current) out.push_back({end, id});
  return out;
}

std::size_t aggregate_mode(std::span<const std::size_t> values, std::size_t domain_size) {
  if (values.empty()) return 0;
  std::vector<std::size_t> counts(domain_size, 0);
  for (std::size_t v : values) ++counts.at(v);
  return static_cast<std::size_t>(std::max_element(counts.begin(), counts.end()) - counts.begin());
}

GroundBayesianNetwork::GroundBayesianNetwork(std::shared_ptr<const Prm> prm,
                                             std::shared_ptr<const RelationalSkeleton> skeleton,
                                             std::vector<GbnNode> nodes, std::vector<std::size_t> order)
    : prm_(std::move(prm)), skeleton_(std::move(skeleton)), nodes_(std::move(nodes)), order_(std::move(order)) {
  const auto& schema = prm_->schema;
  class_offsets_.assign(schema.class_count() + 1, 0);
  for (std::size_t c = 0; c < schema.class_count(); ++c) {
    class_offsets_[c + 1] = class_offsets_[c] + skeleton_->object_counts[c] * schema.classes[c].attributes.size();
  }
  const AttributeIndex attrs(schema);
  cpd_of_node_.reserve(nodes_.size());
  for (const auto& n : nodes_) cpd_of_node_.push_back(attrs.flat({n.object.class_index, n.attribute_index}));
}

std::size_t GroundBayesianNetwork::node_id(ObjectRef object, std::size_t attribute_index) const {
  const std::size_t width = prm_->schema.classes.at(object.class_index).attributes.size();
  return class_offsets_[object.class_index] + object.object_id * width + attribute_index;
}

const Cpd& GroundBayesianNetwork::cpd(std::size_t node_id) const {
  return prm_->cpds.at(cpd_of_node_.at(node_id));
}

std::size_t GroundBayesianNetwork::empty_aggregate_count() const {
  std::size_t n = 0;
  for (const auto& node : nodes_) {
    for (const auto& p : node.parents) {
      if (const auto* agg = std::get_if<AggregateParent>(&p); agg && agg->nodes.empty()) ++n;
    }
  }
  return n;
}

GroundBayesianNetwork ground(const Prm& prm, const RelationalSkeleton& skeleton) {
  auto prm_ptr = std::make_shared<const Prm>(prm);
  auto sk_ptr = std::make_shared<const RelationalSkeleton>(skeleton);
  const auto& schema = prm_ptr->schema;
  const SkeletonIndex index(schema, *sk_ptr);

  std::vector<std::size_t> offsets(schema.class_count() + 1, 0);
  for (std::size_t c = 0; c < schema.class_count(); ++c) {
    offsets[c + 1] = offsets[c] + sk_ptr->object_counts[c] * schema.classes[c].attributes.size();
  }
  auto id_of = [&](ObjectRef o, std::size_t attr) {
    return offsets[o.class_index] + o.object_id * schema.classes[o.class_index].attributes.size() + attr;
  };

  std::vector<GbnNode> nodes(offsets.back());
  std::vector<std::vector<std::size_t>> children(nodes.size());
  for (std::size_t c = 0; c < schema.class_count(); ++c) {
    const auto& cls = schema.classes[c];
    for (std::size_t a = 0; a < cls.attributes.size(); ++a) {
      const Cpd& cpd = prm_ptr->cpd({c, a});
      for (std::size_t obj = 0; obj < sk_ptr->object_counts[c]; ++obj) {
        const ObjectRef self{c, obj};
        const std::size_t id = id_of(self, a);
        GbnNode& node = nodes[id];
        node.object = self;
        node.attribute_index = a;
        for (const Dependency& dep : cpd.parents) {
          const auto reached = resolve_slot_chain(index, schema, self, dep.chain);
          const std::size_t pa = dep.parent.attribute_index;
          if (!dep.chain.is_multi_valued()) {
            if (reached.size() != 1) throw StructuralError("ground: single-valued chain did not resolve to one object");
            const std::size_t pid = id_of(reached.front(), pa);
            node.parents.emplace_back(pid);
            children[pid].push_back(id);
          } else {
            AggregateParent agg;
            agg.aggregator = dep.aggregator.value_or(Aggregator::kMode);
            agg.domain_size = cpd.parent_cardinalities[node.parents.size()];
            agg.nodes.reserve(reached.size());
            for (ObjectRef o : reached) {
              const std::size_t pid = id_of(o, pa);
              agg.nodes.push_back(pid);
              children[pid].push_back(id);
            }
            node.parents.emplace_back(std::move(agg));
          }
        }
      }
    }
  }
  std::vector<std::size_t> order;
  try {
    order = topological_order(children);
  } catch (const CyclicGraphError&) {
    throw CyclicGraphError("ground: ground Bayesian network has a cycle");
  }
  return GroundBayesianNetwork(std::move(prm_ptr), std::move(sk_ptr), std::move(nodes), std::move(order));
}

std::size_t Dataset::total_rows() const {
  std::size_t n = 0;
  for (const auto& t : tables) n += t.row_count;
  return n;
}

Dataset forward_sample(const GroundBayesianNetwork& gbn, Rng& rng) {
  const auto& schema = gbn.prm().schema;
  const auto& sk = gbn.skeleton();
  const auto nodes = gbn.nodes();
  std::vector<std::size_t> values(nodes.size(), 0);
  std::vector<std::size_t> states;
  std::vector<std::size_t> pool;
  for (std::size_t id : gbn.topological_order()) {
    const GbnNode& node = nodes[id];
    states.clear();
    for (const auto& p : node.parents) {
      if (const auto* direct = std::get_if<std::size_t>(&p)) {
        states.push_back(values[*direct]);
      } else {
        const auto& agg = std::get<AggregateParent>(p);
        pool.clear();
        for (std::size_t n : agg.nodes) pool.push_back(values[n]);
        states.push_back(aggregate_mode(pool, agg.domain_size));
      }
    }
    const Cpd& cpd = gbn.cpd(id);
    values[id] = rng.categorical(cpd.rows[cpd.row_index(states)]);
  }

  const SkeletonIndex index(schema, sk);
  Dataset data;
  data.tables.resize(schema.class_count());
  for (std::size_t c = 0; c < schema.class_count(); ++c) {
    const auto& cls = schema.classes[c];
    ClassTable& t = data.tables[c];
    t.row_count = sk.object_counts[c];
    for (std::size_t s : cls.reference_slots) {
      auto& col = t.foreign_keys.emplace_back(t.row_count);
      for (std::size_t r = 0; r < t.row_count; ++r) col[r] = index.target(s, r);
    }
    for (std::size_t a = 0; a < cls.attributes.size(); ++a) {
      auto& col = t.attributes.emplace_back(t.row_count);
      for (std::size_t r = 0; r < t.row_count; ++r) col[r] = values[gbn.node_id({c, r}, a)];
    }
  }
  return data;
}

std::vector<std::string> validate_dataset(const RelationalSchema& schema, const Dataset& data) {
  std::vector<std::string> out;
  if (data.tables.size() != schema.class_count()) {
    out.push_back("dataset table count differs from class count");
    return out;
  }
  for (std::size_t c = 0; c < schema.class_count(); ++c) {
    const auto& cls = schema.classes[c];
    const auto& t = data.tables[c];
    if (t.foreign_keys.size() != cls.reference_slots.size() || t.attributes.size() != cls.attributes.size()) {
      out.push_back(cls.name + ": column layout differs from the schema");
      continue;
    }
    for (std::size_t k = 0; k < cls.reference_slots.size(); ++k) {
      const auto& slot = schema.slots[cls.reference_slots[k]];
      const std::size_t limit = data.tables[slot.referenced_class].row_count;
      const auto& col = t.foreign_keys[k];
      if (col.size() != t.row_count) out.push_back(cls.name + "." + slot.name + ": wrong row count");
      for (std::size_t r = 0; r < col.size(); ++r) {
        if (col[r] >= limit) {
          out.push_back(cls.name + " row " + std::to_string(r) + ": " + slot.name + " references missing " +
                        schema.classes[slot.referenced_class].name + " " + std::to_string(col[r]));
        }
      }
    }
    for (std::size_t a = 0; a < cls.attributes.size(); ++a) {
      const auto& col = t.attributes[a];
      if (col.size() != t.row_count) out.push_back(cls.name + "." + cls.attributes[a].name + ": wrong row count");
      for (std::size_t r = 0; r < col.size(); ++r) {
        if (col[r] >= cls.attributes[a].cardinality()) {
          out.push_back(cls.name + "." + cls.attributes[a].name + " row " + std::to_string(r) + ": state out of domain");
        }
      }
    }
  }
  return out;
}

}  // namespace prmgen
