#include "prmgen/schema.hpp"

#include <algorithm>
#include <set>
#include <stdexcept>

namespace prmgen {

std::size_t RelationalSchema::attribute_count() const {
  std::size_t total = 0;
  for (const auto& c : classes) total += c.attributes.size();
  return total;
}

std::vector<std::size_t> RelationalSchema::incoming_slots(std::size_t class_index) const {
  std::vector<std::size_t> out;
  for (std::size_t s = 0; s < slots.size(); ++s) {
    if (slots[s].referenced_class == class_index) out.push_back(s);
  }
  return out;
}

void GenerationPolicy::validate() const {
  if (!(attr_lambda > 0.0)) throw std::invalid_argument("attr_lambda must be positive");
  if (!(state_lambda > 0.0)) throw std::invalid_argument("state_lambda must be positive");
  if (inter_class_attempts == 0) {
    throw std::invalid_argument("inter_class_attempts must be positive");
  }
}

std::string class_name(std::size_t class_index) {
  return "clazz" + std::to_string(class_index);
}

std::string primary_key_name(std::size_t class_index) {
  return class_name(class_index) + "id";
}

std::string attribute_name(std::size_t attribute_index) {
  return "att" + std::to_string(attribute_index);
}

std::string state_label(std::size_t state_index) {
  return "v" + std::to_string(state_index);
}

std::string foreign_key_name(std::size_t owner, std::size_t referenced) {
  return class_name(referenced) + "fkatt" + std::to_string(referenced) + std::to_string(owner);
}

AttributeDef make_attribute(std::string name, std::size_t cardinality) {
  AttributeDef a{std::move(name), {}};
  a.states.reserve(cardinality);
  for (std::size_t k = 0; k < cardinality; ++k) a.states.push_back(state_label(k));
  return a;
}

RelationalSchema assemble_schema(std::vector<ClassDef> classes, std::vector<ReferenceSlot> slots) {
  RelationalSchema s;
  s.classes = std::move(classes);
  s.slots = std::move(slots);
  std::vector<Edge> edges;
  for (auto& c : s.classes) c.reference_slots.clear();
  for (std::size_t i = 0; i < s.slots.size(); ++i) {
    const auto& slot = s.slots[i];
    if (slot.owner_class < s.classes.size()) {
      s.classes[slot.owner_class].reference_slots.push_back(i);
    }
    edges.push_back({slot.owner_class, slot.referenced_class});
  }
  for (auto& c : s.classes) {
    std::stable_sort(c.reference_slots.begin(), c.reference_slots.end(),
                     [&](std::size_t a, std::size_t b) {
                       return s.slots[a].referenced_class < s.slots[b].referenced_class;
                     });
  }
  s.class_dag = Dag::unchecked(s.classes.size(), std::move(edges));
  return s;
}

RelationalSchema generate_schema(std::size_t n, const GenerationPolicy& policy, Rng& rng) {
  if (n == 0) throw std::invalid_argument("generate_schema: n must be positive");
  policy.validate();

  Dag class_dag = generate_connected_dag(n, policy.dag_policy, rng);

  std::vector<ClassDef> classes(n);
  for (std::size_t i = 0; i < n; ++i) {
    ClassDef& c = classes[i];
    c.name = class_name(i);
    c.primary_key = primary_key_name(i);
    const std::size_t attr_count = 1 + rng.poisson(policy.attr_lambda);
    for (std::size_t k = 0; k < attr_count; ++k) {
      c.attributes.push_back(make_attribute(attribute_name(k), 2 + rng.poisson(policy.state_lambda)));
    }
  }

  std::vector<ReferenceSlot> slots;
  for (const Edge& e : class_dag.edges()) {
    slots.push_back({foreign_key_name(e.from, e.to), e.from, e.to});
  }
  RelationalSchema s = assemble_schema(std::move(classes), std::move(slots));
  s.class_dag = std::move(class_dag);
  return s;
}

std::vector<SchemaFinding> validate_schema(const RelationalSchema& s) {
  std::vector<SchemaFinding> out;
  const std::size_t n = s.classes.size();

  if (s.class_dag.node_count() != n) {
    out.push_back({SchemaIssue::kSlotEdgeMismatch, "class graph node count differs from class count"});
  }
  if (!s.class_dag.is_acyclic()) {
    out.push_back({SchemaIssue::kCycle, "class graph contains a referential cycle"});
  }
  if (!is_weakly_connected(s.class_dag)) {
    out.push_back({SchemaIssue::kDisconnected, "class graph is not connected"});
  }

  std::set<std::pair<std::size_t, std::size_t>> slot_edges;
  for (std::size_t i = 0; i < s.slots.size(); ++i) {
    const auto& slot = s.slots[i];
    if (slot.owner_class >= n || slot.referenced_class >= n || slot.owner_class == slot.referenced_class) {
      out.push_back({SchemaIssue::kDanglingSlot, "slot " + slot.name + " has an invalid endpoint"});
      continue;
    }
    const auto& owned = s.classes[slot.owner_class].reference_slots;
    if (std::find(owned.begin(), owned.end(), i) == owned.end()) {
      out.push_back({SchemaIssue::kDanglingSlot,
                     "slot " + slot.name + " is not listed by its owner class"});
    }
    if (!slot_edges.insert({slot.owner_class, slot.referenced_class}).second) {
      out.push_back({SchemaIssue::kSlotEdgeMismatch,
                     "more than one slot links " + s.classes[slot.owner_class].name + " to " +
                         s.classes[slot.referenced_class].name});
    }
    if (!s.class_dag.has_edge(slot.owner_class, slot.referenced_class)) {
      out.push_back({SchemaIssue::kSlotEdgeMismatch, "slot " + slot.name + " has no class-graph edge"});
    }
  }
  for (const Edge& e : s.class_dag.edges()) {
    if (!slot_edges.contains({e.from, e.to})) {
      out.push_back({SchemaIssue::kSlotEdgeMismatch,
                     "class-graph edge " + std::to_string(e.from) + "->" + std::to_string(e.to) +
                         " has no reference slot"});
    }
  }

  for (std::size_t c = 0; c < n; ++c) {
    const ClassDef& cls = s.classes[c];
    for (std::size_t idx : cls.reference_slots) {
      if (idx >= s.slots.size() || s.slots[idx].owner_class != c) {
        out.push_back({SchemaIssue::kDanglingSlot, cls.name + " lists a slot it does not own"});
      }
    }
    if (cls.attributes.empty()) {
      out.push_back({SchemaIssue::kNoAttributes, cls.name + " has no descriptive attribute"});
    }
    std::set<std::string> names{cls.primary_key};
    auto claim = [&](const std::string& name) {
      if (!names.insert(name).second) {
        out.push_back({SchemaIssue::kNameCollision, cls.name + ": duplicate column name " + name});
      }
    };
    for (const auto& a : cls.attributes) {
      claim(a.name);
      if (a.cardinality() < 2) {
        out.push_back({SchemaIssue::kDomainTooSmall, cls.name + "." + a.name + " has fewer than 2 states"});
      }
      std::set<std::string> labels(a.states.begin(), a.states.end());
      if (labels.size() != a.states.size()) {
        out.push_back({SchemaIssue::kDuplicateState, cls.name + "." + a.name + " repeats a state label"});
      }
    }
    for (std::size_t idx : cls.reference_slots) {
      if (idx < s.slots.size()) claim(s.slots[idx].name);
    }
  }
  std::set<std::string> class_names;
  for (const auto& cls : s.classes) {
    if (!class_names.insert(cls.name).second) {
      out.push_back({SchemaIssue::kNameCollision, "duplicate class name " + cls.name});
    }
  }
  return out;
}

}  // namespace prmgen
