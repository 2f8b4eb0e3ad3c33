#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "prmgen/dag.hpp"
#include "prmgen/rng.hpp"

namespace prmgen {

/// Categorical descriptive attribute. States are labelled "v0".."v{k-1}".
struct AttributeDef {
  std::string name;
  std::vector<std::string> states;

  std::size_t cardinality() const { return states.size(); }
  bool operator==(const AttributeDef&) const = default;
};

/// Foreign key of `owner_class` pointing at the primary key of
/// `referenced_class`.
struct ReferenceSlot {
  std::string name;
  std::size_t owner_class = 0;
  std::size_t referenced_class = 0;

  bool operator==(const ReferenceSlot&) const = default;
};

struct ClassDef {
  std::string name;
  std::string primary_key;
  std::vector<AttributeDef> attributes;
  /// Indices into RelationalSchema::slots, ordered by referenced class.
  std::vector<std::size_t> reference_slots;

  bool operator==(const ClassDef&) const = default;
};

/// Classes plus reference slots. The class graph has an edge owner ->
/// referenced for every slot, and must be a weakly connected DAG.
struct RelationalSchema {
  std::vector<ClassDef> classes;
  std::vector<ReferenceSlot> slots;
  Dag class_dag;

  std::size_t class_count() const { return classes.size(); }
  std::size_t attribute_count() const;
  /// Slots whose referenced class is `class_index`.
  std::vector<std::size_t> incoming_slots(std::size_t class_index) const;

  bool operator==(const RelationalSchema&) const = default;
};

/// Knobs shared by schema and dependency generation.
struct GenerationPolicy {
  /// Descriptive attributes per class are 1 + Poisson(attr_lambda).
  double attr_lambda = 1.0;
  /// States per attribute are 2 + Poisson(state_lambda).
  double state_lambda = 1.0;
  DagPolicy dag_policy;
  /// Random (parent, child) pairs tried for each inter-class dependency.
  std::size_t inter_class_attempts = 100;
  /// Full redraws of the inter-class phase before giving up on connecting
  /// every class component.
  std::size_t max_structure_retries = 10'000;

  void validate() const;
};

std::string class_name(std::size_t class_index);
std::string primary_key_name(std::size_t class_index);
std::string attribute_name(std::size_t attribute_index);
std::string state_label(std::size_t state_index);
/// Name of the foreign key that `owner` holds on `referenced`,
/// e.g. clazz2 -> clazz1 gives "clazz1fkatt12".
std::string foreign_key_name(std::size_t owner, std::size_t referenced);

/// Builds an attribute with the canonical state labels.
AttributeDef make_attribute(std::string name, std::size_t cardinality);

/// Random relational schema on n classes: a connected class DAG, one
/// surrogate key per class, Poisson-sized attribute sets and domains, one
/// foreign key per class-DAG edge.
RelationalSchema generate_schema(std::size_t n, const GenerationPolicy& policy, Rng& rng);

/// Builds a schema from explicit parts and derives class_dag from the slots.
/// Slot indices in each ClassDef are filled in; no validation is performed.
RelationalSchema assemble_schema(std::vector<ClassDef> classes, std::vector<ReferenceSlot> slots);

enum class SchemaIssue {
  kCycle,
  kDisconnected,
  kNameCollision,
  kDomainTooSmall,
  kDuplicateState,
  kDanglingSlot,
  kSlotEdgeMismatch,
  kNoAttributes,
};

struct SchemaFinding {
  SchemaIssue issue;
  std::string message;
};

/// Every invariant violation in `s`; empty iff the schema is valid.
std::vector<SchemaFinding> validate_schema(const RelationalSchema& s);

}  // namespace prmgen
