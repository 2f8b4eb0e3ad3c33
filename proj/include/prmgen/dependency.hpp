#pragma once

#include <compare>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "prmgen/rng.hpp"
#include "prmgen/schema.hpp"

namespace prmgen {

/// One step of a slot chain: a reference slot walked forward
/// (owner -> referenced, to-one) or inverted (referenced -> owner, to-many).
struct Slot {
  std::size_t slot = 0;
  bool inverted = false;

  auto operator<=>(const Slot&) const = default;
};

std::size_t slot_start_class(const RelationalSchema& schema, Slot s);
std::size_t slot_end_class(const RelationalSchema& schema, Slot s);

struct SlotChain {
  std::size_t source_class = 0;
  std::vector<Slot> slots;

  std::size_t length() const { return slots.size(); }
  std::size_t end_class(const RelationalSchema& schema) const;
  /// Multi-valued iff some step walks a slot backwards.
  bool is_multi_valued() const;
  /// Adjacent steps compose and the first step leaves source_class.
  bool is_well_composed(const RelationalSchema& schema) const;

  auto operator<=>(const SlotChain&) const = default;
};

/// Slash-joined slot names, inverse steps prefixed with '~'.
/// The empty chain renders as "".
std::string chain_path(const RelationalSchema& schema, const SlotChain& chain);

struct AttributeNode {
  std::size_t class_index = 0;
  std::size_t attribute_index = 0;

  auto operator<=>(const AttributeNode&) const = default;
};

std::string attribute_path(const RelationalSchema& schema, AttributeNode node);

enum class Aggregator { kMode };

std::string_view aggregator_name(Aggregator agg);
std::optional<Aggregator> parse_aggregator(std::string_view name);
/// Aggregators drawn for multi-valued chains.
std::span<const Aggregator> default_aggregators();

/// `parent` influences `child`; `chain` leads from the child's class to the
/// parent's class.
struct Dependency {
  AttributeNode child;
  AttributeNode parent;
  SlotChain chain;
  std::optional<Aggregator> aggregator;

  bool operator==(const Dependency&) const = default;
};

/// Canonical parent order: parent class, attribute, chain length, chain steps.
bool canonical_parent_less(const Dependency& a, const Dependency& b);

/// Human-readable form, e.g. "MODE(clazz2.~clazz2fkatt23.att0) -> clazz2.att3".
std::string describe(const RelationalSchema& schema, const Dependency& dep);

struct DependencyStructure {
  /// Sorted by (child, parent).
  std::vector<Dependency> dependencies;

  /// Dependencies whose child is `child`, in canonical parent order.
  std::vector<Dependency> parents_of(AttributeNode child) const;

  bool operator==(const DependencyStructure&) const = default;
};

/// Global index of every descriptive attribute, class by class.
class AttributeIndex {
 public:
  explicit AttributeIndex(const RelationalSchema& schema);

  std::size_t size() const { return nodes_.size(); }
  std::size_t flat(AttributeNode node) const { return offsets_[node.class_index] + node.attribute_index; }
  AttributeNode node(std::size_t flat) const { return nodes_[flat]; }

 private:
  std::vector<std::size_t> offsets_;
  std::vector<AttributeNode> nodes_;
};

/// Attribute-level graph of a structure, chains ignored. May be cyclic when
/// the structure is invalid.
Dag attribute_graph(const RelationalSchema& schema, const DependencyStructure& structure);

/// Builds one random sub-DAG per class over its attributes, then adds
/// inter-class dependencies between attributes of different classes, keeping
/// each only if the attribute graph stays acyclic. The inter-class phase is
/// redrawn until every class component is linked to the others.
/// Chains are left empty (rooted at the child's class) and unannotated.
DependencyStructure generate_dependency_structure(const RelationalSchema& schema,
                                                  const GenerationPolicy& policy, Rng& rng);

/// Removes a trailing (rho^-1, rho) pair whenever walking it back is an
/// identity on every generated skeleton, repeating until none is left. Pairs
/// in the middle of the chain are reduced the same way, left to right.
SlotChain simplify_slot_chain(const RelationalSchema& schema, const SlotChain& chain);

/// All simplified chains of length <= k_max leading from `from_class` to
/// `to_class`, sorted by length then steps. Includes the empty chain iff the
/// two classes coincide.
std::vector<SlotChain> enumerate_slot_chains(const RelationalSchema& schema, std::size_t from_class,
                                             std::size_t to_class, std::size_t k_max);

/// exp(-l / count(l)) per chain, normalised to sum to one.
std::vector<double> slot_chain_weights(std::span<const SlotChain> chains);

/// Index of a chain drawn according to slot_chain_weights.
std::size_t draw_slot_chain(std::span<const SlotChain> chains, Rng& rng);

/// max(k_max, N - 1).
std::size_t effective_k_max(const RelationalSchema& schema, std::size_t k_max);

/// Draws one chain (and an aggregator for multi-valued chains) for every
/// dependency. Dependencies whose classes are not linked by any chain within
/// the effective k_max are dropped and described in `dropped`.
DependencyStructure assign_slot_chains(const RelationalSchema& schema,
                                       const DependencyStructure& structure, std::size_t k_max,
                                       Rng& rng, std::vector<std::string>* dropped = nullptr);

struct Cpd {
  AttributeNode child;
  /// Parent order of the table; row index is mixed-radix over the parents'
  /// states with the last parent varying fastest.
  std::vector<Dependency> parents;
  std::vector<std::size_t> parent_cardinalities;
  std::vector<std::vector<double>> rows;

  std::size_t row_index(std::span<const std::size_t> parent_states) const;

  bool operator==(const Cpd&) const = default;
};

struct Prm {
  RelationalSchema schema;
  DependencyStructure structure;
  /// One per descriptive attribute, in AttributeIndex order.
  std::vector<Cpd> cpds;
  std::size_t k_max = 0;

  const Cpd& cpd(AttributeNode node) const;

  bool operator==(const Prm&) const = default;
};

/// Draws every CPD row from a symmetric Dirichlet(dirichlet_alpha).
Prm generate_cpds(const RelationalSchema& schema, const DependencyStructure& structure,
                  std::size_t k_max, double dirichlet_alpha, Rng& rng);

/// Schema-aware checks on an annotated structure: attribute graph acyclic,
/// chains composed and running child class -> parent class, chain length
/// within k_max, aggregator present iff the chain is multi-valued.
std::vector<std::string> validate_structure(const RelationalSchema& schema,
                                            const DependencyStructure& structure,
                                            std::size_t k_max);

/// validate_structure plus CPD coverage and normalisation.
std::vector<std::string> validate_prm(const Prm& prm);

}  // namespace prmgen
