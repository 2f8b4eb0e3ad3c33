#pragma once

#include <cstddef>
#include <memory>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "prmgen/dependency.hpp"
#include "prmgen/rng.hpp"
#include "prmgen/skeleton.hpp"

namespace prmgen {

/// Objects reached from `start` by walking `chain`: a forward step maps each
/// object to its single target, an inverse step to every object referring to
/// it. Returned sorted and without duplicates.
std::vector<ObjectRef> resolve_slot_chain(const SkeletonIndex& index, const RelationalSchema& schema,
                                          ObjectRef start, const SlotChain& chain);

/// Most frequent state, ties to the lowest index; an empty multiset gives 0.
std::size_t aggregate_mode(std::span<const std::size_t> values, std::size_t domain_size);

/// Deterministic summary of a multi-valued parent set.
struct AggregateParent {
  Aggregator aggregator = Aggregator::kMode;
  /// Node ids of the contributing object attributes; may be empty.
  std::vector<std::size_t> nodes;
  std::size_t domain_size = 0;
};

using GbnParent = std::variant<std::size_t, AggregateParent>;

struct GbnNode {
  ObjectRef object;
  std::size_t attribute_index = 0;
  /// Aligned with the CPD's parent order.
  std::vector<GbnParent> parents;
};

/// One node per (object, descriptive attribute) of a skeleton, wired to the
/// object-level parents of the PRM dependencies.
class GroundBayesianNetwork {
 public:
  GroundBayesianNetwork(std::shared_ptr<const Prm> prm, std::shared_ptr<const RelationalSkeleton> skeleton,
                        std::vector<GbnNode> nodes, std::vector<std::size_t> order);

  const Prm& prm() const { return *prm_; }
  const RelationalSkeleton& skeleton() const { return *skeleton_; }
  std::span<const GbnNode> nodes() const { return nodes_; }
  /// Ascending-index topological order of the node graph.
  std::span<const std::size_t> topological_order() const { return order_; }
  /// Node id of attribute `attribute_index` of `object`.
  std::size_t node_id(ObjectRef object, std::size_t attribute_index) const;
  const Cpd& cpd(std::size_t node_id) const;
  /// Aggregate parents whose contributing set is empty.
  std::size_t empty_aggregate_count() const;

 private:
  std::shared_ptr<const Prm> prm_;
  std::shared_ptr<const RelationalSkeleton> skeleton_;
  std::vector<GbnNode> nodes_;
  std::vector<std::size_t> order_;
  std::vector<std::size_t> class_offsets_;
  std::vector<std::size_t> cpd_of_node_;
};

/// Grounds `prm` over `skeleton`. Throws StructuralError when the skeleton
/// does not fit the schema and CyclicGraphError if the ground graph has a
/// cycle (impossible for a valid PRM).
GroundBayesianNetwork ground(const Prm& prm, const RelationalSkeleton& skeleton);

/// Sampled values and foreign keys, column-major per class.
struct ClassTable {
  std::size_t row_count = 0;
  /// [position in ClassDef::reference_slots][row] -> target object id.
  std::vector<std::vector<std::size_t>> foreign_keys;
  /// [attribute][row] -> state index.
  std::vector<std::vector<std::size_t>> attributes;

  bool operator==(const ClassTable&) const = default;
};

struct Dataset {
  std::vector<ClassTable> tables;

  std::size_t total_rows() const;
  bool operator==(const Dataset&) const = default;
};

/// Samples every node in topological order from the CPD row selected by its
/// parents' states; aggregate parents are evaluated from already sampled
/// values, an empty set counting as state 0.
Dataset forward_sample(const GroundBayesianNetwork& gbn, Rng& rng);

/// Referential-integrity and domain violations; empty iff consistent.
std::vector<std::string> validate_dataset(const RelationalSchema& schema, const Dataset& data);

}  // namespace prmgen
