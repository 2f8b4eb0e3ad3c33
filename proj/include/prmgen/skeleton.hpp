#pragma once

#include <compare>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "prmgen/rng.hpp"
#include "prmgen/schema.hpp"

namespace prmgen {

struct ObjectRef {
  std::size_t class_index = 0;
  std::size_t object_id = 0;

  auto operator<=>(const ObjectRef&) const = default;
};

/// `from` holds a foreign key through `slot` whose value is `to`.
struct Link {
  std::size_t slot = 0;
  ObjectRef from;
  ObjectRef to;

  auto operator<=>(const Link&) const = default;
};

/// Objects per class (ids 0..count-1) and the links between them.
struct RelationalSkeleton {
  std::vector<std::size_t> object_counts;
  /// Sorted by (slot, from, to).
  std::vector<Link> links;
  /// Objects created by each generation pass, in order. Empty for skeletons
  /// that were not produced by generate_skeleton.
  std::vector<std::size_t> pass_sizes;

  std::size_t total_objects() const;

  bool operator==(const RelationalSkeleton&) const = default;
};

/// Lookup tables over a valid skeleton: the target of each (slot, owner) and
/// the sorted referrers of each (slot, target).
class SkeletonIndex {
 public:
  /// Throws StructuralError when a link is mis-oriented, out of range, or
  /// some (object, slot) has no unique target.
  SkeletonIndex(const RelationalSchema& schema, const RelationalSkeleton& skeleton);

  std::size_t object_count(std::size_t class_index) const { return counts_[class_index]; }
  std::size_t target(std::size_t slot, std::size_t owner_id) const { return targets_[slot][owner_id]; }
  const std::vector<std::size_t>& referrers(std::size_t slot, std::size_t target_id) const {
    return referrers_[slot][target_id];
  }
  /// Number of links (over every slot) pointing at the object.
  std::size_t indegree(ObjectRef object) const;

 private:
  std::vector<std::size_t> counts_;
  std::vector<std::vector<std::size_t>> targets_;
  std::vector<std::vector<std::vector<std::size_t>>> referrers_;
  std::vector<std::vector<std::size_t>> indegree_;
};

struct CrpConfig {
  double alpha = 1.0;
  std::size_t n_total = 1;

  void validate() const;
};

/// alpha / (n_p - 1 + alpha): probability that the n_p-th parent object
/// links a fresh child.
double crp_new_probability(std::size_t n_p, double alpha);

/// One Chinese-restaurant-process decision. Returns std::nullopt for a fresh
/// object; otherwise the index into `indegrees` of the existing object picked
/// with probability proportional to its indegree. An empty candidate list
/// always yields a fresh object; all-zero indegrees are picked uniformly.
std::optional<std::size_t> crp_choose(std::span<const std::size_t> indegrees, std::size_t n_p,
                                      double alpha, Rng& rng);

/// Grows a skeleton pass by pass. Each pass creates an object of a root
/// class (one without referrers in the class graph, picked uniformly when
/// there are several) and walks the class graph depth first; every slot of a
/// freshly created object is linked to a new or an existing object of the
/// referenced class using crp_choose. Passes continue until n_total objects
/// exist. Once the target is met mid-pass, remaining links attach to existing
/// objects whenever the referenced class has any, so the total never exceeds
/// n_total + N - 1.
RelationalSkeleton generate_skeleton(const RelationalSchema& schema, const CrpConfig& cfg, Rng& rng);

enum class SkeletonIssue {
  kObjectOutOfRange,
  kMisoriented,
  kMultipleTargets,
  kUnassignedSlot,
  kCycle,
};

struct SkeletonFinding {
  SkeletonIssue issue;
  std::string message;
};

/// Checks the k-partite skeleton properties (acyclic, consistently oriented
/// links, one target per object and slot) and that every slot is assigned.
std::vector<SkeletonFinding> validate_skeleton(const RelationalSkeleton& sk,
                                               const RelationalSchema& schema);

}  // namespace prmgen
