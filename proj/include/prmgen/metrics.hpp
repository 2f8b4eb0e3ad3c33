#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "prmgen/dependency.hpp"
#include "prmgen/gbn.hpp"
#include "prmgen/skeleton.hpp"

namespace prmgen {

/// Sufficient statistics of one attribute family.
struct FamilyCounts {
  AttributeNode child;
  std::vector<Dependency> parents;
  std::vector<std::size_t> parent_cardinalities;
  std::size_t child_cardinality = 0;
  /// counts[u * child_cardinality + v]: instantiations with parent
  /// configuration u and child state v.
  std::vector<std::uint64_t> counts;

  std::size_t configurations() const { return child_cardinality == 0 ? 0 : counts.size() / child_cardinality; }
  std::uint64_t at(std::size_t u, std::size_t v) const { return counts[u * child_cardinality + v]; }

  bool operator==(const FamilyCounts&) const = default;
};

struct ContingencyCounts {
  /// One family per descriptive attribute, in AttributeIndex order.
  std::vector<FamilyCounts> families;

  bool operator==(const ContingencyCounts&) const = default;
};

/// Dirichlet pseudo-counts. Families without an override use `symmetric`
/// for every cell.
struct DirichletPrior {
  double symmetric = 1.0;
  /// Flattened like FamilyCounts::counts.
  std::map<AttributeNode, std::vector<double>> overrides;

  double pseudo_count(const FamilyCounts& family, std::size_t u, std::size_t v) const;
};

/// How the slot-chain length penalty is accumulated.
enum class PenaltyMode {
  /// Once per parent configuration of every family.
  kPerConfiguration,
  /// Once per family.
  kPerFamily,
};

/// Tallies child states against parent configurations, evaluating each
/// parent through its slot chain and aggregator on the sampled values.
/// Throws StructuralError when the inputs do not share a schema.
ContingencyCounts count_contingencies(const RelationalSchema& schema, const DependencyStructure& structure,
                                      const RelationalSkeleton& skeleton, const Dataset& data);

/// Log Dirichlet-multinomial marginal likelihood of one family, minus the
/// chain-length penalty of its parents.
double family_score(const FamilyCounts& family, const DirichletPrior& prior,
                    PenaltyMode mode = PenaltyMode::kPerConfiguration);

/// Relational Bayesian Dirichlet score: the sum of family scores.
/// Throws std::invalid_argument for non-positive pseudo-counts.
double rbd_score(const ContingencyCounts& counts, const DirichletPrior& prior,
                 PenaltyMode mode = PenaltyMode::kPerConfiguration);

struct AttributeMarginal {
  AttributeNode node;
  std::vector<double> expected;
  std::vector<double> empirical;
  double l1 = 0.0;
};

struct MarginalReport {
  std::vector<std::size_t> object_counts;
  /// Parentless attributes only.
  std::vector<AttributeMarginal> marginals;
  /// Indegree -> number of objects, for every class referenced by some slot.
  std::map<std::size_t, std::map<std::size_t, std::size_t>> indegree_histograms;
  /// (object, dependency) pairs whose multi-valued chain reaches nothing.
  std::size_t empty_aggregate_events = 0;

  double max_l1() const;
  /// `key = value` lines.
  std::string to_text(const RelationalSchema& schema) const;
};

MarginalReport marginal_report(const Prm& prm, const RelationalSkeleton& skeleton, const Dataset& data);

}  // namespace prmgen
