#include "prmgen/skeleton.hpp"

#include <algorithm>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "prmgen/errors.hpp"

namespace prmgen {

namespace {
constexpr std::size_t kUnassigned = std::numeric_limits<std::size_t>::max();
}

std::size_t RelationalSkeleton::total_objects() const {
  return std::accumulate(object_counts.begin(), object_counts.end(), std::size_t{0});
}

SkeletonIndex::SkeletonIndex(const RelationalSchema& schema, const RelationalSkeleton& skeleton)
    : counts_(skeleton.object_counts) {
  if (counts_.size() != schema.class_count()) {
    throw StructuralError("SkeletonIndex: skeleton class count differs from schema");
  }
  targets_.resize(schema.slots.size());
  referrers_.resize(schema.slots.size());
  indegree_.resize(counts_.size());
  for (std::size_t c = 0; c < counts_.size(); ++c) indegree_[c].assign(counts_[c], 0);
  for (std::size_t s = 0; s < schema.slots.size(); ++s) {
    targets_[s].assign(counts_[schema.slots[s].owner_class], kUnassigned);
    referrers_[s].resize(counts_[schema.slots[s].referenced_class]);
  }
  for (const Link& l : skeleton.links) {
    if (l.slot >= schema.slots.size()) throw StructuralError("SkeletonIndex: unknown slot");
    const auto& slot = schema.slots[l.slot];
    if (l.from.class_index != slot.owner_class || l.to.class_index != slot.referenced_class) {
      throw StructuralError("SkeletonIndex: link oriented against its slot " + slot.name);
    }
    if (l.from.object_id >= counts_[l.from.class_index] || l.to.object_id >= counts_[l.to.class_index]) {
      throw StructuralError("SkeletonIndex: link endpoint out of range");
    }
    auto& t = targets_[l.slot][l.from.object_id];
    if (t != kUnassigned) throw StructuralError("SkeletonIndex: object has two targets for " + slot.name);
    t = l.to.object_id;
    referrers_[l.slot][l.to.object_id].push_back(l.from.object_id);
    ++indegree_[l.to.class_index][l.to.object_id];
  }
  for (std::size_t s = 0; s < targets_.size(); ++s) {
    if (std::find(targets_[s].begin(), targets_[s].end(), kUnassigned) != targets_[s].end()) {
      throw StructuralError("SkeletonIndex: unassigned slot " + schema.slots[s].name);
    }
    for (auto& r : referrers_[s]) std::sort(r.begin(), r.end());
  }
}

std::size_t SkeletonIndex::indegree(ObjectRef object) const {
  return indegree_.at(object.class_index).at(object.object_id);
}

void CrpConfig::validate() const {
  if (!(alpha > 0.0)) throw std::invalid_argument("CRP alpha must be positive");
  if (n_total == 0) throw std::invalid_argument("CRP n_total must be positive");
}

double crp_new_probability(std::size_t n_p, double alpha) {
  if (n_p == 0) throw std::invalid_argument("crp_new_probability: n_p counts the linking parent");
  if (!(alpha > 0.0)) throw std::invalid_argument("crp_new_probability: alpha must be positive");
  return alpha / (static_cast<double>(n_p - 1) + alpha);
}

std::optional<std::size_t> crp_choose(std::span<const std::size_t> indegrees, std::size_t n_p,
                                      double alpha, Rng& rng) {
  const double p_new = crp_new_probability(n_p, alpha);
  if (rng.uniform() < p_new || indegrees.empty()) return std::nullopt;
  const std::size_t total = std::accumulate(indegrees.begin(), indegrees.end(), std::size_t{0});
  if (total == 0) return rng.index(indegrees.size());
  std::size_t pick = rng.index(total);
  for (std::size_t i = 0; i < indegrees.size(); ++i) {
    if (pick < indegrees[i]) return i;
    pick -= indegrees[i];
  }
  return indegrees.size() - 1;
}

namespace {

class SkeletonBuilder {
 public:
  SkeletonBuilder(const RelationalSchema& schema, const CrpConfig& cfg, Rng& rng)
      : schema_(schema),
        cfg_(cfg),
        rng_(rng),
        counts_(schema.class_count(), 0),
        urns_(schema.class_count()),
        targets_(schema.slots.size()) {}

  RelationalSkeleton run() {
    std::vector<std::size_t> roots;
    for (std::size_t c = 0; c < schema_.class_count(); ++c) {
      if (schema_.class_dag.parents(c).empty()) roots.push_back(c);
    }
    if (roots.empty()) throw StructuralError("generate_skeleton: class graph has no root");

    RelationalSkeleton out;
    while (total_ < cfg_.n_total) {
      const std::size_t root = roots.size() > 1 ? roots[rng_.index(roots.size())] : roots.front();
      const std::size_t before = total_;
      visit(root, create(root));
      out.pass_sizes.push_back(total_ - before);
    }

    out.object_counts = counts_;
    for (std::size_t s = 0; s < targets_.size(); ++s) {
      const auto& slot = schema_.slots[s];
      for (std::size_t owner = 0; owner < targets_[s].size(); ++owner) {
        out.links.push_back({s, {slot.owner_class, owner}, {slot.referenced_class, targets_[s][owner]}});
      }
    }
    return out;
  }

 private:
  std::size_t create(std::size_t cls) {
    const std::size_t id = counts_[cls]++;
    ++total_;
    for (std::size_t s : schema_.classes[cls].reference_slots) targets_[s].push_back(kUnassigned);
    return id;
  }

  void visit(std::size_t cls, std::size_t id) {
    const std::size_t n_p = counts_[cls];
    for (std::size_t s : schema_.classes[cls].reference_slots) {
      const std::size_t child = schema_.slots[s].referenced_class;
      auto& urn = urns_[child];
      const bool draw_new = rng_.uniform() < crp_new_probability(n_p, cfg_.alpha);
      const bool fresh = urn.empty() || (draw_new && total_ < cfg_.n_total);
      std::size_t target;
      if (fresh) {
        target = create(child);
        targets_[s][id] = target;
        urn.push_back(target);
        visit(child, target);
      } else {
        // The urn holds one entry per incoming link, so a uniform pick is
        // proportional to indegree.
        target = urn[rng_.index(urn.size())];
        targets_[s][id] = target;
        urn.push_back(target);
      }
    }
  }

  const RelationalSchema& schema_;
  const CrpConfig& cfg_;
  Rng& rng_;
  std::vector<std::size_t> counts_;
  std::vector<std::vector<std::size_t>> urns_;
  std::vector<std::vector<std::size_t>> targets_;
  std::size_t total_ = 0;
};

}  // namespace

RelationalSkeleton generate_skeleton(const RelationalSchema& schema, const CrpConfig& cfg, Rng& rng) {
  cfg.validate();
  return SkeletonBuilder(schema, cfg, rng).run();
}

std::vector<SkeletonFinding> validate_skeleton(const RelationalSkeleton& sk,
                                               const RelationalSchema& schema) {
  std::vector<SkeletonFinding> out;
  if (sk.object_counts.size() != schema.class_count()) {
    out.push_back({SkeletonIssue::kObjectOutOfRange, "skeleton class count differs from schema"});
    return out;
  }
  std::vector<std::size_t> offsets(schema.class_count() + 1, 0);
  for (std::size_t c = 0; c < schema.class_count(); ++c) offsets[c + 1] = offsets[c] + sk.object_counts[c];

  std::vector<std::vector<std::size_t>> assigned(schema.slots.size());
  for (std::size_t s = 0; s < schema.slots.size(); ++s) {
    assigned[s].assign(sk.object_counts[schema.slots[s].owner_class], 0);
  }
  std::vector<std::vector<std::size_t>> children(offsets.back());
  for (const Link& l : sk.links) {
    if (l.slot >= schema.slots.size() || l.from.class_index >= schema.class_count() ||
        l.to.class_index >= schema.class_count() ||
        l.from.object_id >= sk.object_counts[l.from.class_index] ||
        l.to.object_id >= sk.object_counts[l.to.class_index]) {
      out.push_back({SkeletonIssue::kObjectOutOfRange, "link refers to a missing slot or object"});
      continue;
    }
    const auto& slot = schema.slots[l.slot];
    children[offsets[l.from.class_index] + l.from.object_id].push_back(offsets[l.to.class_index] +
                                                                       l.to.object_id);
    if (l.from.class_index != slot.owner_class || l.to.class_index != slot.referenced_class) {
      out.push_back({SkeletonIssue::kMisoriented, "link through " + slot.name + " runs from " +
                                                      schema.classes[l.from.class_index].name + " to " +
                                                      schema.classes[l.to.class_index].name});
      continue;
    }
    if (++assigned[l.slot][l.from.object_id] == 2) {
      out.push_back({SkeletonIssue::kMultipleTargets,
                     schema.classes[slot.owner_class].name + " object " + std::to_string(l.from.object_id) +
                         " has several targets through " + slot.name});
    }
  }
  for (std::size_t s = 0; s < schema.slots.size(); ++s) {
    for (std::size_t id = 0; id < assigned[s].size(); ++id) {
      if (assigned[s][id] == 0) {
        out.push_back({SkeletonIssue::kUnassignedSlot, schema.classes[schema.slots[s].owner_class].name +
                                                           " object " + std::to_string(id) +
                                                           " has no target through " + schema.slots[s].name});
      }
    }
  }
  try {
    (void)topological_order(children);
  } catch (const CyclicGraphError&) {
    out.push_back({SkeletonIssue::kCycle, "object graph has a cycle"});
  }
  return out;
}

}  // namespace prmgen
