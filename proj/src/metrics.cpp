#include "prmgen/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>
#include <stdexcept>

#include "prmgen/errors.hpp"

namespace prmgen {

double DirichletPrior::pseudo_count(const FamilyCounts& family, std::size_t u, std::size_t v) const {
  if (auto it = overrides.find(family.child); it != overrides.end()) {
    return it->second.at(u * family.child_cardinality + v);
  }
  return symmetric;
}

namespace {

void check_layout(const RelationalSchema& schema, const RelationalSkeleton& skeleton, const Dataset& data) {
  if (skeleton.object_counts.size() != schema.class_count() || data.tables.size() != schema.class_count()) {
    throw StructuralError("class count differs between schema, skeleton and dataset");
  }
  for (std::size_t c = 0; c < schema.class_count(); ++c) {
    const auto& t = data.tables[c];
    if (t.row_count != skeleton.object_counts[c] || t.attributes.size() != schema.classes[c].attributes.size()) {
      throw StructuralError(schema.classes[c].name + ": dataset does not match schema and skeleton");
    }
    for (const auto& col : t.attributes) {
      if (col.size() != t.row_count) throw StructuralError(schema.classes[c].name + ": ragged attribute column");
    }
  }
}

}  // namespace

ContingencyCounts count_contingencies(const RelationalSchema& schema, const DependencyStructure& structure,
                                      const RelationalSkeleton& skeleton, const Dataset& data) {
  check_layout(schema, skeleton, data);
  const SkeletonIndex index(schema, skeleton);
  const AttributeIndex attrs(schema);

  ContingencyCounts out;
  std::vector<std::size_t> states;
  std::vector<std::size_t> pool;
  for (std::size_t f = 0; f < attrs.size(); ++f) {
    const AttributeNode child = attrs.node(f);
    FamilyCounts fam;
    fam.child = child;
    fam.parents = structure.parents_of(child);
    fam.child_cardinality = schema.classes[child.class_index].attributes[child.attribute_index].cardinality();
    std::size_t configs = 1;
    for (const auto& p : fam.parents) {
      if (p.chain.source_class != child.class_index || !p.chain.is_well_composed(schema)) {
        throw StructuralError("count_contingencies: chain does not start at the child's class");
      }
      const auto card = schema.classes.at(p.parent.class_index).attributes.at(p.parent.attribute_index).cardinality();
      fam.parent_cardinalities.push_back(card);
      configs *= card;
    }
    fam.counts.assign(configs * fam.child_cardinality, 0);

    const auto& child_col = data.tables[child.class_index].attributes[child.attribute_index];
    for (std::size_t obj = 0; obj < child_col.size(); ++obj) {
      states.clear();
      for (std::size_t k = 0; k < fam.parents.size(); ++k) {
        const auto& p = fam.parents[k];
        const auto reached = resolve_slot_chain(index, schema, {child.class_index, obj}, p.chain);
        const auto& col = data.tables[p.parent.class_index].attributes[p.parent.attribute_index];
        pool.clear();
        for (ObjectRef o : reached) pool.push_back(col[o.object_id]);
        states.push_back(p.chain.is_multi_valued() ? aggregate_mode(pool, fam.parent_cardinalities[k])
                                                   : pool.at(0));
      }
      std::size_t u = 0;
      for (std::size_t k = 0; k < states.size(); ++k) u = u * fam.parent_cardinalities[k] + states[k];
      ++fam.counts[u * fam.child_cardinality + child_col[obj]];
    }
    out.families.push_back(std::move(fam));
  }
  return out;
}

double family_score(const FamilyCounts& family, const DirichletPrior& prior, PenaltyMode mode) {
  double score = 0.0;
  const std::size_t configs = family.configurations();
  for (std::size_t u = 0; u < configs; ++u) {
    double alpha_sum = 0.0;
    double count_sum = 0.0;
    for (std::size_t v = 0; v < family.child_cardinality; ++v) {
      const double a = prior.pseudo_count(family, u, v);
      if (!(a > 0.0)) throw std::invalid_argument("rbd_score: Dirichlet pseudo-counts must be positive");
      const double c = static_cast<double>(family.at(u, v));
      alpha_sum += a;
      count_sum += c;
      score += std::lgamma(a + c) - std::lgamma(a);
    }
    score += std::lgamma(alpha_sum) - std::lgamma(alpha_sum + count_sum);
  }
  double chain_length = 0.0;
  for (const auto& p : family.parents) chain_length += static_cast<double>(p.chain.length());
  const double repeats = mode == PenaltyMode::kPerConfiguration ? static_cast<double>(configs) : 1.0;
  return score - repeats * chain_length;
}

double rbd_score(const ContingencyCounts& counts, const DirichletPrior& prior, PenaltyMode mode) {
  double total = 0.0;
  for (const auto& fam : counts.families) total += family_score(fam, prior, mode);
  return total;
}

double MarginalReport::max_l1() const {
  double m = 0.0;
  for (const auto& a : marginals) m = std::max(m, a.l1);
  return m;
}

namespace {
std::string fixed(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6f", x);
  return buf;
}
}  // namespace

std::string MarginalReport::to_text(const RelationalSchema& schema) const {
  std::ostringstream os;
  std::size_t total = 0;
  for (std::size_t c = 0; c < object_counts.size(); ++c) {
    os << "objects." << schema.classes[c].name << " = " << object_counts[c] << '\n';
    total += object_counts[c];
  }
  os << "objects.total = " << total << '\n';
  for (const auto& m : marginals) {
    os << "marginal." << attribute_path(schema, m.node) << ".l1 = " << fixed(m.l1) << '\n';
  }
  os << "marginal.max_l1 = " << fixed(max_l1()) << '\n';
  for (const auto& [cls, hist] : indegree_histograms) {
    os << "indegree." << schema.classes[cls].name << " =";
    for (const auto& [deg, n] : hist) os << ' ' << deg << ':' << n;
    os << '\n';
  }
  os << "empty_aggregates = " << empty_aggregate_events << '\n';
  return os.str();
}

MarginalReport marginal_report(const Prm& prm, const RelationalSkeleton& skeleton, const Dataset& data) {
  const auto& schema = prm.schema;
  check_layout(schema, skeleton, data);
  const SkeletonIndex index(schema, skeleton);

  MarginalReport report;
  report.object_counts = skeleton.object_counts;
  for (const Cpd& cpd : prm.cpds) {
    if (!cpd.parents.empty()) continue;
    AttributeMarginal m;
    m.node = cpd.child;
    m.expected = cpd.rows.at(0);
    m.empirical.assign(m.expected.size(), 0.0);
    const auto& col = data.tables[cpd.child.class_index].attributes[cpd.child.attribute_index];
    for (std::size_t v : col) m.empirical.at(v) += 1.0;
    for (std::size_t v = 0; v < m.empirical.size(); ++v) {
      if (!col.empty()) m.empirical[v] /= static_cast<double>(col.size());
      m.l1 += std::abs(m.empirical[v] - m.expected[v]);
    }
    report.marginals.push_back(std::move(m));
  }

  for (std::size_t c = 0; c < schema.class_count(); ++c) {
    if (schema.incoming_slots(c).empty()) continue;
    auto& hist = report.indegree_histograms[c];
    for (std::size_t obj = 0; obj < skeleton.object_counts[c]; ++obj) ++hist[index.indegree({c, obj})];
  }

  for (const auto& dep : prm.structure.dependencies) {
    if (!dep.chain.is_multi_valued()) continue;
    for (std::size_t obj = 0; obj < skeleton.object_counts[dep.child.class_index]; ++obj) {
      if (resolve_slot_chain(index, schema, {dep.child.class_index, obj}, dep.chain).empty()) {
        ++report.empty_aggregate_events;
      }
    }
  }
  return report;
}

}  // namespace prmgen
