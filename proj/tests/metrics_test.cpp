#include <gtest/gtest.h>

#include <cmath>

#include "prmgen/metrics.hpp"
#include "test_support.hpp"

namespace prmgen {
namespace {

using testing::kMovie;
using testing::kUser;
using testing::kVote;
using testing::make_chain;

RelationalSchema one_binary_class() {
  return assemble_schema({{"clazz0", "clazz0id", {make_attribute("att0", 2)}, {}}}, {});
}

Dataset single_column(std::vector<std::size_t> values) {
  ClassTable t;
  t.row_count = values.size();
  t.attributes = {std::move(values)};
  return {{t}};
}

RelationalSkeleton objects_only(std::vector<std::size_t> counts) {
  RelationalSkeleton sk;
  sk.object_counts = std::move(counts);
  return sk;
}

// Re-derives every count by walking the raw link list per row.
ContingencyCounts naive_counts(const Prm& prm, const RelationalSkeleton& sk, const Dataset& data) {
  ContingencyCounts out;
  for (const Cpd& cpd : prm.cpds) {
    const auto& child_attr = prm.schema.classes[cpd.child.class_index].attributes[cpd.child.attribute_index];
    FamilyCounts f;
    f.child = cpd.child;
    f.parents = cpd.parents;
    f.parent_cardinalities = cpd.parent_cardinalities;
    f.child_cardinality = child_attr.cardinality();
    f.counts.assign(cpd.rows.size() * f.child_cardinality, 0);
    for (std::size_t o = 0; o < sk.object_counts[cpd.child.class_index]; ++o) {
      std::size_t row = 0;
      for (std::size_t p = 0; p < cpd.parents.size(); ++p) {
        const auto& dep = cpd.parents[p];
        const auto objs = testing::brute_force_resolve(prm.schema, sk, {cpd.child.class_index, o}, dep.chain);
        std::vector<std::size_t> tally(cpd.parent_cardinalities[p], 0);
        for (const auto& obj : objs) ++tally[data.tables[obj.class_index].attributes[dep.parent.attribute_index][obj.object_id]];
        std::size_t state = 0;
        for (std::size_t s = 1; s < tally.size(); ++s) {
          if (tally[s] > tally[state]) state = s;
        }
        row = row * cpd.parent_cardinalities[p] + state;
      }
      ++f.counts[row * f.child_cardinality +
                 data.tables[cpd.child.class_index].attributes[cpd.child.attribute_index][o]];
    }
    out.families.push_back(std::move(f));
  }
  return out;
}

TEST(CountContingencies, DirectTally) {
  const RelationalSchema schema = one_binary_class();
  const auto counts = count_contingencies(schema, {}, objects_only({3}), single_column({0, 0, 1}));
  ASSERT_EQ(counts.families.size(), 1u);
  EXPECT_EQ(counts.families[0].counts, (std::vector<std::uint64_t>{2, 1}));
}

TEST(CountContingencies, DeterministicCopyIsDiagonal) {
  const RelationalSchema schema = assemble_schema(
      {{"clazz0", "clazz0id", {make_attribute("att0", 3), make_attribute("att1", 3)}, {}}}, {});
  const auto structure = testing::structure_of({testing::dependency({0, 1}, {0, 0}, SlotChain{0, {}})});
  ClassTable t;
  t.row_count = 6;
  t.attributes = {{0, 1, 2, 2, 1, 0}, {0, 1, 2, 2, 1, 0}};
  const auto counts = count_contingencies(schema, structure, objects_only({6}), Dataset{{t}});
  const FamilyCounts& f = counts.families[1];
  ASSERT_EQ(f.configurations(), 3u);
  for (std::size_t u = 0; u < 3; ++u) {
    for (std::size_t v = 0; v < 3; ++v) EXPECT_EQ(f.at(u, v), u == v ? 2u : 0u);
  }
}

TEST(CountContingencies, MatchesNaiveOracle) {
  Rng rng(12);
  for (int i = 0; i < 30; ++i) {
    const RelationalSchema schema = generate_schema(2 + i % 4, {}, rng);
    const auto s = assign_slot_chains(schema, generate_dependency_structure(schema, {}, rng), 3, rng);
    const Prm prm = generate_cpds(schema, s, effective_k_max(schema, 3), 1.0, rng);
    const auto sk = generate_skeleton(schema, {1.0, 150}, rng);
    const Dataset data = forward_sample(ground(prm, sk), rng);
    EXPECT_EQ(count_contingencies(schema, s, sk, data), naive_counts(prm, sk, data)) << "model " << i;
  }
}

TEST(CountContingencies, SchemaMismatchThrows) {
  EXPECT_THROW(count_contingencies(one_binary_class(), {}, objects_only({3, 1}), single_column({0, 0, 1})),
               StructuralError);
}

TEST(RbdScore, HandComputedHalf) {
  const auto counts = count_contingencies(one_binary_class(), {}, objects_only({1}), single_column({0}));
  EXPECT_NEAR(rbd_score(counts, DirichletPrior{}), std::log(0.5), 1e-9);
  EXPECT_NEAR(rbd_score(counts, DirichletPrior{}), -0.6931, 1e-4);
}

TEST(RbdScore, EmptyDataLeavesOnlyPenalty) {
  const RelationalSchema schema = testing::movie_schema();
  const auto structure = testing::structure_of(
      {testing::dependency({kVote, 0}, {kMovie, 0}, make_chain(schema, kVote, {"Movie"})),
       testing::dependency({kUser, 0}, {kMovie, 0}, make_chain(schema, kUser, {"~User", "Movie"}))});
  ClassTable movie{0, {}, {{}}}, user{0, {}, {{}}}, vote{0, {{}, {}}, {{}}};
  const Dataset empty{{movie, user, vote}};
  const auto counts = count_contingencies(schema, structure, objects_only({0, 0, 0}), empty);
  // rating: 3 configurations x length 1; age: 3 configurations x length 2.
  EXPECT_NEAR(rbd_score(counts, DirichletPrior{}), -(3.0 * 1 + 3.0 * 2), 1e-12);
  EXPECT_NEAR(rbd_score(counts, DirichletPrior{}, PenaltyMode::kPerFamily), -(1.0 + 2.0), 1e-12);
}

TEST(RbdScore, IntraClassParentsHaveNoPenalty) {
  const RelationalSchema schema = assemble_schema(
      {{"clazz0", "clazz0id", {make_attribute("att0", 2), make_attribute("att1", 2)}, {}}}, {});
  const auto structure = testing::structure_of({testing::dependency({0, 1}, {0, 0}, SlotChain{0, {}})});
  ClassTable t{0, {}, {{}, {}}};
  const auto counts = count_contingencies(schema, structure, objects_only({0}), Dataset{{t}});
  EXPECT_DOUBLE_EQ(rbd_score(counts, DirichletPrior{}), 0.0);
}

TEST(RbdScore, DecomposesIntoFamilies) {
  Rng rng(13);
  const RelationalSchema schema = generate_schema(3, {}, rng);
  const auto s = assign_slot_chains(schema, generate_dependency_structure(schema, {}, rng), 2, rng);
  const Prm prm = generate_cpds(schema, s, effective_k_max(schema, 2), 1.0, rng);
  const auto sk = generate_skeleton(schema, {1.0, 400}, rng);
  const auto counts = count_contingencies(schema, s, sk, forward_sample(ground(prm, sk), rng));
  double sum = 0.0;
  for (const auto& f : counts.families) sum += family_score(f, DirichletPrior{});
  const double total = rbd_score(counts, DirichletPrior{});
  EXPECT_TRUE(std::isfinite(total));
  EXPECT_NEAR(total, sum, 1e-9 * std::abs(total));
}

TEST(RbdScore, RejectsNonPositivePrior) {
  const auto counts = count_contingencies(one_binary_class(), {}, objects_only({1}), single_column({0}));
  EXPECT_THROW(rbd_score(counts, DirichletPrior{0.0, {}}), std::invalid_argument);
  DirichletPrior bad;
  bad.overrides[{0, 0}] = {1.0, -1.0};
  EXPECT_THROW(rbd_score(counts, bad), std::invalid_argument);
}

TEST(MarginalReport, DegenerateCpdsHaveZeroDistance) {
  const RelationalSchema schema = one_binary_class();
  Rng rng(14);
  Prm prm = generate_cpds(schema, {}, 0, 1.0, rng);
  prm.cpds[0].rows[0] = {0.0, 1.0};
  const auto sk = objects_only({500});
  const auto report = marginal_report(prm, sk, forward_sample(ground(prm, sk), rng));
  ASSERT_EQ(report.marginals.size(), 1u);
  EXPECT_DOUBLE_EQ(report.max_l1(), 0.0);
  EXPECT_TRUE(report.indegree_histograms.empty());
}

TEST(MarginalReport, LargeSampleCloseToCpd) {
  Rng rng(15);
  GenerationPolicy policy;
  policy.attr_lambda = 3.0;
  const RelationalSchema schema = generate_schema(1, policy, rng);
  const auto s = generate_dependency_structure(schema, policy, rng);
  const Prm prm = generate_cpds(schema, s, 0, 1.0, rng);
  const auto sk = generate_skeleton(schema, {1.0, 100'000}, rng);
  const auto report = marginal_report(prm, sk, forward_sample(ground(prm, sk), rng));
  ASSERT_FALSE(report.marginals.empty());
  EXPECT_LT(report.max_l1(), 0.02);
}

TEST(MarginalReport, TextFormat) {
  const RelationalSchema schema = testing::movie_schema();
  Rng rng(16);
  const Prm prm = generate_cpds(schema, {}, 0, 1.0, rng);
  const auto sk = testing::vote_skeleton();
  const std::string text = marginal_report(prm, sk, forward_sample(ground(prm, sk), rng)).to_text(schema);
  EXPECT_NE(text.find("objects.Vote = 9\n"), std::string::npos);
  EXPECT_NE(text.find("objects.total = 17\n"), std::string::npos);
  EXPECT_NE(text.find("indegree.User = 2:1 3:1 4:1\n"), std::string::npos);
  EXPECT_NE(text.find("marginal.Movie.genre.l1 = "), std::string::npos);
  EXPECT_NE(text.find("empty_aggregates = 0\n"), std::string::npos);
}

}  // namespace
}  // namespace prmgen
