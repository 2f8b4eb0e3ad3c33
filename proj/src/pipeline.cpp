#include "prmgen/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "prmgen/data_export.hpp"
#include "prmgen/errors.hpp"
#include "prmgen/metrics.hpp"
#include "prmgen/model_xml.hpp"

namespace prmgen {

void RunConfig::validate() const {
  if (classes < 1) throw std::invalid_argument("--classes must be at least 1");
  if (kmax < 1) throw std::invalid_argument("--kmax must be at least 1");
  if (!(alpha > 0.0) || !std::isfinite(alpha)) throw std::invalid_argument("--alpha must be positive");
  if (objects < 1) throw std::invalid_argument("--objects must be at least 1");
  if (!(dirichlet > 0.0) || !std::isfinite(dirichlet)) throw std::invalid_argument("--dirichlet must be positive");
  if (!(attr_lambda >= 0.0) || attr_lambda > 500.0) throw std::invalid_argument("--attr-lambda must be in [0, 500]");
  if (!(state_lambda >= 0.0) || state_lambda > 500.0) {
    throw std::invalid_argument("--state-lambda must be in [0, 500]");
  }
  if (!write_sql && !write_csv) throw std::invalid_argument("--format selects no output");
}

std::filesystem::path RunConfig::model_path() const { return model_out ? *model_out : out / "model.xml"; }

RunResult run_generation(const RunConfig& config) {
  config.validate();
  Rng rng(config.seed);
  GenerationPolicy policy;
  policy.attr_lambda = config.attr_lambda;
  policy.state_lambda = config.state_lambda;

  // Step 1: the PRM.
  RunResult result;
  RelationalSchema schema = generate_schema(config.classes, policy, rng);
  const DependencyStructure bare = generate_dependency_structure(schema, policy, rng);
  const std::size_t horizon = effective_k_max(schema, config.kmax);
  const DependencyStructure structure = assign_slot_chains(schema, bare, config.kmax, rng, &result.dropped);
  result.prm = std::make_shared<const Prm>(generate_cpds(schema, structure, horizon, config.dirichlet, rng));

  // Step 2: skeleton and ground network.
  result.skeleton = std::make_shared<const RelationalSkeleton>(
      generate_skeleton(result.prm->schema, CrpConfig{config.alpha, config.objects}, rng));
  const GroundBayesianNetwork gbn = ground(*result.prm, *result.skeleton);
  result.empty_aggregates = gbn.empty_aggregate_count();

  // Step 3: population.
  result.data = forward_sample(gbn, rng);
  return result;
}

std::string run_report(const RunConfig& config, const RunResult& result) {
  const Prm& prm = *result.prm;
  std::ostringstream os;
  os << "seed = " << config.seed << '\n';
  os << "classes = " << config.classes << '\n';
  os << "kmax.requested = " << config.kmax << '\n';
  os << "kmax.effective = " << prm.k_max << '\n';
  os << "alpha = " << config.alpha << '\n';
  os << "objects.requested = " << config.objects << '\n';
  os << "dirichlet = " << config.dirichlet << '\n';
  os << "attributes = " << prm.schema.attribute_count() << '\n';
  os << "dependencies = " << prm.structure.dependencies.size() << '\n';
  for (const auto& d : prm.structure.dependencies) {
    os << "dependency = " << describe(prm.schema, d) << " [length " << d.chain.length() << "]\n";
  }
  os << "dropped = " << result.dropped.size() << '\n';
  for (const auto& d : result.dropped) os << "dropped.reason = " << d << '\n';
  const auto& passes = result.skeleton->pass_sizes;
  os << "skeleton.passes = " << passes.size() << '\n';
  os << "skeleton.largest_pass = " << (passes.empty() ? 0 : *std::max_element(passes.begin(), passes.end()))
     << '\n';
  os << marginal_report(prm, *result.skeleton, result.data).to_text(prm.schema);
  const auto counts = count_contingencies(prm.schema, prm.structure, *result.skeleton, result.data);
  char score[64];
  std::snprintf(score, sizeof score, "%.6f", rbd_score(counts, DirichletPrior{}));
  os << "rbd_score = " << score << '\n';
  return os.str();
}

namespace {

void write_file(const std::filesystem::path& path, const std::string& content) {
  if (path.has_parent_path()) {
    std::error_code ec;
    std::filesystem::create_directories(path.parent_path(), ec);
    if (ec) throw IoError(path.parent_path().string() + ": " + ec.message());
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError(path.string() + ": cannot open for writing");
  out << content;
  out.flush();
  if (!out) throw IoError(path.string() + ": write failed");
}

}  // namespace

std::vector<std::filesystem::path> write_outputs(const RunConfig& config, const RunResult& result) {
  const Prm& prm = *result.prm;
  std::vector<std::filesystem::path> written;
  write_file(config.model_path(), serialize_prm(prm));
  written.push_back(config.model_path());
  if (config.write_sql) {
    const auto path = config.out / "data.sql";
    write_file(path, emit_sql(prm.schema, result.data));
    written.push_back(path);
  }
  if (config.write_csv) {
    for (auto& p : emit_csv(prm.schema, result.data, config.out)) written.push_back(std::move(p));
  }
  const auto report = config.out / "report.txt";
  write_file(report, run_report(config, result));
  written.push_back(report);
  return written;
}

}  // namespace prmgen
