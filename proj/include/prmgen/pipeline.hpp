#pragma once

#include <cstdint>
#include <filesystem>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "prmgen/gbn.hpp"
#include "prmgen/skeleton.hpp"

namespace prmgen {

struct RunConfig {
  std::size_t classes = 4;
  std::size_t kmax = 3;
  /// CRP concentration.
  double alpha = 1.0;
  /// Target number of objects over all classes.
  std::size_t objects = 2500;
  std::uint64_t seed = 1;
  /// Symmetric Dirichlet parameter of every CPD row.
  double dirichlet = 1.0;
  double attr_lambda = 1.0;
  double state_lambda = 1.0;
  std::filesystem::path out = "out";
  bool write_sql = true;
  bool write_csv = false;
  /// Defaults to <out>/model.xml.
  std::optional<std::filesystem::path> model_out;

  /// Throws std::invalid_argument naming the offending field.
  void validate() const;
  std::filesystem::path model_path() const;
};

struct RunResult {
  std::shared_ptr<const Prm> prm;
  std::shared_ptr<const RelationalSkeleton> skeleton;
  Dataset data;
  /// Dependencies lost because no slot chain linked their classes.
  std::vector<std::string> dropped;
  std::size_t empty_aggregates = 0;
};

/// Generates the PRM, then the skeleton and ground network, then samples the
/// data, all from one generator seeded with config.seed.
RunResult run_generation(const RunConfig& config);

/// Deterministic key = value summary of a run.
std::string run_report(const RunConfig& config, const RunResult& result);

/// Writes the model document, the requested data files and report.txt.
/// Returns the written paths. Throws IoError on failure.
std::vector<std::filesystem::path> write_outputs(const RunConfig& config, const RunResult& result);

}  // namespace prmgen
