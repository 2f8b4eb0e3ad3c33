// Command-line front end: generates a PRM, a skeleton and a sampled database.
#include <CLI11.hpp>

#include <iostream>
#include <sstream>
#include <string>

#include "prmgen/errors.hpp"
#include "prmgen/pipeline.hpp"

namespace {

constexpr int kUsageError = 2;
constexpr int kGenerationError = 1;

// Accepts "sql", "csv", "both" or a comma list of sql/csv.
bool apply_format(const std::string& spec, prmgen::RunConfig& config) {
  config.write_sql = config.write_csv = false;
  if (spec == "both") {
    config.write_sql = config.write_csv = true;
    return true;
  }
  std::stringstream ss(spec);
  std::string item;
  bool any = false;
  while (std::getline(ss, item, ',')) {
    if (item == "sql") {
      config.write_sql = true;
    } else if (item == "csv") {
      config.write_csv = true;
    } else {
      return false;
    }
    any = true;
  }
  return any;
}

}  // namespace

int main(int argc, char** argv) {
  prmgen::RunConfig config;
  std::string format = "sql";
  std::string model_out;
  bool print_report = false;

  CLI::App app{"Random PRM benchmark generator"};
  app.add_option("--classes", config.classes, "Number of classes")->check(CLI::PositiveNumber);
  app.add_option("--kmax", config.kmax, "Maximum slot chain length")->check(CLI::PositiveNumber);
  app.add_option("--alpha", config.alpha, "CRP concentration")->check(CLI::PositiveNumber);
  app.add_option("--objects", config.objects, "Target number of objects")->check(CLI::PositiveNumber);
  app.add_option("--seed", config.seed, "Random seed");
  app.add_option("--dirichlet", config.dirichlet, "Dirichlet parameter of CPD rows")->check(CLI::PositiveNumber);
  app.add_option("--attr-lambda", config.attr_lambda, "Poisson mean of extra attributes")
      ->check(CLI::Range(0.0, 500.0));
  app.add_option("--state-lambda", config.state_lambda, "Poisson mean of extra states")
      ->check(CLI::Range(0.0, 500.0));
  app.add_option("--out", config.out, "Output directory");
  app.add_option("--format", format, "sql, csv, both or a comma list");
  app.add_option("--model-out", model_out, "Model document path (default <out>/model.xml)");
  app.add_flag("--report", print_report, "Print the report to stdout");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kUsageError;
  }
  if (!apply_format(format, config)) {
    std::cerr << "usage error: --format must be sql, csv, both or a comma list of sql and csv\n";
    return kUsageError;
  }
  if (!model_out.empty()) config.model_out = model_out;
  try {
    config.validate();
  } catch (const std::invalid_argument& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return kUsageError;
  }

  try {
    const auto result = prmgen::run_generation(config);
    for (const auto& path : prmgen::write_outputs(config, result)) std::cerr << "wrote " << path.string() << '\n';
    if (print_report) std::cout << prmgen::run_report(config, result);
  } catch (const prmgen::IoError& e) {
    std::cerr << "io error: " << e.what() << '\n';
    return kGenerationError;
  } catch (const prmgen::RejectionBudgetExceeded& e) {
    std::cerr << "generation error: " << e.what() << '\n';
    return kGenerationError;
  } catch (const std::exception& e) {
    std::cerr << "generation error: " << e.what() << '\n';
    return kGenerationError;
  }
  return 0;
}
