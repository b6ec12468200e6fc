#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

namespace fastwdm {

struct CriterionResult {
  int id = 0;
  std::string name;
  bool pass = false;
  std::string measured;
  std::string expected;
};

struct AcceptanceOptions {
  /// Must hold short.json and long.json.
  std::filesystem::path scenario_dir;
  std::uint64_t seed = 1;
  int sweep_runs = 100;
  int random_graphs = 200;
  int messages = 10000;
  int sequences = 10000;
  int max_sequence_length = 50;
  double telemetry_days = 7.0;
};

/// Runs criteria 1..10. Throws ConfigError when the directory or either
/// bundled scenario file is missing; any other failure inside a criterion
/// marks that criterion red.
std::vector<CriterionResult> run_acceptance(const AcceptanceOptions& options);

/// One line per criterion.
std::string render_results(const std::vector<CriterionResult>& results);

}  // namespace fastwdm
