#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "nnea/problems.hpp"

namespace nnea {

// threshold fraction for counting a label as having taken the population over
inline constexpr double kDefaultEpsilon = 5.0 / 5.1;

struct ExperimentConfig {
  ProblemKind problem = ProblemKind::TrapZeros;
  int n = 100;
  int N = 1;
  std::int64_t trials = 100;
  std::uint64_t seed = 1;
  std::int64_t eval_budget = 0;  // 0 means the default 20*n^2
  double epsilon = kDefaultEpsilon;
  bool early_abort = false;
  std::string experiment_id = "run";

  // applies defaults, validates ranges, and returns advisory notes
  std::vector<std::string> finalize();
};

// flat key=value text; '#' comments, blank lines and [section] markers are
// skipped; unknown or repeated keys are errors
ExperimentConfig parse_config_text(const std::string& text);
ExperimentConfig parse_config_file(const std::string& path);

// a single "key=value" as accepted in config files
void apply_override(ExperimentConfig& cfg, const std::string& kv);

// canonical round-trippable form, one key per line
std::string emit_config(const ExperimentConfig& cfg);

}  // namespace nnea
