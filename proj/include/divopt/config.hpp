#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "divopt/harness.hpp"
#include "divopt/optimizers.hpp"
#include "divopt/particle_set.hpp"

namespace divopt {

// Plain-text experiment configuration, one `key = value` pair per line,
// '#' comments. Parsing is strict: unknown keys and missing required keys
// are errors naming the key. No environment-variable overrides.
struct ExperimentConfig {
  std::string landscape;
  std::optional<Method> method;            // required by `run`
  std::vector<std::string> methods;        // required by `compare`
  std::size_t particle_count = 0;          // m, required
  std::size_t dim = 0;                     // 0 = landscape default
  double mu = kDefaultLearningRate;
  double eta = kDefaultEta;
  double alpha = 0.5;
  double beta = 0.0;
  double s = kDefaultRieszExponent;
  long max_iters = kDefaultIterations;
  long snapshot_stride = 100;
  double grad_tol = 0.0;
  double distance_floor = 1e-12;
  std::vector<std::uint64_t> seeds;        // required (seed or seeds)
  InitScheme init = GaussianInit{1.0};
  std::optional<std::vector<double>> alphas;  // sweep grid; defaults to kDefaultAlphaGrid
  std::string output_dir;

  // Echo as config-file text that reparses to the same configuration.
  std::string to_text() const;

  OptimizerConfig optimizer_config() const;
  DiversityScore diversity_score() const;
  ExperimentSetup setup() const;  // builds the landscape; validates dim
};

ExperimentConfig parse_config_text(const std::string& text);
ExperimentConfig parse_config_file(const std::filesystem::path& path);

}  // namespace divopt
