#pragma once

#include <array>
#include <cstdint>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "divopt/landscapes.hpp"
#include "divopt/optimizers.hpp"

namespace divopt {

// Toy protocol defaults: constant learning rate 5e-4 for 1000 iterations,
// eta = 0.5, logarithmic energy (s = 0), three trials.
inline constexpr double kDefaultLearningRate = 5e-4;
inline constexpr long kDefaultIterations = 1000;
inline constexpr double kDefaultEta = 0.5;
inline constexpr double kDefaultRieszExponent = 0.0;
inline constexpr std::array<double, 7> kDefaultAlphaGrid{0.0,  1e-4, 1e-3, 0.01,
                                                         0.1,  0.5,  1.0};
inline constexpr std::array<std::uint64_t, 3> kDefaultSeeds{1, 2, 3};

// Everything needed to launch one run: the landscape, the diversity score,
// the optimizer knobs, and how the population is initialized.
struct ExperimentSetup {
  Landscape landscape;
  DiversityScore score;
  OptimizerConfig config;
  std::size_t particle_count = 20;
  InitScheme init = GaussianInit{1.0};
  long snapshot_stride = 100;
};

Trajectory run_experiment(const ExperimentSetup& setup, std::uint64_t seed);

// One (loss, diversity) outcome. Loss is the method's own descending
// criterion (F_max for fmax, F_sum otherwise); diversity is -Phi so that
// higher is better. A +inf energy flags the point degenerate with
// diversity -inf.
struct FrontPoint {
  double loss = 0.0;
  double diversity = 0.0;
  std::string label;
  double alpha = std::numeric_limits<double>::quiet_NaN();  // linear only
  std::uint64_t seed = 0;
  bool degenerate = false;
};

FrontPoint front_point_from(const Trajectory& traj, std::string label,
                            double alpha, std::uint64_t seed);

// Linear-combination runs over the alpha grid, identical initialization per
// seed. Errors are tagged with (alpha, seed).
std::vector<FrontPoint> sweep_linear_alpha(const ExperimentSetup& setup,
                                           std::span<const double> alphas,
                                           std::span<const std::uint64_t> seeds);

// Indices of points not dominated under (minimize loss, maximize diversity);
// ties kept, stable input order.
std::vector<std::size_t> pareto_front(std::span<const FrontPoint> points);

struct UniformityStats {
  double min_pairwise_distance = 0.0;
  double mean_nearest_neighbor = 0.0;
  double stddev_nearest_neighbor = 0.0;  // population convention
};

// Exact brute-force pairwise statistics; requires m >= 2.
UniformityStats uniformity_stats(const ParticleSet& points);

struct LabeledConfig {
  std::string label;
  OptimizerConfig config;
};

struct MethodSummary {
  std::string label;
  double mean_loss = 0.0;
  double stddev_loss = 0.0;
  double mean_diversity = 0.0;
  double stddev_diversity = 0.0;
  std::size_t point_count = 0;
  std::size_t nondominated_count = 0;
};

struct CompareReport {
  std::vector<FrontPoint> points;
  std::vector<bool> nondominated;  // parallel to points (pooled front)
  std::vector<MethodSummary> methods;
};

// Runs every config for every seed from shared initializations and pools the
// resulting points into one front.
CompareReport compare_methods(const ExperimentSetup& base,
                              std::span<const LabeledConfig> configs,
                              std::span<const std::uint64_t> seeds);

// Deterministic JSON text for golden comparisons.
std::string serialize_compare_report(const CompareReport& report);

// Per-iteration population loss spread max_i f - min_i f.
std::vector<double> contour_spread_trace(const Trajectory& traj);

}  // namespace divopt
