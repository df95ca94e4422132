#pragma once

#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "divopt/diversity.hpp"
#include "divopt/objective.hpp"
#include "divopt/particle_set.hpp"

namespace divopt {

enum class Method { kFsum, kFmax, kLinear, kVarianceClosedForm, kMomentumV2 };

std::string_view method_name(Method m);
Method method_from_name(const std::string& name);

struct OptimizerConfig {
  Method method = Method::kFsum;
  double mu = 5e-4;        // step size; assumes f is (1/mu)-smooth for the bounds
  double eta = 0.5;        // repulsive coefficient in [0, 1]
  double alpha = 0.5;      // linear-combination weight in [0, 1]
  double beta = 0.0;       // momentum coefficient >= 0
  long max_iters = 1000;
  double grad_tol = 0.0;   // stop once sum_i |grad f(x_i)|^2 <= grad_tol

  void validate() const;   // throws ConfigError
};

// One update. `report` carries the metrics of the input state; its
// repulsion_applied (and delta, for fmax) describe this step.
struct StepResult {
  ParticleSet next;
  StepReport report;
};

// y_i = x_i - mu grad f(x_i); second member is sum_i |y_i - x_i|^2
// = mu^2 sum_i |grad f(x_i)|^2, the squared descent budget.
std::pair<ParticleSet, double> gradient_probe(const ParticleSet& x,
                                              const ObjectiveOracle& f, double mu);

StepResult fsum_step(const ParticleSet& x, const ObjectiveOracle& f,
                     const DiversityScore& phi, const OptimizerConfig& cfg);
StepResult fmax_step(const ParticleSet& x, const ObjectiveOracle& f,
                     const DiversityScore& phi, const OptimizerConfig& cfg);
StepResult linear_combo_step(const ParticleSet& x, const ObjectiveOracle& f,
                             const DiversityScore& phi, const OptimizerConfig& cfg);
StepResult variance_closed_form_step(const ParticleSet& x, const ObjectiveOracle& f,
                                     const OptimizerConfig& cfg);
StepResult momentum_v2_step(const ParticleSet& x, const ObjectiveOracle& f,
                            const OptimizerConfig& cfg);

struct Trajectory {
  OptimizerConfig config;
  std::vector<StepReport> reports;
  // (iteration, positions) at stride intervals; always includes iteration 0
  // and the terminal state.
  std::vector<std::pair<long, Matrix>> snapshots;
  double wall_time_seconds = 0.0;

  const StepReport& final_report() const { return reports.back(); }
  const Matrix& final_positions() const { return snapshots.back().second; }
};

// Iterates the configured step until max_iters or the gradient tolerance is
// met. Reports are recorded for every visited state (max_iters + 1 at most);
// phi in the reports uses `score`. Deterministic given (x0, cfg). Step errors
// are rethrown with the iteration index attached.
Trajectory run(const ParticleSet& x0, const ObjectiveOracle& f,
               const DiversityScore& score, const OptimizerConfig& cfg,
               long snapshot_stride = 100);

}  // namespace divopt
