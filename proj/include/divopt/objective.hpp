#pragma once

#include <functional>
#include <optional>
#include <span>
#include <vector>

namespace divopt {

// Value and gradient of a differentiable loss. Both callables must be pure
// deterministic functions of the input point.
struct ObjectiveOracle {
  std::function<double(std::span<const double>)> eval;
  std::function<void(std::span<const double>, std::span<double>)> grad;
  std::optional<double> smoothness_hint;  // L bounding |Hessian| on the domain

  std::vector<double> gradient_at(std::span<const double> x) const {
    std::vector<double> g(x.size());
    grad(x, g);
    return g;
  }
};

// Max over coordinates of |central difference - analytic| / (|analytic| + 1e-12)
// with symmetric probes (f(x + h e_k) - f(x - h e_k)) / (2h). Throws
// NumericError naming the coordinate if the oracle returns a non-finite value
// at a probe point.
double check_gradient(const ObjectiveOracle& oracle, std::span<const double> x,
                      double h);

// Per-iteration population metrics. `iteration` indexes the state the metrics
// describe; `repulsion_applied` and `delta` describe the step leaving it
// (false / 0 for a terminal state).
struct StepReport {
  long iteration = 0;
  std::vector<double> f_values;
  double f_sum = 0.0;
  double f_max = 0.0;
  double phi = 0.0;
  double grad_norm_sq_sum = 0.0;
  bool repulsion_applied = false;
  double delta = 0.0;  // guaranteed one-step F_max decrease budget (fmax only)
};

}  // namespace divopt
