#pragma once

#include <span>
#include <string>
#include <variant>
#include <vector>

#include "divopt/objective.hpp"

namespace divopt {

struct ManifoldOptimum {
  std::string description;
};

struct IsolatedOptima {
  std::vector<std::vector<double>> minimizers;
  double min_value = 0.0;
};

struct CurveOptimum {
  std::string description;
};

using OptimumDescriptor = std::variant<ManifoldOptimum, IsolatedOptima, CurveOptimum>;

// A named toy objective with analytic gradient, a bounding box for
// initialization/plotting, a description of its optimum set, and a
// conservative smoothness bound over the box.
struct Landscape {
  std::string name;
  std::size_t dim = 0;
  ObjectiveOracle oracle;
  std::vector<double> box_lo;
  std::vector<double> box_hi;
  OptimumDescriptor optimum;
  double smoothness_hint = 0.0;
};

const std::vector<std::string>& landscape_names();

// dim is only free for "quadratic" (any d >= 1); the 2-D landscapes reject
// other dimensions. dim == 0 selects the landscape's natural dimension.
// Unknown names raise ConfigError listing the valid names.
Landscape make_landscape(const std::string& name, std::size_t dim = 0);

// Value and gradient at a point.
std::pair<double, std::vector<double>> landscape_eval(const std::string& name,
                                                      std::span<const double> x);

}  // namespace divopt
