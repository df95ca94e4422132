#include "divopt/objective.hpp"

#include <cmath>
#include <string>
#include <vector>

#include "divopt/errors.hpp"

namespace divopt {

double check_gradient(const ObjectiveOracle& oracle, std::span<const double> x,
                      double h) {
  if (!(h > 0.0 && h < 1.0)) {
    throw ConfigError("check_gradient: h must be in (0, 1)");
  }
  std::vector<double> analytic(x.size());
  oracle.grad(x, analytic);
  std::vector<double> probe(x.begin(), x.end());
  double worst = 0.0;
  for (std::size_t k = 0; k < x.size(); ++k) {
    probe[k] = x[k] + h;
    const double fp = oracle.eval(probe);
    probe[k] = x[k] - h;
    const double fm = oracle.eval(probe);
    probe[k] = x[k];
    if (!std::isfinite(fp) || !std::isfinite(fm)) {
      throw NumericError("check_gradient: non-finite oracle value probing coordinate " +
                         std::to_string(k));
    }
    const double central = (fp - fm) / (2.0 * h);
    const double err = std::abs(central - analytic[k]) / (std::abs(analytic[k]) + 1e-12);
    if (err > worst) worst = err;
  }
  return worst;
}

}  // namespace divopt
