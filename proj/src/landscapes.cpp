#include "divopt/landscapes.hpp"

#include <cmath>
#include <numbers>

#include "divopt/errors.hpp"

namespace divopt {

namespace {

double dot(std::span<const double> a, std::span<const double> b) {
  double acc = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) acc += a[i] * b[i];
  return acc;
}

// f = (|x|^2 - 1)^2, grad = 4 (|x|^2 - 1) x. Optimum: the unit circle.
double ring_eval(std::span<const double> x) {
  const double r2 = dot(x, x);
  return (r2 - 1.0) * (r2 - 1.0);
}
void ring_grad(std::span<const double> x, std::span<double> g) {
  const double c = 4.0 * (dot(x, x) - 1.0);
  for (std::size_t k = 0; k < x.size(); ++k) g[k] = c * x[k];
}

// f = (x^2 + y - 11)^2 + (x + y^2 - 7)^2; four isolated global minima at 0.
double himmelblau_eval(std::span<const double> p) {
  const double a = p[0] * p[0] + p[1] - 11.0;
  const double b = p[0] + p[1] * p[1] - 7.0;
  return a * a + b * b;
}
void himmelblau_grad(std::span<const double> p, std::span<double> g) {
  const double a = p[0] * p[0] + p[1] - 11.0;
  const double b = p[0] + p[1] * p[1] - 7.0;
  g[0] = 4.0 * p[0] * a + 2.0 * b;
  g[1] = 2.0 * a + 4.0 * p[1] * b;
}
void himmelblau_hessian(std::span<const double> p, double h[2][2]) {
  h[0][0] = 12.0 * p[0] * p[0] + 4.0 * p[1] - 42.0;
  h[0][1] = 4.0 * (p[0] + p[1]);
  h[1][0] = h[0][1];
  h[1][1] = 12.0 * p[1] * p[1] + 4.0 * p[0] - 26.0;
}

// Finds the stationary point near `start` by Newton iterations on the
// gradient; the minimizer coordinates are computed, not hard-coded.
std::vector<double> himmelblau_minimizer(double x0, double y0) {
  double p[2] = {x0, y0};
  for (int iter = 0; iter < 80; ++iter) {
    double g[2];
    himmelblau_grad(std::span<const double>(p, 2), std::span<double>(g, 2));
    double h[2][2];
    himmelblau_hessian(std::span<const double>(p, 2), h);
    const double det = h[0][0] * h[1][1] - h[0][1] * h[1][0];
    if (det == 0.0) break;
    const double dx = (h[1][1] * g[0] - h[0][1] * g[1]) / det;
    const double dy = (h[0][0] * g[1] - h[1][0] * g[0]) / det;
    p[0] -= dx;
    p[1] -= dy;
    if (std::abs(dx) + std::abs(dy) < 1e-15) break;
  }
  return {p[0], p[1]};
}

// f = (y - sin x)^2; the optimum set is the curve y = sin x.
double sine_valley_eval(std::span<const double> p) {
  const double r = p[1] - std::sin(p[0]);
  return r * r;
}
void sine_valley_grad(std::span<const double> p, std::span<double> g) {
  const double r = p[1] - std::sin(p[0]);
  g[0] = -2.0 * r * std::cos(p[0]);
  g[1] = 2.0 * r;
}

double quadratic_eval(std::span<const double> x) { return 0.5 * dot(x, x); }
void quadratic_grad(std::span<const double> x, std::span<double> g) {
  for (std::size_t k = 0; k < x.size(); ++k) g[k] = x[k];
}

ObjectiveOracle guarded(std::size_t dim, double (*eval)(std::span<const double>),
                        void (*grad)(std::span<const double>, std::span<double>),
                        double smoothness) {
  ObjectiveOracle oracle;
  oracle.eval = [dim, eval](std::span<const double> x) {
    if (x.size() != dim) throw ConfigError("landscape: wrong point dimension");
    return eval(x);
  };
  oracle.grad = [dim, grad](std::span<const double> x, std::span<double> g) {
    if (x.size() != dim || g.size() != dim) {
      throw ConfigError("landscape: wrong point dimension");
    }
    grad(x, g);
  };
  oracle.smoothness_hint = smoothness;
  return oracle;
}

}  // namespace

const std::vector<std::string>& landscape_names() {
  static const std::vector<std::string> names = {"ring", "himmelblau",
                                                 "sine_valley", "quadratic"};
  return names;
}

Landscape make_landscape(const std::string& name, std::size_t dim) {
  constexpr double pi = std::numbers::pi;
  if (name == "ring") {
    if (dim != 0 && dim != 2) throw ConfigError("ring landscape requires d = 2");
    Landscape l;
    l.name = name;
    l.dim = 2;
    // Hessian eigenvalues are 12 r^2 - 4 and 4 (r^2 - 1); on [-2,2]^2 the
    // radial one peaks at r^2 = 8, giving L = 92.
    l.oracle = guarded(2, ring_eval, ring_grad, 92.0);
    l.box_lo = {-2.0, -2.0};
    l.box_hi = {2.0, 2.0};
    l.optimum = ManifoldOptimum{"unit circle |x| = 1"};
    l.smoothness_hint = 92.0;
    return l;
  }
  if (name == "himmelblau") {
    if (dim != 0 && dim != 2) throw ConfigError("himmelblau landscape requires d = 2");
    Landscape l;
    l.name = name;
    l.dim = 2;
    // Gershgorin over [-6,6]^2: |f_xx| <= 498, |f_xy| <= 48, so L = 546.
    l.oracle = guarded(2, himmelblau_eval, himmelblau_grad, 546.0);
    l.box_lo = {-6.0, -6.0};
    l.box_hi = {6.0, 6.0};
    IsolatedOptima optima;
    optima.min_value = 0.0;
    for (const auto& start : {std::pair{3.0, 3.0}, std::pair{-3.0, 3.0},
                              std::pair{-3.0, -3.0}, std::pair{3.0, -3.0}}) {
      optima.minimizers.push_back(himmelblau_minimizer(start.first, start.second));
    }
    l.optimum = std::move(optima);
    l.smoothness_hint = 546.0;
    return l;
  }
  if (name == "sine_valley") {
    if (dim != 0 && dim != 2) throw ConfigError("sine_valley landscape requires d = 2");
    Landscape l;
    l.name = name;
    l.dim = 2;
    // |f_xx| <= 2 + 2|y - sin x| <= 8 on the box, |f_xy| <= 2, f_yy = 2.
    l.oracle = guarded(2, sine_valley_eval, sine_valley_grad, 10.0);
    l.box_lo = {-pi, -2.0};
    l.box_hi = {pi, 2.0};
    l.optimum = CurveOptimum{"y = sin x"};
    l.smoothness_hint = 10.0;
    return l;
  }
  if (name == "quadratic") {
    const std::size_t d = dim == 0 ? 2 : dim;
    Landscape l;
    l.name = name;
    l.dim = d;
    l.oracle = guarded(d, quadratic_eval, quadratic_grad, 1.0);
    l.box_lo.assign(d, -2.0);
    l.box_hi.assign(d, 2.0);
    l.optimum = IsolatedOptima{{std::vector<double>(d, 0.0)}, 0.0};
    l.smoothness_hint = 1.0;
    return l;
  }
  std::string names;
  for (const auto& n : landscape_names()) {
    if (!names.empty()) names += ", ";
    names += n;
  }
  throw ConfigError("unknown landscape '" + name + "' (valid: " + names + ")");
}

std::pair<double, std::vector<double>> landscape_eval(const std::string& name,
                                                      std::span<const double> x) {
  const Landscape l = make_landscape(name, name == "quadratic" ? x.size() : 0);
  std::vector<double> g(x.size());
  l.oracle.grad(x, g);
  return {l.oracle.eval(x), std::move(g)};
}

}  // namespace divopt
