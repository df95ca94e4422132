#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <numbers>

#include "divopt/errors.hpp"
#include "divopt/landscapes.hpp"
#include "divopt/objective.hpp"
#include "divopt/rng.hpp"

using namespace divopt;

TEST_CASE("ring values and gradient") {
  const auto [v, g] = landscape_eval("ring", std::vector<double>{1.0, 0.0});
  CHECK(v == 0.0);
  CHECK(g[0] == 0.0);
  CHECK(g[1] == 0.0);
  const auto [v2, g2] = landscape_eval("ring", std::vector<double>{0.5, 0.5});
  CHECK(v2 == doctest::Approx(0.25));
  CHECK(g2[0] == doctest::Approx(-1.0));
  CHECK(g2[1] == doctest::Approx(-1.0));
}

TEST_CASE("himmelblau value at the exact minimizer (3, 2)") {
  const auto [v, g] = landscape_eval("himmelblau", std::vector<double>{3.0, 2.0});
  CHECK(v == 0.0);
  CHECK(std::abs(g[0]) < 1e-12);
  CHECK(std::abs(g[1]) < 1e-12);
}

TEST_CASE("sine_valley value on the curve") {
  const auto [v, g] =
      landscape_eval("sine_valley", std::vector<double>{std::numbers::pi / 2.0, 1.0});
  CHECK(v == doctest::Approx(0.0).scale(1e-15));
  CHECK(std::abs(g[0]) < 1e-12);
  CHECK(std::abs(g[1]) < 1e-12);
}

TEST_CASE("quadratic in arbitrary dimension") {
  const auto [v, g] = landscape_eval("quadratic", std::vector<double>{1.0, 2.0, -2.0});
  CHECK(v == doctest::Approx(4.5));
  CHECK(g[0] == 1.0);
  CHECK(g[1] == 2.0);
  CHECK(g[2] == -2.0);
}

TEST_CASE("unknown landscape lists the valid names") {
  try {
    make_landscape("rosenbrock");
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    const std::string msg = e.what();
    CHECK(msg.find("ring") != std::string::npos);
    CHECK(msg.find("himmelblau") != std::string::npos);
    CHECK(msg.find("sine_valley") != std::string::npos);
    CHECK(msg.find("quadratic") != std::string::npos);
  }
}

TEST_CASE("gradients pass the finite-difference check at 100 seeded points") {
  Rng rng(314);
  for (const std::string& name : landscape_names()) {
    const Landscape l = make_landscape(name);
    std::vector<double> x(l.dim);
    for (int rep = 0; rep < 100; ++rep) {
      for (std::size_t k = 0; k < l.dim; ++k) {
        x[k] = l.box_lo[k] + (l.box_hi[k] - l.box_lo[k]) * rng.uniform01();
      }
      CHECK(check_gradient(l.oracle, x, 1e-5) < 1e-5);
    }
  }
}

TEST_CASE("himmelblau minimizers found by Newton refinement") {
  const Landscape l = make_landscape("himmelblau");
  const auto& optima = std::get<IsolatedOptima>(l.optimum);
  REQUIRE(optima.minimizers.size() == 4);
  std::vector<double> g(2);
  for (const auto& p : optima.minimizers) {
    CHECK(l.oracle.eval(p) <= optima.min_value + 1e-10);
    l.oracle.grad(p, g);
    CHECK(std::sqrt(g[0] * g[0] + g[1] * g[1]) < 1e-6);
  }
  // All four are distinct.
  for (std::size_t i = 0; i < 4; ++i) {
    for (std::size_t j = i + 1; j < 4; ++j) {
      const double dx = optima.minimizers[i][0] - optima.minimizers[j][0];
      const double dy = optima.minimizers[i][1] - optima.minimizers[j][1];
      CHECK(dx * dx + dy * dy > 1.0);
    }
  }
}

TEST_CASE("ring semantics: projection to the circle and GD contraction") {
  const Landscape l = make_landscape("ring");
  Rng rng(99);
  const double mu = 1.0 / l.smoothness_hint;
  std::vector<double> g(2);
  for (int rep = 0; rep < 200; ++rep) {
    // Random point in the annulus 0.5 < |x| < 1.5.
    const double angle = 2.0 * std::numbers::pi * rng.uniform01();
    const double radius = 0.5 + rng.uniform01();
    if (radius == 1.0) continue;
    std::vector<double> x = {radius * std::cos(angle), radius * std::sin(angle)};

    // Normalizing onto the circle reaches the optimum.
    std::vector<double> projected = {x[0] / radius, x[1] / radius};
    CHECK(l.oracle.eval(projected) == doctest::Approx(0.0).scale(1e-12));

    // One plain GD step with mu <= 1/L does not move away from the circle.
    l.oracle.grad(x, g);
    const std::vector<double> next = {x[0] - mu * g[0], x[1] - mu * g[1]};
    const double r_before = std::abs(radius - 1.0);
    const double r_after = std::abs(std::hypot(next[0], next[1]) - 1.0);
    CHECK(r_after <= r_before + 1e-12);
  }
}

TEST_CASE("smoothness hints bound the Hessian seen by finite differences") {
  Rng rng(7);
  for (const std::string& name : landscape_names()) {
    const Landscape l = make_landscape(name);
    std::vector<double> x(l.dim), g_plus(l.dim), g_minus(l.dim);
    const double h = 1e-5;
    for (int rep = 0; rep < 50; ++rep) {
      for (std::size_t k = 0; k < l.dim; ++k) {
        x[k] = l.box_lo[k] + (l.box_hi[k] - l.box_lo[k]) * rng.uniform01();
      }
      // Directional second difference along each axis stays below L.
      for (std::size_t k = 0; k < l.dim; ++k) {
        std::vector<double> p = x;
        p[k] = x[k] + h;
        l.oracle.grad(p, g_plus);
        p[k] = x[k] - h;
        l.oracle.grad(p, g_minus);
        const double curvature = std::abs(g_plus[k] - g_minus[k]) / (2.0 * h);
        CHECK(curvature <= l.smoothness_hint * (1.0 + 1e-6));
      }
    }
  }
}

TEST_CASE("fixed-dimension landscapes reject other dims") {
  CHECK_THROWS_AS(make_landscape("ring", 3), ConfigError);
  CHECK_THROWS_AS(make_landscape("sine_valley", 1), ConfigError);
  CHECK(make_landscape("quadratic", 5).dim == 5);
}
