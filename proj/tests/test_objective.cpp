#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "divopt/errors.hpp"
#include "divopt/landscapes.hpp"
#include "divopt/objective.hpp"

using namespace divopt;

namespace {

ObjectiveOracle half_norm_sq() {
  ObjectiveOracle o;
  o.eval = [](std::span<const double> x) {
    double acc = 0.0;
    for (double v : x) acc += v * v;
    return 0.5 * acc;
  };
  o.grad = [](std::span<const double> x, std::span<double> g) {
    for (std::size_t k = 0; k < x.size(); ++k) g[k] = x[k];
  };
  return o;
}

}  // namespace

TEST_CASE("quadratic is exact under central differences") {
  const auto oracle = half_norm_sq();
  const double x[2] = {3.0, -4.0};
  CHECK(check_gradient(oracle, std::span<const double>(x, 2), 1e-5) < 1e-8);
  CHECK(check_gradient(oracle, std::span<const double>(x, 2), 1e-3) < 1e-8);
}

TEST_CASE("constant function has zero error") {
  ObjectiveOracle o;
  o.eval = [](std::span<const double>) { return 4.25; };
  o.grad = [](std::span<const double>, std::span<double> g) {
    for (double& v : g) v = 0.0;
  };
  const double x[3] = {0.3, -1.0, 7.0};
  CHECK(check_gradient(o, std::span<const double>(x, 3), 1e-5) == 0.0);
}

TEST_CASE("ring landscape gradient check at (0.5, 0.5)") {
  const Landscape ring = make_landscape("ring");
  const double x[2] = {0.5, 0.5};
  CHECK(check_gradient(ring.oracle, std::span<const double>(x, 2), 1e-5) < 1e-5);
}

TEST_CASE("non-finite probe names the coordinate") {
  ObjectiveOracle o;
  o.eval = [](std::span<const double> x) {
    return x[1] > 1.0 ? std::numeric_limits<double>::infinity() : x[0];
  };
  o.grad = [](std::span<const double>, std::span<double> g) {
    g[0] = 1.0;
    g[1] = 0.0;
  };
  const double x[2] = {0.0, 1.0};  // probing coordinate 1 crosses the cliff
  try {
    check_gradient(o, std::span<const double>(x, 2), 1e-2);
    FAIL("expected NumericError");
  } catch (const NumericError& e) {
    CHECK(std::string(e.what()).find("coordinate 1") != std::string::npos);
  }
}

TEST_CASE("h outside (0,1) rejected") {
  const auto oracle = half_norm_sq();
  const double x[1] = {1.0};
  CHECK_THROWS_AS(check_gradient(oracle, std::span<const double>(x, 1), 0.0),
                  ConfigError);
  CHECK_THROWS_AS(check_gradient(oracle, std::span<const double>(x, 1), 1.0),
                  ConfigError);
}
