#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <vector>

#include "divopt/errors.hpp"
#include "divopt/landscapes.hpp"
#include "divopt/optimizers.hpp"
#include "divopt/particle_set.hpp"

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
  o.smoothness_hint = 1.0;
  return o;
}

ObjectiveOracle zero_objective() {
  ObjectiveOracle o;
  o.eval = [](std::span<const double>) { return 0.0; };
  o.grad = [](std::span<const double>, std::span<double> g) {
    for (double& v : g) v = 0.0;
  };
  return o;
}

// Black-box fixture with distinct values but a vanishing gradient field,
// for exercising the fmax budget formula at stationary populations.
ObjectiveOracle flat_gradient_values() {
  ObjectiveOracle o;
  o.eval = [](std::span<const double> x) { return x[0]; };
  o.grad = [](std::span<const double>, std::span<double> g) {
    for (double& v : g) v = 0.0;
  };
  return o;
}

Matrix points_1d(std::initializer_list<double> xs) {
  Matrix pos(xs.size(), 1);
  std::size_t i = 0;
  for (double x : xs) pos(i++, 0) = x;
  return pos;
}

}  // namespace

TEST_CASE("gradient_probe hand example") {
  const auto f = half_norm_sq();
  const ParticleSet x{points_1d({-1.0, 2.0})};
  const auto [y, eps0_sq] = gradient_probe(x, f, 0.1);
  CHECK(y.positions(0, 0) == doctest::Approx(-0.9).epsilon(1e-15));
  CHECK(y.positions(1, 0) == doctest::Approx(1.8).epsilon(1e-15));
  CHECK(eps0_sq == doctest::Approx(0.05).epsilon(1e-12));
}

TEST_CASE("gradient_probe fixed points") {
  const ParticleSet x{points_1d({0.3, -4.0})};
  const auto [y, eps0_sq] = gradient_probe(x, zero_objective(), 0.1);
  CHECK(y.positions == x.positions);
  CHECK(eps0_sq == 0.0);

  // mu = 1/L lands a quadratic on its minimizer in one step.
  const ParticleSet one{points_1d({1.0})};
  const auto [probe, budget] = gradient_probe(one, half_norm_sq(), 1.0);
  CHECK(probe.positions(0, 0) == 0.0);
  CHECK(budget == doctest::Approx(1.0));
}

TEST_CASE("fsum hand example reproduced to 1e-9") {
  const auto f = half_norm_sq();
  const ParticleSet x{points_1d({-1.0, 2.0})};
  OptimizerConfig cfg;
  cfg.method = Method::kFsum;
  cfg.mu = 0.1;
  cfg.eta = 0.5;
  DiversityScore score;
  score.s = -2.0;
  const StepResult out = fsum_step(x, f, score, cfg);

  // Hand evaluation of the update: y = {-0.9, 1.8}, g = {5.4, -5.4},
  // scale = eta mu sqrt(5 / 58.32).
  const double scale = 0.5 * 0.1 * std::sqrt(5.0 / 58.32);
  const double expected0 = -0.9 - scale * 5.4;
  const double expected1 = 1.8 + scale * 5.4;
  CHECK(out.next.positions(0, 0) == doctest::Approx(expected0).epsilon(1e-12));
  CHECK(out.next.positions(1, 0) == doctest::Approx(expected1).epsilon(1e-12));
  CHECK(std::abs(out.next.positions(0, 0) - (-0.97905694150420952)) < 1e-9);
  CHECK(std::abs(out.next.positions(1, 0) - 1.8790569415042095) < 1e-9);
  CHECK(out.report.repulsion_applied);
  CHECK(out.report.f_sum == doctest::Approx(0.5 + 2.0));
}

TEST_CASE("fsum with eta = 0 is exactly the probe") {
  const auto f = half_norm_sq();
  const ParticleSet x{points_1d({-1.0, 2.0, 0.5})};
  OptimizerConfig cfg;
  cfg.method = Method::kFsum;
  cfg.mu = 0.2;
  cfg.eta = 0.0;
  DiversityScore score;
  const StepResult out = fsum_step(x, f, score, cfg);
  const auto [y, eps] = gradient_probe(x, f, cfg.mu);
  CHECK(out.next.positions == y.positions);
  CHECK_FALSE(out.report.repulsion_applied);
}

TEST_CASE("fsum with one particle reduces to plain descent") {
  const auto f = half_norm_sq();
  const ParticleSet x{points_1d({2.0})};
  OptimizerConfig cfg;
  cfg.method = Method::kFsum;
  cfg.mu = 0.1;
  cfg.eta = 0.9;
  DiversityScore score;
  const StepResult out = fsum_step(x, f, score, cfg);
  CHECK(out.next.positions(0, 0) == doctest::Approx(1.8).epsilon(1e-15));
  CHECK_FALSE(out.report.repulsion_applied);
}

TEST_CASE("fsum degenerate population falls back to the probe") {
  const auto f = half_norm_sq();
  Matrix pos(3, 1);
  pos(0, 0) = pos(1, 0) = pos(2, 0) = 1.0;  // fully coincident
  const ParticleSet x{pos};
  OptimizerConfig cfg;
  cfg.method = Method::kFsum;
  cfg.mu = 0.1;
  cfg.eta = 0.5;
  DiversityScore score;
  score.s = 0.0;
  const StepResult out = fsum_step(x, f, score, cfg);
  CHECK_FALSE(out.report.repulsion_applied);
  for (std::size_t i = 0; i < 3; ++i) {
    CHECK(out.next.positions(i, 0) == doctest::Approx(0.9).epsilon(1e-15));
  }
  CHECK(std::isinf(out.report.phi));
}

TEST_CASE("fsum feasibility: the realized move spends exactly eta xi") {
  const Landscape ring = make_landscape("ring");
  const ParticleSet x = init_particles(8, 2, GaussianInit{1.0}, 5);
  OptimizerConfig cfg;
  cfg.method = Method::kFsum;
  cfg.mu = 5e-4;
  cfg.eta = 0.7;
  DiversityScore score;
  const StepResult out = fsum_step(x, ring.oracle, score, cfg);
  REQUIRE(out.report.repulsion_applied);
  const auto [y, eps0_sq] = gradient_probe(x, ring.oracle, cfg.mu);
  double move_sq = 0.0;
  for (std::size_t idx = 0; idx < y.positions.size(); ++idx) {
    const double diff = out.next.positions.data()[idx] - y.positions.data()[idx];
    move_sq += diff * diff;
  }
  CHECK(move_sq == doctest::Approx(cfg.eta * cfg.eta * eps0_sq).epsilon(1e-10));
  CHECK(move_sq <= cfg.eta * cfg.eta * eps0_sq + 1e-12);
}

TEST_CASE("fmax symmetric population: every budget is sqrt(eta) mu G") {
  const auto f = half_norm_sq();
  Matrix pos(4, 2, 0.0);
  pos(0, 0) = 2.0;
  pos(1, 0) = -2.0;
  pos(2, 1) = 2.0;
  pos(3, 1) = -2.0;
  const ParticleSet x{pos};
  OptimizerConfig cfg;
  cfg.method = Method::kFmax;
  cfg.mu = 0.1;
  cfg.eta = 0.5;
  DiversityScore score;
  const StepResult out = fmax_step(x, f, score, cfg);
  const auto [y, eps] = gradient_probe(x, f, cfg.mu);
  const double expected_xi = std::sqrt(cfg.eta) * cfg.mu * 2.0;
  for (std::size_t i = 0; i < 4; ++i) {
    double move_sq = 0.0;
    for (std::size_t k = 0; k < 2; ++k) {
      const double diff = out.next.positions(i, k) - y.positions(i, k);
      move_sq += diff * diff;
    }
    CHECK(std::sqrt(move_sq) == doctest::Approx(expected_xi).epsilon(1e-10));
  }
  CHECK(out.report.delta == doctest::Approx(0.5 * cfg.mu * 4.0).epsilon(1e-12));
}

TEST_CASE("fmax stationary population: dominant particle stays put") {
  const auto f = flat_gradient_values();
  const ParticleSet x{points_1d({0.0, 1.0, 3.0})};
  OptimizerConfig cfg;
  cfg.method = Method::kFmax;
  cfg.mu = 0.1;
  cfg.eta = 0.5;
  DiversityScore score;
  const StepResult out = fmax_step(x, f, score, cfg);
  // Gradients vanish, so y = x and xi_i^2 = 2 mu (max f - f_i).
  CHECK(out.next.positions(2, 0) == 3.0);
  CHECK(std::abs(out.next.positions(0, 0) - 0.0) ==
        doctest::Approx(std::sqrt(0.2 * 3.0)).epsilon(1e-12));
  CHECK(std::abs(out.next.positions(1, 0) - 1.0) ==
        doctest::Approx(std::sqrt(0.2 * 2.0)).epsilon(1e-12));
  CHECK(out.report.delta == 0.0);
}

TEST_CASE("fmax with one particle takes the plain step") {
  const auto f = half_norm_sq();
  const ParticleSet x{points_1d({1.0})};
  OptimizerConfig cfg;
  cfg.method = Method::kFmax;
  cfg.mu = 0.1;
  cfg.eta = 0.5;
  DiversityScore score;
  const StepResult out = fmax_step(x, f, score, cfg);
  CHECK(out.next.positions(0, 0) == doctest::Approx(0.9).epsilon(1e-15));
  CHECK_FALSE(out.report.repulsion_applied);
}

TEST_CASE("fmax requires eta in (0, 1]") {
  const auto f = half_norm_sq();
  const ParticleSet x{points_1d({1.0, 2.0})};
  OptimizerConfig cfg;
  cfg.method = Method::kFmax;
  cfg.mu = 0.1;
  cfg.eta = 0.0;
  DiversityScore score;
  CHECK_THROWS_AS(fmax_step(x, f, score, cfg), ConfigError);
}

TEST_CASE("linear combination endpoints and hand value") {
  DiversityScore score;
  OptimizerConfig cfg;
  cfg.method = Method::kLinear;
  cfg.mu = 0.1;

  SUBCASE("alpha = 0 is plain descent") {
    cfg.alpha = 0.0;
    const auto f = half_norm_sq();
    const ParticleSet x{points_1d({-1.0, 2.0})};
    const StepResult out = linear_combo_step(x, f, score, cfg);
    CHECK(out.next.positions(0, 0) == doctest::Approx(-0.9).epsilon(1e-15));
    CHECK(out.next.positions(1, 0) == doctest::Approx(1.8).epsilon(1e-15));
    CHECK_FALSE(out.report.repulsion_applied);
  }

  SUBCASE("alpha = 1 ignores the objective") {
    cfg.alpha = 1.0;
    ObjectiveOracle steep;  // large gradient that must not matter
    steep.eval = [](std::span<const double> x) { return 100.0 * x[0]; };
    steep.grad = [](std::span<const double>, std::span<double> g) {
      for (double& v : g) v = 100.0;
    };
    const ParticleSet x{points_1d({0.0, 1.0})};
    const StepResult out = linear_combo_step(x, steep, score, cfg);
    // Pure diversity descent of the log energy: g = {2, -2}.
    CHECK(out.next.positions(0, 0) == doctest::Approx(-0.2).epsilon(1e-12));
    CHECK(out.next.positions(1, 0) == doctest::Approx(1.2).epsilon(1e-12));
  }

  SUBCASE("alpha = 0.5 hand pair") {
    cfg.alpha = 0.5;
    const ParticleSet x{points_1d({0.0, 1.0})};
    const StepResult out = linear_combo_step(x, zero_objective(), score, cfg);
    CHECK(out.next.positions(0, 0) == doctest::Approx(-0.1).epsilon(1e-12));
    CHECK(out.next.positions(1, 0) == doctest::Approx(1.1).epsilon(1e-12));
  }
}

TEST_CASE("variance closed form: guards and hand example") {
  const auto f = half_norm_sq();
  OptimizerConfig cfg;
  cfg.method = Method::kVarianceClosedForm;
  cfg.mu = 0.1;
  cfg.eta = 0.5;

  SUBCASE("identical particles collapse to the probe") {
    Matrix pos(3, 1);
    pos(0, 0) = pos(1, 0) = pos(2, 0) = 2.0;
    const StepResult out = variance_closed_form_step(ParticleSet{pos}, f, cfg);
    for (std::size_t i = 0; i < 3; ++i) {
      CHECK(out.next.positions(i, 0) == doctest::Approx(1.8).epsilon(1e-15));
    }
    CHECK_FALSE(out.report.repulsion_applied);
  }

  SUBCASE("stationary population is a fixed point") {
    const ParticleSet x{points_1d({-1.0, 4.0})};
    const StepResult out = variance_closed_form_step(x, zero_objective(), cfg);
    CHECK(out.next.positions == x.positions);
    CHECK_FALSE(out.report.repulsion_applied);
  }

  SUBCASE("hand example") {
    const ParticleSet x{points_1d({-1.0, 2.0})};
    const StepResult out = variance_closed_form_step(x, f, cfg);
    const double alpha_star = std::sqrt(0.05) / std::sqrt(3.645);
    CHECK(alpha_star == doctest::Approx(0.117121).epsilon(1e-5));
    CHECK(out.next.positions(0, 0) ==
          doctest::Approx(-0.9 + 0.5 * alpha_star * (-1.35)).epsilon(1e-12));
    CHECK(out.next.positions(1, 0) ==
          doctest::Approx(1.8 + 0.5 * alpha_star * 1.35).epsilon(1e-12));
  }
}

TEST_CASE("variance closed form equals fsum with s = -2") {
  const Landscape ring = make_landscape("ring");
  OptimizerConfig cfg;
  cfg.mu = 0.01;
  cfg.eta = 0.5;
  DiversityScore score;
  score.s = -2.0;
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    const ParticleSet x = init_particles(7, 2, GaussianInit{1.0}, seed);
    cfg.method = Method::kFsum;
    const StepResult a = fsum_step(x, ring.oracle, score, cfg);
    cfg.method = Method::kVarianceClosedForm;
    const StepResult b = variance_closed_form_step(x, ring.oracle, cfg);
    for (std::size_t idx = 0; idx < a.next.positions.size(); ++idx) {
      CHECK(a.next.positions.data()[idx] ==
            doctest::Approx(b.next.positions.data()[idx]).epsilon(1e-10));
    }
  }
}

TEST_CASE("momentum v2 behavior") {
  const auto f = half_norm_sq();
  OptimizerConfig cfg;
  cfg.method = Method::kMomentumV2;
  cfg.mu = 0.1;
  cfg.eta = 0.5;
  cfg.beta = 2.0;
  const double mu_eff = 0.1 / (1.0 + 0.1 * 2.0);

  SUBCASE("missing velocities is an error") {
    const ParticleSet x{points_1d({1.0, 2.0})};
    CHECK_THROWS_AS(momentum_v2_step(x, f, cfg), ConfigError);
  }

  SUBCASE("zero velocities clamp the budget to plain descent") {
    Matrix pos = points_1d({1.0, 2.0});
    const ParticleSet x{pos, Matrix(2, 1, 0.0)};
    const StepResult out = momentum_v2_step(x, f, cfg);
    for (std::size_t i = 0; i < 2; ++i) {
      const double z = pos(i, 0) - mu_eff * pos(i, 0);
      CHECK(out.next.positions(i, 0) == doctest::Approx(z).epsilon(1e-14));
      CHECK((*out.next.velocities)(i, 0) ==
            doctest::Approx(-mu_eff * pos(i, 0)).epsilon(1e-14));
    }
    CHECK_FALSE(out.report.repulsion_applied);
  }

  SUBCASE("beta = 0 reduces to the plain probe") {
    cfg.beta = 0.0;
    Matrix vel(2, 1);
    vel(0, 0) = 3.0;
    vel(1, 0) = -1.0;
    const ParticleSet x{points_1d({1.0, 2.0}), vel};
    const StepResult out = momentum_v2_step(x, f, cfg);
    CHECK(out.next.positions(0, 0) == doctest::Approx(0.9).epsilon(1e-14));
    CHECK(out.next.positions(1, 0) == doctest::Approx(1.8).epsilon(1e-14));
    CHECK_FALSE(out.report.repulsion_applied);
  }

  SUBCASE("stationary objective with velocity spreads from the mean") {
    Matrix vel(2, 1);
    vel(0, 0) = 1.0;
    vel(1, 0) = 1.0;
    const ParticleSet x{points_1d({0.0, 1.0}), vel};
    const StepResult out = momentum_v2_step(x, zero_objective(), cfg);
    // z = x, zbar = 0.5; xi0^2 = 2 mu_eff beta > 0.
    const double xi0 = std::sqrt(2.0 * mu_eff * cfg.beta);
    const double dev = std::sqrt(0.5);  // sqrt(sum |z_i - zbar|^2)
    const double scale = cfg.eta * xi0 / dev;
    CHECK(out.next.positions(0, 0) ==
          doctest::Approx(0.0 + scale * (-0.5)).epsilon(1e-12));
    CHECK(out.next.positions(1, 0) ==
          doctest::Approx(1.0 + scale * 0.5).epsilon(1e-12));
    CHECK(out.report.repulsion_applied);
  }
}

TEST_CASE("run: immediate stops") {
  const auto f = half_norm_sq();
  const ParticleSet x0{points_1d({1.0, -2.0})};
  DiversityScore score;
  OptimizerConfig cfg;
  cfg.method = Method::kFsum;
  cfg.mu = 0.1;

  SUBCASE("max_iters = 0 records only the initial state") {
    cfg.max_iters = 0;
    const Trajectory traj = run(x0, f, score, cfg);
    REQUIRE(traj.reports.size() == 1);
    CHECK(traj.reports[0].iteration == 0);
    CHECK(traj.snapshots.size() == 1);
  }

  SUBCASE("infinite grad_tol stops before stepping") {
    cfg.max_iters = 100;
    cfg.grad_tol = std::numeric_limits<double>::infinity();
    const Trajectory traj = run(x0, f, score, cfg);
    REQUIRE(traj.reports.size() == 1);
    CHECK(traj.final_positions() == x0.positions);
  }
}

TEST_CASE("run: geometric contraction at eta = 0, mu = 1/(2L)") {
  const auto f = half_norm_sq();
  const ParticleSet x0{points_1d({1.0, -2.0, 0.5})};
  DiversityScore score;
  OptimizerConfig cfg;
  cfg.method = Method::kFsum;
  cfg.mu = 0.5;
  cfg.eta = 0.0;
  cfg.max_iters = 40;
  const Trajectory traj = run(x0, f, score, cfg);
  const Matrix& final_pos = traj.final_positions();
  const double factor = std::pow(0.5, 40);
  for (std::size_t i = 0; i < 3; ++i) {
    CHECK(final_pos(i, 0) == x0.positions(i, 0) * factor);  // exact powers of two
  }
  CHECK(traj.reports.size() == 41);
  for (std::size_t t = 0; t + 1 < traj.reports.size(); ++t) {
    CHECK(traj.reports[t + 1].iteration == traj.reports[t].iteration + 1);
  }
}

TEST_CASE("run with eta = 0 bit-matches a hand-rolled descent loop") {
  const Landscape ring = make_landscape("ring");
  const ParticleSet x0 = init_particles(10, 2, GaussianInit{1.0}, 3);
  DiversityScore score;
  OptimizerConfig cfg;
  cfg.method = Method::kFsum;
  cfg.mu = 5e-4;
  cfg.eta = 0.0;
  cfg.max_iters = 1000;
  const Trajectory traj = run(x0, ring.oracle, score, cfg);

  Matrix pos = x0.positions;
  std::vector<double> xi(2), gi(2);
  for (long t = 0; t < 1000; ++t) {
    Matrix next = pos;
    for (std::size_t i = 0; i < 10; ++i) {
      pos.row(i, xi);
      ring.oracle.grad(xi, gi);
      for (std::size_t k = 0; k < 2; ++k) next(i, k) = pos(i, k) - cfg.mu * gi[k];
    }
    pos = std::move(next);
  }
  CHECK(traj.final_positions() == pos);
}

TEST_CASE("run: grad_tol stopping threshold") {
  const auto f = half_norm_sq();
  const ParticleSet x0{points_1d({4.0})};
  DiversityScore score;
  OptimizerConfig cfg;
  cfg.method = Method::kFsum;
  cfg.mu = 0.5;
  cfg.max_iters = 1000;
  cfg.grad_tol = 1e-6;
  const Trajectory traj = run(x0, f, score, cfg);
  CHECK(traj.final_report().grad_norm_sq_sum <= 1e-6);
  CHECK(traj.reports.size() < 100);  // contraction reaches the tolerance quickly
  // Every non-final report sits above the threshold.
  for (std::size_t t = 0; t + 1 < traj.reports.size(); ++t) {
    CHECK(traj.reports[t].grad_norm_sq_sum > 1e-6);
  }
}

TEST_CASE("report internal consistency") {
  const Landscape ring = make_landscape("ring");
  const ParticleSet x0 = init_particles(6, 2, GaussianInit{1.0}, 11);
  DiversityScore score;
  OptimizerConfig cfg;
  cfg.method = Method::kFmax;
  cfg.mu = 5e-4;
  cfg.max_iters = 50;
  const Trajectory traj = run(x0, ring.oracle, score, cfg);
  for (const StepReport& r : traj.reports) {
    double f_sum = 0.0;
    double f_max = r.f_values[0];
    for (double v : r.f_values) {
      f_sum += v;
      if (v > f_max) f_max = v;
    }
    CHECK(std::abs(r.f_sum - f_sum) <= 1e-12 * std::abs(f_sum));
    CHECK(r.f_max == f_max);
    CHECK(r.delta >= 0.0);
  }
}

TEST_CASE("monotone descent bounds on smooth landscapes") {
  DiversityScore score;

  SUBCASE("fsum on the ring") {
    const Landscape ring = make_landscape("ring");
    OptimizerConfig cfg;
    cfg.method = Method::kFsum;
    cfg.mu = 5e-4;  // well under 1/L
    cfg.eta = 0.5;
    cfg.max_iters = 300;
    const ParticleSet x0 = init_particles(12, 2, GaussianInit{1.0}, 2);
    const Trajectory traj = run(x0, ring.oracle, score, cfg);
    for (std::size_t t = 0; t + 1 < traj.reports.size(); ++t) {
      const double budget =
          (1.0 - cfg.eta) * cfg.mu * traj.reports[t].grad_norm_sq_sum / 2.0;
      CHECK(traj.reports[t + 1].f_sum <= traj.reports[t].f_sum - budget + 1e-10);
    }
  }

  SUBCASE("fmax on the quadratic with the derived budget") {
    const Landscape quad = make_landscape("quadratic", 2);
    OptimizerConfig cfg;
    cfg.method = Method::kFmax;
    cfg.mu = 5e-4;
    cfg.eta = 0.5;
    cfg.max_iters = 300;
    const ParticleSet x0 = init_particles(12, 2, GaussianInit{1.0}, 2);
    const Trajectory traj = run(x0, quad.oracle, score, cfg);
    for (std::size_t t = 0; t + 1 < traj.reports.size(); ++t) {
      CHECK(traj.reports[t].delta >= 0.0);
      CHECK(traj.reports[t + 1].f_max <=
            traj.reports[t].f_max - cfg.eta * traj.reports[t].delta + 1e-10);
    }
  }

  SUBCASE("fmax budget also holds at eta below one half") {
    const Landscape quad = make_landscape("quadratic", 2);
    OptimizerConfig cfg;
    cfg.method = Method::kFmax;
    cfg.mu = 1e-3;
    cfg.eta = 0.25;
    cfg.max_iters = 200;
    const ParticleSet x0 = init_particles(8, 2, GaussianInit{1.0}, 4);
    const Trajectory traj = run(x0, quad.oracle, score, cfg);
    for (std::size_t t = 0; t + 1 < traj.reports.size(); ++t) {
      CHECK(traj.reports[t + 1].f_max <=
            traj.reports[t].f_max - cfg.eta * traj.reports[t].delta + 1e-10);
    }
  }
}

TEST_CASE("loss exchange occurs on the ring") {
  const Landscape ring = make_landscape("ring");
  DiversityScore score;
  OptimizerConfig cfg;
  cfg.method = Method::kFsum;
  cfg.mu = 5e-4;
  cfg.eta = 0.5;
  cfg.max_iters = 1000;
  const ParticleSet x0 = init_particles(20, 2, GaussianInit{1.0}, 1);
  const Trajectory traj = run(x0, ring.oracle, score, cfg);
  bool exchanged = false;
  for (std::size_t t = 0; t + 1 < traj.reports.size() && !exchanged; ++t) {
    const auto& before = traj.reports[t];
    const auto& after = traj.reports[t + 1];
    if (after.f_sum >= before.f_sum) continue;
    for (std::size_t i = 0; i < before.f_values.size(); ++i) {
      if (after.f_values[i] > before.f_values[i]) {
        exchanged = true;
        break;
      }
    }
  }
  CHECK(exchanged);
}

TEST_CASE("permutation equivariance within tolerance") {
  const Landscape ring = make_landscape("ring");
  DiversityScore score;
  OptimizerConfig cfg;
  cfg.method = Method::kFsum;
  cfg.mu = 5e-4;
  cfg.eta = 0.5;
  cfg.max_iters = 50;
  const ParticleSet x0 = init_particles(6, 2, GaussianInit{1.0}, 8);
  const std::vector<std::size_t> perm = {5, 2, 0, 4, 1, 3};
  Matrix shuffled(6, 2);
  for (std::size_t i = 0; i < 6; ++i) {
    for (std::size_t k = 0; k < 2; ++k) shuffled(i, k) = x0.positions(perm[i], k);
  }
  const Trajectory a = run(x0, ring.oracle, score, cfg);
  const Trajectory b = run(ParticleSet{shuffled}, ring.oracle, score, cfg);
  const Matrix& fa = a.final_positions();
  const Matrix& fb = b.final_positions();
  for (std::size_t i = 0; i < 6; ++i) {
    for (std::size_t k = 0; k < 2; ++k) {
      CHECK(fb(i, k) == doctest::Approx(fa(perm[i], k)).epsilon(1e-9));
    }
  }
}

TEST_CASE("run attaches the iteration index to numeric errors") {
  ObjectiveOracle exploding;
  exploding.eval = [](std::span<const double> x) { return x[0]; };
  exploding.grad = [](std::span<const double> x, std::span<double> g) {
    g[0] = x[0] > 0.5 ? std::numeric_limits<double>::quiet_NaN() : 1.0;
  };
  const ParticleSet x0{points_1d({2.0})};
  DiversityScore score;
  OptimizerConfig cfg;
  cfg.method = Method::kFsum;
  cfg.mu = 0.1;
  cfg.max_iters = 100;
  try {
    run(x0, exploding, score, cfg);
    FAIL("expected NumericError");
  } catch (const NumericError& e) {
    CHECK(std::string(e.what()).find("iteration 0") != std::string::npos);
  }
}

TEST_CASE("config validation") {
  OptimizerConfig cfg;
  cfg.mu = 0.0;
  CHECK_THROWS_AS(cfg.validate(), ConfigError);
  cfg.mu = 0.1;
  cfg.eta = 1.5;
  CHECK_THROWS_AS(cfg.validate(), ConfigError);
  cfg.eta = 0.5;
  cfg.alpha = -0.1;
  CHECK_THROWS_AS(cfg.validate(), ConfigError);
  cfg.alpha = 0.5;
  cfg.max_iters = -1;
  CHECK_THROWS_AS(cfg.validate(), ConfigError);
  cfg.max_iters = 10;
  CHECK_NOTHROW(cfg.validate());
  CHECK(method_from_name("fsum") == Method::kFsum);
  CHECK_THROWS_AS(method_from_name("adam"), ConfigError);
}

TEST_CASE("run zero-initializes velocities for momentum") {
  const Landscape quad = make_landscape("quadratic", 2);
  DiversityScore score;
  OptimizerConfig cfg;
  cfg.method = Method::kMomentumV2;
  cfg.mu = 0.05;
  cfg.beta = 1.0;
  cfg.max_iters = 200;
  const ParticleSet x0 = init_particles(5, 2, GaussianInit{1.0}, 6);  // no velocities
  const Trajectory traj = run(x0, quad.oracle, score, cfg);
  CHECK(traj.reports.size() == 201);
  CHECK(traj.final_positions().all_finite());
  // The quadratic still contracts under the effective step size.
  CHECK(traj.final_report().f_sum < traj.reports.front().f_sum);
}
