#include "divopt/optimizers.hpp"

#include <chrono>
#include <cmath>
#include <limits>
#include <string>

#include "divopt/errors.hpp"
#include "divopt/kernels.hpp"

namespace divopt {

namespace {

constexpr double kRepulsionNormFloor = 1e-24;   // on sum_i |g_i|^2
constexpr double kPerParticleNormFloor = 1e-12; // on |g_i| (fmax)

// Population evaluation with the documented reduction order: per-particle
// terms first (coordinates ascending), then particle index ascending.
struct Evaluation {
  std::vector<double> f_values;
  std::vector<double> grad_sq;  // |grad f(x_i)|^2 per particle
  Matrix grads;
  double f_sum = 0.0;
  double f_max = 0.0;
  double grad_norm_sq_sum = 0.0;
};

Evaluation evaluate(const Matrix& pos, const ObjectiveOracle& f) {
  const std::size_t m = pos.rows();
  const std::size_t d = pos.cols();
  Evaluation ev;
  ev.f_values.resize(m);
  ev.grad_sq.resize(m);
  ev.grads = Matrix(m, d);
  std::vector<double> xi(d);
  std::vector<double> gi(d);
  for (std::size_t i = 0; i < m; ++i) {
    pos.row(i, xi);
    const double v = f.eval(xi);
    if (!std::isfinite(v)) {
      throw NumericError("objective value non-finite at particle " + std::to_string(i));
    }
    f.grad(xi, gi);
    double gs = 0.0;
    for (std::size_t k = 0; k < d; ++k) {
      if (!std::isfinite(gi[k])) {
        throw NumericError("objective gradient non-finite at particle " +
                           std::to_string(i));
      }
      ev.grads(i, k) = gi[k];
      gs += gi[k] * gi[k];
    }
    ev.f_values[i] = v;
    ev.grad_sq[i] = gs;
  }
  ev.f_max = ev.f_values[0];
  for (std::size_t i = 0; i < m; ++i) {
    ev.f_sum += ev.f_values[i];
    if (ev.f_values[i] > ev.f_max) ev.f_max = ev.f_values[i];
    ev.grad_norm_sq_sum += ev.grad_sq[i];
  }
  return ev;
}

// sum_i |row_i|^2 in ascending particle order.
double sum_sq_by_particle(const Matrix& mat) {
  double total = 0.0;
  for (std::size_t i = 0; i < mat.rows(); ++i) {
    double t = 0.0;
    for (std::size_t k = 0; k < mat.cols(); ++k) t += mat(i, k) * mat(i, k);
    total += t;
  }
  return total;
}

Matrix column_means(const Matrix& mat) {
  Matrix mean(1, mat.cols());
  for (std::size_t k = 0; k < mat.cols(); ++k) {
    double acc = 0.0;
    for (std::size_t i = 0; i < mat.rows(); ++i) acc += mat(i, k);
    mean(0, k) = acc / static_cast<double>(mat.rows());
  }
  return mean;
}

Matrix probe_positions(const Matrix& pos, const Matrix& grads, double mu) {
  Matrix y(pos.rows(), pos.cols());
  kernels::scaled_add(pos.data(), grads.data(), -mu, y.data(), pos.size());
  return y;
}

StepReport make_report(const Evaluation& ev, double phi, bool applied, double delta) {
  StepReport r;
  r.f_values = ev.f_values;
  r.f_sum = ev.f_sum;
  r.f_max = ev.f_max;
  r.phi = phi;
  r.grad_norm_sq_sum = ev.grad_norm_sq_sum;
  r.repulsion_applied = applied;
  r.delta = delta;
  return r;
}

// The degenerate-input policy: a diversity gradient is unavailable when some
// pair sits at or below the floor; callers fall back to the plain probe.
std::optional<Matrix> try_diversity_gradient(const Matrix& pos,
                                             const DiversityScore& score) {
  try {
    return riesz_energy_gradient(pos, score);
  } catch (const CoincidentParticlesError&) {
    return std::nullopt;
  }
}

void ensure_finite(const Matrix& mat, const char* what) {
  if (!mat.all_finite()) {
    throw NumericError(std::string("non-finite arithmetic in ") + what);
  }
}

}  // namespace

std::string_view method_name(Method m) {
  switch (m) {
    case Method::kFsum: return "fsum";
    case Method::kFmax: return "fmax";
    case Method::kLinear: return "linear";
    case Method::kVarianceClosedForm: return "variance_closed_form";
    case Method::kMomentumV2: return "momentum_v2";
  }
  return "unknown";
}

Method method_from_name(const std::string& name) {
  if (name == "fsum") return Method::kFsum;
  if (name == "fmax") return Method::kFmax;
  if (name == "linear") return Method::kLinear;
  if (name == "variance_closed_form") return Method::kVarianceClosedForm;
  if (name == "momentum_v2") return Method::kMomentumV2;
  throw ConfigError("unknown method '" + name +
                    "' (valid: fsum, fmax, linear, variance_closed_form, momentum_v2)");
}

void OptimizerConfig::validate() const {
  if (!(mu > 0.0)) throw ConfigError("mu must be > 0");
  if (!(eta >= 0.0 && eta <= 1.0)) throw ConfigError("eta must be in [0, 1]");
  if (method == Method::kFmax && eta == 0.0) {
    throw ConfigError("fmax requires eta in (0, 1]");
  }
  if (!(alpha >= 0.0 && alpha <= 1.0)) throw ConfigError("alpha must be in [0, 1]");
  if (!(beta >= 0.0)) throw ConfigError("beta must be >= 0");
  if (max_iters < 0) throw ConfigError("max_iters must be >= 0");
  if (std::isnan(grad_tol)) throw ConfigError("grad_tol must not be NaN");
}

std::pair<ParticleSet, double> gradient_probe(const ParticleSet& x,
                                              const ObjectiveOracle& f, double mu) {
  if (!(mu > 0.0)) throw ConfigError("gradient_probe: mu must be > 0");
  const Evaluation ev = evaluate(x.positions, f);
  Matrix y = probe_positions(x.positions, ev.grads, mu);
  return {ParticleSet(std::move(y)), mu * mu * ev.grad_norm_sq_sum};
}

StepResult fsum_step(const ParticleSet& x, const ObjectiveOracle& f,
                     const DiversityScore& phi, const OptimizerConfig& cfg) {
  const Evaluation ev = evaluate(x.positions, f);
  Matrix y = probe_positions(x.positions, ev.grads, cfg.mu);
  const double phi_now = riesz_energy(x.positions, phi);

  bool applied = false;
  Matrix next = y;
  if (cfg.eta > 0.0 && x.count() > 1) {
    if (auto g = try_diversity_gradient(y, phi)) {
      const double g_sq = sum_sq_by_particle(*g);
      if (g_sq > kRepulsionNormFloor) {
        const double scale =
            -cfg.eta * cfg.mu * std::sqrt(ev.grad_norm_sq_sum / g_sq);
        kernels::scaled_add(y.data(), g->data(), scale, next.data(), y.size());
        applied = true;
      }
    }
  }
  ensure_finite(next, "fsum_step");
  return {ParticleSet(std::move(next)), make_report(ev, phi_now, applied, 0.0)};
}

StepResult fmax_step(const ParticleSet& x, const ObjectiveOracle& f,
                     const DiversityScore& phi, const OptimizerConfig& cfg) {
  if (!(cfg.eta > 0.0 && cfg.eta <= 1.0)) {
    throw ConfigError("fmax_step: eta must be in (0, 1]");
  }
  const std::size_t m = x.count();
  const std::size_t d = x.dim();
  const Evaluation ev = evaluate(x.positions, f);
  Matrix y = probe_positions(x.positions, ev.grads, cfg.mu);
  const double phi_now = riesz_energy(x.positions, phi);

  // Surrogate loss: the smoothness-implied value after one plain step.
  std::vector<double> f_sur(m);
  for (std::size_t i = 0; i < m; ++i) {
    f_sur[i] = ev.f_values[i] - 0.5 * cfg.mu * ev.grad_sq[i];
  }
  double max_sur = f_sur[0];
  for (double v : f_sur)
    if (v > max_sur) max_sur = v;
  const double delta = ev.f_max - max_sur;

  bool applied = false;
  Matrix next = y;
  if (auto g = try_diversity_gradient(y, phi)) {
    for (std::size_t i = 0; i < m; ++i) {
      const double xi_sq =
          2.0 * cfg.mu * ((1.0 - cfg.eta) * max_sur + cfg.eta * ev.f_max - f_sur[i]);
      double g_sq = 0.0;
      for (std::size_t k = 0; k < d; ++k) g_sq += (*g)(i, k) * (*g)(i, k);
      const double g_norm = std::sqrt(g_sq);
      if (g_norm > kPerParticleNormFloor && xi_sq >= 0.0) {
        const double step = std::sqrt(xi_sq) / g_norm;
        for (std::size_t k = 0; k < d; ++k) {
          next(i, k) = y(i, k) - step * (*g)(i, k);
        }
        applied = true;
      }
    }
  }
  ensure_finite(next, "fmax_step");
  return {ParticleSet(std::move(next)), make_report(ev, phi_now, applied, delta)};
}

StepResult linear_combo_step(const ParticleSet& x, const ObjectiveOracle& f,
                             const DiversityScore& phi, const OptimizerConfig& cfg) {
  if (!(cfg.alpha >= 0.0 && cfg.alpha <= 1.0)) {
    throw ConfigError("linear_combo_step: alpha must be in [0, 1]");
  }
  const Evaluation ev = evaluate(x.positions, f);
  const double phi_now = riesz_energy(x.positions, phi);

  Matrix direction(x.count(), x.dim(), 0.0);
  bool applied = false;
  if (cfg.alpha > 0.0 && x.count() > 1) {
    if (auto g = try_diversity_gradient(x.positions, phi)) {
      direction = std::move(*g);
      applied = sum_sq_by_particle(direction) > 0.0;
    }
  }
  for (std::size_t idx = 0; idx < direction.size(); ++idx) {
    direction.data()[idx] = (1.0 - cfg.alpha) * ev.grads.data()[idx] +
                            cfg.alpha * direction.data()[idx];
  }
  Matrix next(x.count(), x.dim());
  kernels::scaled_add(x.positions.data(), direction.data(), -cfg.mu, next.data(),
                      next.size());
  ensure_finite(next, "linear_combo_step");
  return {ParticleSet(std::move(next)), make_report(ev, phi_now, applied, 0.0)};
}

StepResult variance_closed_form_step(const ParticleSet& x, const ObjectiveOracle& f,
                                     const OptimizerConfig& cfg) {
  const Evaluation ev = evaluate(x.positions, f);
  Matrix y = probe_positions(x.positions, ev.grads, cfg.mu);
  DiversityScore variance_score;
  variance_score.s = -2.0;
  const double phi_now = riesz_energy(x.positions, variance_score);

  // Deviations from the probe mean; the closed form scales them directly.
  const Matrix mean = column_means(y);
  Matrix dev(y.rows(), y.cols());
  for (std::size_t k = 0; k < y.cols(); ++k) {
    for (std::size_t i = 0; i < y.rows(); ++i) dev(i, k) = y(i, k) - mean(0, k);
  }
  double step_sq = 0.0;  // sum_i |y_i - x_i|^2
  for (std::size_t i = 0; i < y.rows(); ++i) {
    double t = 0.0;
    for (std::size_t k = 0; k < y.cols(); ++k) {
      const double diff = y(i, k) - x.positions(i, k);
      t += diff * diff;
    }
    step_sq += t;
  }
  const double dev_sq = sum_sq_by_particle(dev);

  bool applied = false;
  Matrix next = y;
  if (dev_sq > kRepulsionNormFloor && step_sq > 0.0 && cfg.eta > 0.0) {
    const double scale = cfg.eta * std::sqrt(step_sq) / std::sqrt(dev_sq);
    kernels::scaled_add(y.data(), dev.data(), scale, next.data(), y.size());
    applied = true;
  }
  ensure_finite(next, "variance_closed_form_step");
  return {ParticleSet(std::move(next)), make_report(ev, phi_now, applied, 0.0)};
}

StepResult momentum_v2_step(const ParticleSet& x, const ObjectiveOracle& f,
                            const OptimizerConfig& cfg) {
  if (!x.velocities) {
    throw ConfigError("momentum_v2_step requires velocities");
  }
  if (!(cfg.beta >= 0.0)) throw ConfigError("momentum_v2_step: beta must be >= 0");
  const std::size_t m = x.count();
  const std::size_t d = x.dim();
  const Evaluation ev = evaluate(x.positions, f);
  DiversityScore variance_score;
  variance_score.s = -2.0;
  const double phi_now = riesz_energy(x.positions, variance_score);

  const double mu_eff = cfg.mu / (1.0 + cfg.mu * cfg.beta);
  Matrix z = probe_positions(x.positions, ev.grads, mu_eff);

  // Repulsion budget from the velocity energy, clamped at zero when the
  // gradient term dominates.
  double xi0_sq = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    double v_sq = 0.0;
    for (std::size_t k = 0; k < d; ++k) {
      const double v = (*x.velocities)(i, k);
      v_sq += v * v;
    }
    xi0_sq += mu_eff * cfg.beta * v_sq - mu_eff * mu_eff * ev.grad_sq[i];
  }
  if (xi0_sq < 0.0) xi0_sq = 0.0;

  const Matrix mean = column_means(z);
  Matrix dev(m, d);
  for (std::size_t k = 0; k < d; ++k) {
    for (std::size_t i = 0; i < m; ++i) dev(i, k) = z(i, k) - mean(0, k);
  }
  const double dev_sq = sum_sq_by_particle(dev);

  bool applied = false;
  Matrix next = z;
  if (xi0_sq > 0.0 && dev_sq > kRepulsionNormFloor) {
    const double scale = cfg.eta * std::sqrt(xi0_sq) / std::sqrt(dev_sq);
    kernels::scaled_add(z.data(), dev.data(), scale, next.data(), z.size());
    applied = true;
  }
  ensure_finite(next, "momentum_v2_step");
  Matrix v_next(m, d);
  for (std::size_t idx = 0; idx < v_next.size(); ++idx) {
    v_next.data()[idx] = next.data()[idx] - x.positions.data()[idx];
  }
  return {ParticleSet(std::move(next), std::move(v_next)),
          make_report(ev, phi_now, applied, 0.0)};
}

namespace {

StepResult dispatch_step(const ParticleSet& x, const ObjectiveOracle& f,
                         const DiversityScore& score, const OptimizerConfig& cfg) {
  switch (cfg.method) {
    case Method::kFsum: return fsum_step(x, f, score, cfg);
    case Method::kFmax: return fmax_step(x, f, score, cfg);
    case Method::kLinear: return linear_combo_step(x, f, score, cfg);
    case Method::kVarianceClosedForm: return variance_closed_form_step(x, f, cfg);
    case Method::kMomentumV2: return momentum_v2_step(x, f, cfg);
  }
  throw ConfigError("unknown optimizer method");
}

}  // namespace

Trajectory run(const ParticleSet& x0, const ObjectiveOracle& f,
               const DiversityScore& score, const OptimizerConfig& cfg,
               long snapshot_stride) {
  cfg.validate();
  if (snapshot_stride < 1) throw ConfigError("snapshot_stride must be >= 1");
  x0.validate();

  ParticleSet x = x0;
  if (cfg.method == Method::kMomentumV2 && !x.velocities) {
    x.velocities = Matrix(x.count(), x.dim(), 0.0);
  }

  Trajectory traj;
  traj.config = cfg;
  const auto start = std::chrono::steady_clock::now();
  for (long t = 0;; ++t) {
    try {
      const Evaluation ev = evaluate(x.positions, f);
      const double phi_now = riesz_energy(x.positions, score);
      const bool last =
          t >= cfg.max_iters || ev.grad_norm_sq_sum <= cfg.grad_tol;
      if (t % snapshot_stride == 0 || last) {
        if (traj.snapshots.empty() || traj.snapshots.back().first != t) {
          traj.snapshots.emplace_back(t, x.positions);
        }
      }
      if (last) {
        StepReport r = make_report(ev, phi_now, false, 0.0);
        r.iteration = t;
        traj.reports.push_back(std::move(r));
        break;
      }
      StepResult sr = dispatch_step(x, f, score, cfg);
      StepReport r = make_report(ev, phi_now, sr.report.repulsion_applied,
                                 sr.report.delta);
      r.iteration = t;
      traj.reports.push_back(std::move(r));
      x = std::move(sr.next);
    } catch (const NumericError& e) {
      throw NumericError("iteration " + std::to_string(t) + ": " + e.what());
    }
  }
  traj.wall_time_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return traj;
}

}  // namespace divopt
