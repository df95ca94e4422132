#include "divopt/harness.hpp"

#include <cmath>
#include <string>

#include "divopt/errors.hpp"

#include "json.hpp"

namespace divopt {

namespace {

// Dominance under (minimize loss, maximize diversity); strict in at least one
// coordinate.
bool dominates(const FrontPoint& a, const FrontPoint& b) {
  return a.loss <= b.loss && a.diversity >= b.diversity &&
         (a.loss < b.loss || a.diversity > b.diversity);
}

nlohmann::ordered_json json_number(double v) {
  if (std::isfinite(v)) return v;
  if (std::isnan(v)) return nullptr;
  return v > 0 ? "inf" : "-inf";
}

}  // namespace

Trajectory run_experiment(const ExperimentSetup& setup, std::uint64_t seed) {
  const ParticleSet x0 =
      init_particles(setup.particle_count, setup.landscape.dim, setup.init, seed);
  return run(x0, setup.landscape.oracle, setup.score, setup.config,
             setup.snapshot_stride);
}

FrontPoint front_point_from(const Trajectory& traj, std::string label,
                            double alpha, std::uint64_t seed) {
  FrontPoint p;
  const StepReport& last = traj.final_report();
  p.loss = traj.config.method == Method::kFmax ? last.f_max : last.f_sum;
  p.diversity = -last.phi;
  p.label = std::move(label);
  p.alpha = alpha;
  p.seed = seed;
  p.degenerate = !std::isfinite(last.phi);
  return p;
}

std::vector<FrontPoint> sweep_linear_alpha(const ExperimentSetup& setup,
                                           std::span<const double> alphas,
                                           std::span<const std::uint64_t> seeds) {
  if (seeds.empty()) throw ConfigError("sweep_linear_alpha: seeds must be non-empty");
  for (double a : alphas) {
    if (!(a >= 0.0 && a <= 1.0)) {
      throw ConfigError("sweep_linear_alpha: alpha must be in [0, 1]");
    }
  }
  std::vector<FrontPoint> points;
  points.reserve(alphas.size() * seeds.size());
  for (double a : alphas) {
    ExperimentSetup local = setup;
    local.config.method = Method::kLinear;
    local.config.alpha = a;
    for (std::uint64_t seed : seeds) {
      try {
        const Trajectory traj = run_experiment(local, seed);
        points.push_back(front_point_from(traj, "linear", a, seed));
      } catch (const NumericError& e) {
        throw NumericError("alpha=" + std::to_string(a) +
                           ", seed=" + std::to_string(seed) + ": " + e.what());
      }
    }
  }
  return points;
}

std::vector<std::size_t> pareto_front(std::span<const FrontPoint> points) {
  std::vector<std::size_t> front;
  for (std::size_t i = 0; i < points.size(); ++i) {
    bool dominated = false;
    for (std::size_t j = 0; j < points.size() && !dominated; ++j) {
      if (j != i && dominates(points[j], points[i])) dominated = true;
    }
    if (!dominated) front.push_back(i);
  }
  return front;
}

UniformityStats uniformity_stats(const ParticleSet& points) {
  const std::size_t m = points.count();
  if (m < 2) throw ConfigError("uniformity_stats requires m >= 2");
  const std::size_t d = points.dim();
  const Matrix& pos = points.positions;
  UniformityStats stats;
  stats.min_pairwise_distance = std::numeric_limits<double>::infinity();
  std::vector<double> nearest(m, std::numeric_limits<double>::infinity());
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = i + 1; j < m; ++j) {
      double u = 0.0;
      for (std::size_t k = 0; k < d; ++k) {
        const double diff = pos(i, k) - pos(j, k);
        u += diff * diff;
      }
      const double dist = std::sqrt(u);
      if (dist < stats.min_pairwise_distance) stats.min_pairwise_distance = dist;
      if (dist < nearest[i]) nearest[i] = dist;
      if (dist < nearest[j]) nearest[j] = dist;
    }
  }
  double mean = 0.0;
  for (double v : nearest) mean += v;
  mean /= static_cast<double>(m);
  double var = 0.0;
  for (double v : nearest) var += (v - mean) * (v - mean);
  var /= static_cast<double>(m);
  stats.mean_nearest_neighbor = mean;
  stats.stddev_nearest_neighbor = std::sqrt(var);
  return stats;
}

CompareReport compare_methods(const ExperimentSetup& base,
                              std::span<const LabeledConfig> configs,
                              std::span<const std::uint64_t> seeds) {
  if (configs.empty()) throw ConfigError("compare_methods: configs must be non-empty");
  if (seeds.empty()) throw ConfigError("compare_methods: seeds must be non-empty");

  CompareReport report;
  for (const LabeledConfig& lc : configs) {
    ExperimentSetup local = base;
    local.config = lc.config;
    MethodSummary summary;
    summary.label = lc.label;
    std::vector<double> losses;
    std::vector<double> diversities;
    for (std::uint64_t seed : seeds) {
      try {
        const Trajectory traj = run_experiment(local, seed);
        FrontPoint p = front_point_from(
            traj, lc.label,
            lc.config.method == Method::kLinear
                ? lc.config.alpha
                : std::numeric_limits<double>::quiet_NaN(),
            seed);
        losses.push_back(p.loss);
        diversities.push_back(p.diversity);
        report.points.push_back(std::move(p));
      } catch (const NumericError& e) {
        throw NumericError("method=" + lc.label +
                           ", seed=" + std::to_string(seed) + ": " + e.what());
      }
    }
    auto mean_of = [](const std::vector<double>& v) {
      double acc = 0.0;
      for (double x : v) acc += x;
      return acc / static_cast<double>(v.size());
    };
    auto stddev_of = [&](const std::vector<double>& v, double mean) {
      double acc = 0.0;
      for (double x : v) acc += (x - mean) * (x - mean);
      return std::sqrt(acc / static_cast<double>(v.size()));
    };
    summary.point_count = losses.size();
    summary.mean_loss = mean_of(losses);
    summary.stddev_loss = stddev_of(losses, summary.mean_loss);
    summary.mean_diversity = mean_of(diversities);
    summary.stddev_diversity = stddev_of(diversities, summary.mean_diversity);
    report.methods.push_back(std::move(summary));
  }

  report.nondominated.assign(report.points.size(), false);
  for (std::size_t idx : pareto_front(report.points)) {
    report.nondominated[idx] = true;
  }
  std::size_t point_index = 0;
  for (auto& summary : report.methods) {
    for (std::size_t i = 0; i < summary.point_count; ++i, ++point_index) {
      if (report.nondominated[point_index]) ++summary.nondominated_count;
    }
  }
  return report;
}

std::string serialize_compare_report(const CompareReport& report) {
  nlohmann::ordered_json doc;
  doc["methods"] = nlohmann::ordered_json::array();
  for (const auto& m : report.methods) {
    nlohmann::ordered_json entry;
    entry["label"] = m.label;
    entry["mean_loss"] = json_number(m.mean_loss);
    entry["stddev_loss"] = json_number(m.stddev_loss);
    entry["mean_diversity"] = json_number(m.mean_diversity);
    entry["stddev_diversity"] = json_number(m.stddev_diversity);
    entry["points"] = m.point_count;
    entry["nondominated"] = m.nondominated_count;
    doc["methods"].push_back(std::move(entry));
  }
  doc["points"] = nlohmann::ordered_json::array();
  for (std::size_t i = 0; i < report.points.size(); ++i) {
    const auto& p = report.points[i];
    nlohmann::ordered_json entry;
    entry["label"] = p.label;
    entry["alpha"] = std::isnan(p.alpha) ? nlohmann::ordered_json(nullptr)
                                         : nlohmann::ordered_json(p.alpha);
    entry["seed"] = p.seed;
    entry["loss"] = json_number(p.loss);
    entry["diversity"] = json_number(p.diversity);
    entry["degenerate"] = p.degenerate;
    entry["nondominated"] = static_cast<bool>(report.nondominated[i]);
    doc["points"].push_back(std::move(entry));
  }
  return doc.dump(2) + "\n";
}

std::vector<double> contour_spread_trace(const Trajectory& traj) {
  std::vector<double> spread;
  spread.reserve(traj.reports.size());
  for (const StepReport& r : traj.reports) {
    double lo = r.f_values.front();
    double hi = r.f_values.front();
    for (double v : r.f_values) {
      if (v < lo) lo = v;
      if (v > hi) hi = v;
    }
    spread.push_back(hi - lo);
  }
  return spread;
}

}  // namespace divopt
