// Command-line front end: run / sweep / compare / plot.

#include <cmath>
#include <filesystem>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "divopt/config.hpp"
#include "divopt/csv.hpp"
#include "divopt/errors.hpp"
#include "divopt/harness.hpp"
#include "divopt/kernels.hpp"
#include "divopt/svg.hpp"
#include "divopt/version.hpp"

namespace fs = std::filesystem;
using namespace divopt;

namespace {

struct CommonFlags {
  std::string config_path;
  std::string out_dir;
  std::optional<std::uint64_t> seed_override;
  bool quiet = false;
};

void add_common(CLI::App* cmd, CommonFlags& flags, bool needs_config) {
  auto* opt = cmd->add_option("--config", flags.config_path, "experiment config file");
  if (needs_config) opt->required();
  cmd->add_option("--out", flags.out_dir, "output directory (overrides output_dir)");
  cmd->add_option("--seed", flags.seed_override, "override the config seed list");
  cmd->add_flag("--quiet", flags.quiet, "suppress informational output");
}

ExperimentConfig load_config(const CommonFlags& flags) {
  ExperimentConfig cfg = parse_config_file(flags.config_path);
  if (flags.seed_override) cfg.seeds = {*flags.seed_override};
  if (!flags.out_dir.empty()) cfg.output_dir = flags.out_dir;
  if (cfg.output_dir.empty()) {
    throw ConfigError("no output directory: set output_dir in the config or pass --out");
  }
  return cfg;
}

nlohmann::ordered_json json_number(double v) {
  if (std::isfinite(v)) return v;
  if (std::isnan(v)) return nullptr;
  return v > 0 ? "inf" : "-inf";
}

nlohmann::ordered_json config_echo(const ExperimentConfig& cfg) {
  nlohmann::ordered_json echo;
  std::istringstream lines(cfg.to_text());
  std::string line;
  while (std::getline(lines, line)) {
    const auto eq = line.find('=');
    if (eq == std::string::npos) continue;
    const std::string key = line.substr(0, eq - 1);
    echo[key] = line.substr(eq + 2);
  }
  return echo;
}

void write_run_outputs(const ExperimentConfig& cfg, std::uint64_t seed,
                       const Trajectory& traj, const fs::path& dir, bool quiet) {
  fs::create_directories(dir);
  write_text_file(dir / "trajectory.csv", trajectory_csv(traj));
  write_text_file(dir / "snapshots.csv", snapshots_csv(traj));

  ExperimentConfig echo_cfg = cfg;
  echo_cfg.seeds = {seed};
  echo_cfg.output_dir = dir.string();

  const StepReport& last = traj.final_report();
  nlohmann::ordered_json summary;
  summary["artifact"] = kArtifactName;
  summary["version"] = kArtifactVersion;
  summary["kernel_backend"] = std::string(kernels::active_backend_name());
  summary["config"] = config_echo(echo_cfg);
  summary["config_text"] = echo_cfg.to_text();
  nlohmann::ordered_json final_metrics;
  final_metrics["iterations"] = last.iteration;
  final_metrics["f_sum"] = json_number(last.f_sum);
  final_metrics["f_max"] = json_number(last.f_max);
  final_metrics["phi"] = json_number(last.phi);
  final_metrics["diversity"] = json_number(-last.phi);
  final_metrics["grad_norm_sq_sum"] = json_number(last.grad_norm_sq_sum);
  summary["final"] = final_metrics;
  summary["wall_time_seconds"] = traj.wall_time_seconds;
  write_text_file(dir / "summary.json", summary.dump(2) + "\n");

  if (!quiet) {
    std::cout << "wrote " << (dir / "trajectory.csv").string() << " ("
              << traj.reports.size() << " rows), snapshots.csv, summary.json\n";
  }
}

int cmd_run(const CommonFlags& flags) {
  const ExperimentConfig cfg = load_config(flags);
  if (!cfg.method) {
    throw ConfigError("missing required config key 'method'");
  }
  const ExperimentSetup setup = cfg.setup();
  const fs::path base(cfg.output_dir);
  for (std::uint64_t seed : cfg.seeds) {
    const fs::path dir =
        cfg.seeds.size() == 1 ? base : base / ("seed_" + std::to_string(seed));
    const Trajectory traj = run_experiment(setup, seed);
    write_run_outputs(cfg, seed, traj, dir, flags.quiet);
  }
  return 0;
}

int cmd_sweep(const CommonFlags& flags) {
  const ExperimentConfig cfg = load_config(flags);
  if (cfg.method && *cfg.method != Method::kLinear) {
    throw ConfigError("sweep runs the linear method; remove 'method' or set it to linear");
  }
  ExperimentSetup setup = cfg.setup();
  setup.config.method = Method::kLinear;
  std::vector<double> alphas(kDefaultAlphaGrid.begin(), kDefaultAlphaGrid.end());
  if (cfg.alphas) alphas = *cfg.alphas;

  const auto points = sweep_linear_alpha(setup, alphas, cfg.seeds);
  std::unique_ptr<bool[]> nd(new bool[points.size()]());
  for (std::size_t idx : pareto_front(points)) nd[idx] = true;

  fs::create_directories(cfg.output_dir);
  const fs::path out = fs::path(cfg.output_dir) / "front.csv";
  write_text_file(out, front_csv(points, std::span<const bool>(nd.get(), points.size())));
  if (!flags.quiet) {
    std::cout << "wrote " << out.string() << " (" << points.size() << " points)\n";
  }
  return 0;
}

int cmd_compare(const CommonFlags& flags) {
  const ExperimentConfig cfg = load_config(flags);
  if (cfg.methods.empty()) {
    throw ConfigError("missing required config key 'methods'");
  }
  const ExperimentSetup setup = cfg.setup();
  std::vector<LabeledConfig> configs;
  for (const std::string& name : cfg.methods) {
    OptimizerConfig oc = cfg.optimizer_config();
    oc.method = method_from_name(name);
    configs.push_back({name, oc});
  }
  const CompareReport report = compare_methods(setup, configs, cfg.seeds);

  fs::create_directories(cfg.output_dir);
  write_text_file(fs::path(cfg.output_dir) / "compare.json",
                  serialize_compare_report(report));
  std::unique_ptr<bool[]> raw(new bool[report.nondominated.size()]);
  for (std::size_t i = 0; i < report.nondominated.size(); ++i) {
    raw[i] = report.nondominated[i];
  }
  write_text_file(fs::path(cfg.output_dir) / "front.csv",
                  front_csv(report.points,
                            std::span<const bool>(raw.get(), report.nondominated.size())));
  if (!flags.quiet) {
    std::cout << "wrote compare.json and front.csv to " << cfg.output_dir << "\n";
  }
  return 0;
}

int cmd_plot(const std::string& run_dir, const std::string& out_dir, bool log_x,
             bool quiet) {
  const fs::path dir(run_dir);
  const fs::path summary_path = dir / "summary.json";
  const fs::path snapshots_path = dir / "snapshots.csv";
  const fs::path trajectory_path = dir / "trajectory.csv";
  if (!fs::exists(summary_path) || !fs::exists(snapshots_path) ||
      !fs::exists(trajectory_path)) {
    throw ConfigError("run directory must contain summary.json, snapshots.csv, "
                      "trajectory.csv: " + run_dir);
  }
  const auto summary = nlohmann::json::parse(read_text_file(summary_path));
  const std::string landscape_name = summary.at("config").at("landscape");
  std::size_t dim = 0;
  if (summary.at("config").contains("d")) {
    dim = std::stoul(summary.at("config").at("d").get<std::string>());
  }

  const CsvTable snapshots = read_csv(snapshots_path);
  if (snapshots.rows.empty()) {
    throw ConfigError("snapshots.csv has no rows: " + snapshots_path.string());
  }
  const std::size_t iter_col = snapshots.column("iter");
  long final_iter = 0;
  for (const auto& row : snapshots.rows) {
    final_iter = std::max(final_iter, std::stol(row[iter_col]));
  }
  std::vector<std::vector<double>> final_rows;
  const std::size_t d = snapshots.header.size() - 2;
  for (const auto& row : snapshots.rows) {
    if (std::stol(row[iter_col]) != final_iter) continue;
    std::vector<double> coords(d);
    for (std::size_t k = 0; k < d; ++k) coords[k] = parse_double(row[2 + k]);
    final_rows.push_back(std::move(coords));
  }
  Matrix particles(final_rows.size(), d);
  for (std::size_t i = 0; i < final_rows.size(); ++i) {
    particles.set_row(i, final_rows[i]);
  }

  const Landscape landscape = make_landscape(landscape_name, dim);
  const CsvTable traj = read_csv(trajectory_path);
  const std::size_t c_iter = traj.column("iter");
  const std::size_t c_fsum = traj.column("f_sum");
  const std::size_t c_fmax = traj.column("f_max");
  const std::size_t c_phi = traj.column("phi");
  std::vector<long> iters;
  std::vector<double> f_sum, f_max, neg_phi;
  for (const auto& row : traj.rows) {
    iters.push_back(std::stol(row[c_iter]));
    f_sum.push_back(parse_double(row[c_fsum]));
    f_max.push_back(parse_double(row[c_fmax]));
    neg_phi.push_back(-parse_double(row[c_phi]));
  }

  const fs::path out = out_dir.empty() ? dir : fs::path(out_dir);
  fs::create_directories(out);
  write_text_file(out / "scatter.svg", render_scatter_svg(landscape, particles));
  write_text_file(out / "trace.svg",
                  render_trace_svg(iters, f_sum, f_max, neg_phi, log_x));
  if (!quiet) {
    std::cout << "wrote " << (out / "scatter.svg").string() << " and trace.svg\n";
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"population optimizer for diverse points in optimum sets"};
  app.require_subcommand(1);

  CommonFlags run_flags, sweep_flags, compare_flags;
  auto* run_cmd = app.add_subcommand("run", "run one configured experiment");
  add_common(run_cmd, run_flags, true);
  auto* sweep_cmd = app.add_subcommand("sweep", "alpha sweep of the linear method");
  add_common(sweep_cmd, sweep_flags, true);
  auto* compare_cmd = app.add_subcommand("compare", "compare methods from shared seeds");
  add_common(compare_cmd, compare_flags, true);

  std::string plot_dir, plot_out;
  bool plot_log_x = false, plot_quiet = false;
  auto* plot_cmd = app.add_subcommand("plot", "render scatter.svg and trace.svg");
  plot_cmd->add_option("run_dir", plot_dir, "directory with a completed run")->required();
  plot_cmd->add_option("--out", plot_out, "output directory (default: run_dir)");
  plot_cmd->add_flag("--log-x", plot_log_x, "logarithmic iteration axis");
  plot_cmd->add_flag("--quiet", plot_quiet, "suppress informational output");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;
  }

  try {
    if (run_cmd->parsed()) return cmd_run(run_flags);
    if (sweep_cmd->parsed()) return cmd_sweep(sweep_flags);
    if (compare_cmd->parsed()) return cmd_compare(compare_flags);
    if (plot_cmd->parsed()) {
      return cmd_plot(plot_dir, plot_out, plot_log_x, plot_quiet);
    }
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 1;
  } catch (const NumericError& e) {
    std::cerr << "numeric error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
