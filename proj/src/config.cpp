#include "divopt/config.hpp"

#include <algorithm>
#include <charconv>
#include <set>
#include <sstream>

#include "divopt/csv.hpp"
#include "divopt/errors.hpp"

namespace divopt {

namespace {

std::string trim(const std::string& s) {
  const auto begin = s.find_first_not_of(" \t\r");
  if (begin == std::string::npos) return "";
  const auto end = s.find_last_not_of(" \t\r");
  return s.substr(begin, end - begin + 1);
}

std::vector<std::string> split_list(const std::string& value) {
  std::vector<std::string> items;
  std::string current;
  std::istringstream in(value);
  while (std::getline(in, current, ',')) {
    const std::string item = trim(current);
    if (!item.empty()) items.push_back(item);
  }
  return items;
}

double parse_real(const std::string& key, const std::string& value) {
  try {
    return parse_double(value);
  } catch (const ConfigError&) {
    throw ConfigError("config key '" + key + "': not a number: '" + value + "'");
  }
}

long parse_integer(const std::string& key, const std::string& value) {
  long out = 0;
  const auto result = std::from_chars(value.data(), value.data() + value.size(), out);
  if (result.ec != std::errc() || result.ptr != value.data() + value.size()) {
    throw ConfigError("config key '" + key + "': not an integer: '" + value + "'");
  }
  return out;
}

std::uint64_t parse_seed(const std::string& key, const std::string& value) {
  std::uint64_t out = 0;
  const auto result = std::from_chars(value.data(), value.data() + value.size(), out);
  if (result.ec != std::errc() || result.ptr != value.data() + value.size()) {
    throw ConfigError("config key '" + key + "': not a seed: '" + value + "'");
  }
  return out;
}

const std::set<std::string>& known_keys() {
  static const std::set<std::string> keys = {
      "landscape", "method", "methods", "m", "d", "mu", "eta", "alpha",
      "alphas", "beta", "s", "max_iters", "snapshot_stride", "grad_tol",
      "distance_floor", "seed", "seeds", "init", "init_sigma", "init_lo",
      "init_hi", "output_dir"};
  return keys;
}

}  // namespace

ExperimentConfig parse_config_text(const std::string& text) {
  std::map<std::string, std::string> entries;
  std::istringstream in(text);
  std::string line;
  int line_number = 0;
  while (std::getline(in, line)) {
    ++line_number;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("config line " + std::to_string(line_number) +
                        ": expected 'key = value'");
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (!known_keys().count(key)) {
      throw ConfigError("unknown config key '" + key + "'");
    }
    if (entries.count(key)) {
      throw ConfigError("duplicate config key '" + key + "'");
    }
    entries[key] = value;
  }

  ExperimentConfig cfg;
  auto take = [&entries](const std::string& key) -> std::optional<std::string> {
    auto it = entries.find(key);
    if (it == entries.end()) return std::nullopt;
    std::string value = it->second;
    entries.erase(it);
    return value;
  };

  if (auto v = take("landscape")) cfg.landscape = *v;
  else throw ConfigError("missing required config key 'landscape'");

  if (auto v = take("method")) cfg.method = method_from_name(*v);
  if (auto v = take("methods")) {
    for (const auto& item : split_list(*v)) {
      method_from_name(item);  // validate early
      cfg.methods.push_back(item);
    }
    if (cfg.methods.empty()) throw ConfigError("config key 'methods': empty list");
  }

  if (auto v = take("m")) {
    const long m = parse_integer("m", *v);
    if (m < 1) throw ConfigError("config key 'm': must be >= 1");
    cfg.particle_count = static_cast<std::size_t>(m);
  } else {
    throw ConfigError("missing required config key 'm'");
  }
  if (auto v = take("d")) {
    const long d = parse_integer("d", *v);
    if (d < 1) throw ConfigError("config key 'd': must be >= 1");
    cfg.dim = static_cast<std::size_t>(d);
  }
  if (auto v = take("mu")) cfg.mu = parse_real("mu", *v);
  if (auto v = take("eta")) cfg.eta = parse_real("eta", *v);
  if (auto v = take("alpha")) cfg.alpha = parse_real("alpha", *v);
  if (auto v = take("beta")) cfg.beta = parse_real("beta", *v);
  if (auto v = take("s")) cfg.s = parse_real("s", *v);
  if (auto v = take("max_iters")) {
    cfg.max_iters = parse_integer("max_iters", *v);
    if (cfg.max_iters < 0) throw ConfigError("config key 'max_iters': must be >= 0");
  }
  if (auto v = take("snapshot_stride")) {
    cfg.snapshot_stride = parse_integer("snapshot_stride", *v);
    if (cfg.snapshot_stride < 1) {
      throw ConfigError("config key 'snapshot_stride': must be >= 1");
    }
  }
  if (auto v = take("grad_tol")) cfg.grad_tol = parse_real("grad_tol", *v);
  if (auto v = take("distance_floor")) {
    cfg.distance_floor = parse_real("distance_floor", *v);
    if (!(cfg.distance_floor > 0.0)) {
      throw ConfigError("config key 'distance_floor': must be > 0");
    }
  }

  const auto seed_single = take("seed");
  const auto seed_list = take("seeds");
  if (seed_single && seed_list) {
    throw ConfigError("config keys 'seed' and 'seeds' are mutually exclusive");
  }
  if (seed_single) cfg.seeds.push_back(parse_seed("seed", *seed_single));
  if (seed_list) {
    for (const auto& item : split_list(*seed_list)) {
      cfg.seeds.push_back(parse_seed("seeds", item));
    }
  }
  if (cfg.seeds.empty()) {
    throw ConfigError("missing required config key 'seed' (or 'seeds')");
  }

  const auto init_kind = take("init");
  const auto init_sigma = take("init_sigma");
  const auto init_lo = take("init_lo");
  const auto init_hi = take("init_hi");
  const std::string kind = init_kind.value_or("gaussian");
  if (kind == "gaussian") {
    if (init_lo || init_hi) {
      throw ConfigError("config keys 'init_lo'/'init_hi' require init = uniform_box");
    }
    GaussianInit g;
    if (init_sigma) g.sigma = parse_real("init_sigma", *init_sigma);
    if (!(g.sigma > 0.0)) throw ConfigError("config key 'init_sigma': must be > 0");
    cfg.init = g;
  } else if (kind == "uniform_box") {
    if (init_sigma) {
      throw ConfigError("config key 'init_sigma' requires init = gaussian");
    }
    if (!init_lo || !init_hi) {
      throw ConfigError("init = uniform_box requires 'init_lo' and 'init_hi'");
    }
    UniformBoxInit box;
    for (const auto& item : split_list(*init_lo)) {
      box.lo.push_back(parse_real("init_lo", item));
    }
    for (const auto& item : split_list(*init_hi)) {
      box.hi.push_back(parse_real("init_hi", item));
    }
    if (box.lo.empty() || box.hi.empty()) {
      throw ConfigError("init_lo/init_hi must contain at least one value");
    }
    cfg.init = box;
  } else {
    throw ConfigError("config key 'init': expected gaussian or uniform_box, got '" +
                      kind + "'");
  }

  if (auto v = take("alphas")) {
    std::vector<double> grid;
    for (const auto& item : split_list(*v)) {
      grid.push_back(parse_real("alphas", item));
    }
    if (grid.empty()) throw ConfigError("config key 'alphas': empty list");
    for (double a : grid) {
      if (!(a >= 0.0 && a <= 1.0)) {
        throw ConfigError("config key 'alphas': values must be in [0, 1]");
      }
    }
    cfg.alphas = std::move(grid);
  }
  if (auto v = take("output_dir")) cfg.output_dir = *v;

  // Range checks shared with OptimizerConfig.
  cfg.optimizer_config().validate();
  return cfg;
}

ExperimentConfig parse_config_file(const std::filesystem::path& path) {
  return parse_config_text(read_text_file(path));
}

std::string ExperimentConfig::to_text() const {
  std::string out;
  auto line = [&out](const std::string& key, const std::string& value) {
    out += key + " = " + value + "\n";
  };
  line("landscape", landscape);
  if (method) line("method", std::string(method_name(*method)));
  if (!methods.empty()) {
    std::string joined;
    for (const auto& m : methods) {
      if (!joined.empty()) joined += ", ";
      joined += m;
    }
    line("methods", joined);
  }
  line("m", std::to_string(particle_count));
  if (dim != 0) line("d", std::to_string(dim));
  line("mu", format_double(mu));
  line("eta", format_double(eta));
  line("alpha", format_double(alpha));
  line("beta", format_double(beta));
  line("s", format_double(s));
  line("max_iters", std::to_string(max_iters));
  line("snapshot_stride", std::to_string(snapshot_stride));
  line("grad_tol", format_double(grad_tol));
  line("distance_floor", format_double(distance_floor));
  {
    std::string joined;
    for (std::uint64_t seed : seeds) {
      if (!joined.empty()) joined += ", ";
      joined += std::to_string(seed);
    }
    line(seeds.size() == 1 ? "seed" : "seeds", joined);
  }
  if (const auto* g = std::get_if<GaussianInit>(&init)) {
    line("init", "gaussian");
    line("init_sigma", format_double(g->sigma));
  } else {
    const auto& box = std::get<UniformBoxInit>(init);
    auto joined = [](const std::vector<double>& v) {
      std::string s;
      for (double x : v) {
        if (!s.empty()) s += ", ";
        s += format_double(x);
      }
      return s;
    };
    line("init", "uniform_box");
    line("init_lo", joined(box.lo));
    line("init_hi", joined(box.hi));
  }
  if (alphas) {
    std::string joined;
    for (double a : *alphas) {
      if (!joined.empty()) joined += ", ";
      joined += format_double(a);
    }
    line("alphas", joined);
  }
  if (!output_dir.empty()) line("output_dir", output_dir);
  return out;
}

OptimizerConfig ExperimentConfig::optimizer_config() const {
  OptimizerConfig cfg;
  cfg.method = method.value_or(Method::kFsum);
  cfg.mu = mu;
  cfg.eta = eta;
  cfg.alpha = alpha;
  cfg.beta = beta;
  cfg.max_iters = max_iters;
  cfg.grad_tol = grad_tol;
  return cfg;
}

DiversityScore ExperimentConfig::diversity_score() const {
  DiversityScore score;
  score.s = s;
  score.distance_floor = distance_floor;
  return score;
}

ExperimentSetup ExperimentConfig::setup() const {
  ExperimentSetup setup;
  setup.landscape = make_landscape(landscape, dim);
  setup.score = diversity_score();
  setup.config = optimizer_config();
  setup.particle_count = particle_count;
  setup.init = init;
  setup.snapshot_stride = snapshot_stride;
  return setup;
}

}  // namespace divopt
