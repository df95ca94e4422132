#include "divopt/csv.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "divopt/errors.hpp"

namespace divopt {

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  const auto result = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, result.ptr);
}

double parse_double(const std::string& text) {
  if (text == "inf") return std::numeric_limits<double>::infinity();
  if (text == "-inf") return -std::numeric_limits<double>::infinity();
  if (text == "nan") return std::numeric_limits<double>::quiet_NaN();
  double value = 0.0;
  const auto result = std::from_chars(text.data(), text.data() + text.size(), value);
  if (result.ec != std::errc() || result.ptr != text.data() + text.size()) {
    throw ConfigError("not a number: '" + text + "'");
  }
  return value;
}

std::string trajectory_csv(const Trajectory& traj) {
  std::string out = "iter,f_sum,f_max,phi,grad_norm_sq_sum,repulsion_applied\n";
  for (const StepReport& r : traj.reports) {
    out += std::to_string(r.iteration);
    out += ',';
    out += format_double(r.f_sum);
    out += ',';
    out += format_double(r.f_max);
    out += ',';
    out += format_double(r.phi);
    out += ',';
    out += format_double(r.grad_norm_sq_sum);
    out += ',';
    out += r.repulsion_applied ? '1' : '0';
    out += '\n';
  }
  return out;
}

std::string snapshots_csv(const Trajectory& traj) {
  std::string out = "iter,particle_index";
  const std::size_t d = traj.snapshots.empty() ? 0 : traj.snapshots.front().second.cols();
  for (std::size_t k = 0; k < d; ++k) {
    out += ",x" + std::to_string(k);
  }
  out += '\n';
  for (const auto& [iter, positions] : traj.snapshots) {
    for (std::size_t i = 0; i < positions.rows(); ++i) {
      out += std::to_string(iter);
      out += ',';
      out += std::to_string(i);
      for (std::size_t k = 0; k < positions.cols(); ++k) {
        out += ',';
        out += format_double(positions(i, k));
      }
      out += '\n';
    }
  }
  return out;
}

std::string front_csv(std::span<const FrontPoint> points,
                      std::span<const bool> nondominated) {
  std::string out = "method,alpha,seed,loss,diversity,nondominated\n";
  for (std::size_t i = 0; i < points.size(); ++i) {
    const FrontPoint& p = points[i];
    out += p.label;
    out += ',';
    if (!std::isnan(p.alpha)) out += format_double(p.alpha);
    out += ',';
    out += std::to_string(p.seed);
    out += ',';
    out += format_double(p.loss);
    out += ',';
    out += format_double(p.diversity);
    out += ',';
    out += nondominated[i] ? '1' : '0';
    out += '\n';
  }
  return out;
}

void write_text_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot write file: " + path.string());
  out << text;
  if (!out) throw ConfigError("failed writing file: " + path.string());
}

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot read file: " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

std::size_t CsvTable::column(const std::string& name) const {
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (header[i] == name) return i;
  }
  throw ConfigError("csv column not found: " + name);
}

CsvTable read_csv(const std::filesystem::path& path) {
  const std::string text = read_text_file(path);
  CsvTable table;
  std::istringstream lines(text);
  std::string line;
  bool first = true;
  while (std::getline(lines, line)) {
    if (line.empty()) continue;
    std::vector<std::string> fields;
    std::size_t start = 0;
    while (true) {
      const std::size_t comma = line.find(',', start);
      if (comma == std::string::npos) {
        fields.push_back(line.substr(start));
        break;
      }
      fields.push_back(line.substr(start, comma - start));
      start = comma + 1;
    }
    if (first) {
      table.header = std::move(fields);
      first = false;
    } else {
      table.rows.push_back(std::move(fields));
    }
  }
  return table;
}

}  // namespace divopt
