#pragma once

#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "divopt/harness.hpp"
#include "divopt/optimizers.hpp"

namespace divopt {

// Shortest decimal text that parses back to the same double ("inf", "-inf",
// "nan" for the non-finite values).
std::string format_double(double v);
double parse_double(const std::string& text);

// trajectory.csv: iter,f_sum,f_max,phi,grad_norm_sq_sum,repulsion_applied
std::string trajectory_csv(const Trajectory& traj);
// snapshots.csv: iter,particle_index,x0,...,x{d-1}
std::string snapshots_csv(const Trajectory& traj);
// front.csv: method,alpha,seed,loss,diversity,nondominated
std::string front_csv(std::span<const FrontPoint> points,
                      std::span<const bool> nondominated);

void write_text_file(const std::filesystem::path& path, const std::string& text);
std::string read_text_file(const std::filesystem::path& path);

// Minimal reader: header plus rows of comma-separated fields.
struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  std::size_t column(const std::string& name) const;  // throws ConfigError
};
CsvTable read_csv(const std::filesystem::path& path);

}  // namespace divopt
