#pragma once

#include <cstdint>
#include <optional>
#include <variant>
#include <vector>

#include "divopt/matrix.hpp"

namespace divopt {

// Population state: m particles in R^d, optionally with per-particle
// velocities of identical shape. All entries must be finite.
struct ParticleSet {
  Matrix positions;
  std::optional<Matrix> velocities;

  ParticleSet() = default;
  explicit ParticleSet(Matrix pos);
  ParticleSet(Matrix pos, Matrix vel);

  std::size_t count() const { return positions.rows(); }
  std::size_t dim() const { return positions.cols(); }

  // Throws NumericError on non-finite entries, ConfigError on shape mismatch.
  void validate() const;
};

struct GaussianInit {
  double sigma = 1.0;
};

// Per-coordinate bounds; a single entry broadcasts over all coordinates.
struct UniformBoxInit {
  std::vector<double> lo;
  std::vector<double> hi;
};

using InitScheme = std::variant<GaussianInit, UniformBoxInit>;

// Deterministic i.i.d. initialization; coordinates are drawn in row-major
// order (particle 0 coordinate 0, particle 0 coordinate 1, ...).
ParticleSet init_particles(std::size_t m, std::size_t d, const InitScheme& scheme,
                           std::uint64_t seed);

}  // namespace divopt
