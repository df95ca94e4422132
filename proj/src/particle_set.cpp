#include "divopt/particle_set.hpp"

#include <string>

#include "divopt/errors.hpp"
#include "divopt/rng.hpp"

namespace divopt {

ParticleSet::ParticleSet(Matrix pos) : positions(std::move(pos)) { validate(); }

ParticleSet::ParticleSet(Matrix pos, Matrix vel)
    : positions(std::move(pos)), velocities(std::move(vel)) {
  validate();
}

void ParticleSet::validate() const {
  if (positions.rows() == 0 || positions.cols() == 0) {
    throw ConfigError("particle set requires m >= 1 and d >= 1");
  }
  if (!positions.all_finite()) {
    throw NumericError("particle positions contain non-finite entries");
  }
  if (velocities) {
    if (velocities->rows() != positions.rows() ||
        velocities->cols() != positions.cols()) {
      throw ConfigError("velocities shape does not match positions");
    }
    if (!velocities->all_finite()) {
      throw NumericError("particle velocities contain non-finite entries");
    }
  }
}

ParticleSet init_particles(std::size_t m, std::size_t d, const InitScheme& scheme,
                           std::uint64_t seed) {
  if (m == 0) throw ConfigError("init_particles: m must be >= 1");
  if (d == 0) throw ConfigError("init_particles: d must be >= 1");

  Matrix pos(m, d);
  Rng rng(seed);
  if (const auto* gaussian = std::get_if<GaussianInit>(&scheme)) {
    if (!(gaussian->sigma > 0.0)) {
      throw ConfigError("init_particles: gaussian sigma must be > 0");
    }
    for (std::size_t i = 0; i < m; ++i) {
      for (std::size_t k = 0; k < d; ++k) {
        pos(i, k) = gaussian->sigma * rng.gaussian();
      }
    }
  } else {
    const auto& box = std::get<UniformBoxInit>(scheme);
    auto bound = [d](const std::vector<double>& v, std::size_t k,
                     const char* name) {
      if (v.size() == 1) return v[0];
      if (v.size() != d) {
        throw ConfigError(std::string("init_particles: uniform_box ") + name +
                          " must have 1 or d entries");
      }
      return v[k];
    };
    for (std::size_t k = 0; k < d; ++k) {
      if (!(bound(box.lo, k, "lo") < bound(box.hi, k, "hi"))) {
        throw ConfigError("init_particles: uniform_box requires lo < hi componentwise");
      }
    }
    for (std::size_t i = 0; i < m; ++i) {
      for (std::size_t k = 0; k < d; ++k) {
        pos(i, k) = rng.uniform(bound(box.lo, k, "lo"), bound(box.hi, k, "hi"));
      }
    }
  }
  return ParticleSet(std::move(pos));
}

}  // namespace divopt
