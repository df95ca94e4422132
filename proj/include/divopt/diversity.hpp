#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <utility>

#include "divopt/matrix.hpp"
#include "divopt/particle_set.hpp"

namespace divopt {

// Differentiable map psi: R^d -> R^k applied to each particle before the
// energy. The Jacobian oracle writes a k x d matrix. When only `apply` is
// known, with_finite_difference_jacobian builds a central-difference Jacobian
// and flags it so reports can surface the substitution.
struct FeatureMap {
  std::size_t out_dim = 0;
  std::function<void(std::span<const double>, std::span<double>)> apply;
  std::function<void(std::span<const double>, Matrix&)> jacobian;
  bool finite_difference_jacobian = false;

  static FeatureMap with_finite_difference_jacobian(
      std::size_t out_dim,
      std::function<void(std::span<const double>, std::span<double>)> apply,
      double h = 1e-6);
};

// Riesz s-energy configuration. Ordered-pair convention: the energy sums over
// all i != j (both orders), and the gradient carries the matching factor
// 4 phi'(u).
struct DiversityScore {
  double s = 0.0;
  std::optional<FeatureMap> feature_map;
  double distance_floor = 1e-12;
};

// Phi_s over the (feature-mapped) particle positions. Returns +inf when
// s >= 0 and some pairwise distance is at or below the floor; a single
// particle gives 0 (empty sum).
double riesz_energy(const ParticleSet& points, const DiversityScore& score);
double riesz_energy(const Matrix& positions, const DiversityScore& score);

// dPhi/dx_i as an m x d matrix, pulled back through the feature-map Jacobian
// when psi is present. Throws CoincidentParticlesError naming the first pair
// at or below the floor.
Matrix riesz_energy_gradient(const ParticleSet& points, const DiversityScore& score);
Matrix riesz_energy_gradient(const Matrix& positions, const DiversityScore& score);

// Both at once; requires a feature map.
std::pair<double, Matrix> feature_mapped_energy_and_grad(const ParticleSet& points,
                                                         const DiversityScore& score);

}  // namespace divopt
