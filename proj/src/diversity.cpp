#include "divopt/diversity.hpp"

#include <cmath>
#include <vector>

#include "divopt/errors.hpp"
#include "divopt/kernels.hpp"

namespace divopt {

namespace {

// Applies psi to every particle; output is m x k in the same column-major
// layout the kernels expect.
Matrix map_positions(const Matrix& positions, const FeatureMap& map) {
  const std::size_t m = positions.rows();
  Matrix mapped(m, map.out_dim);
  std::vector<double> in(positions.cols());
  std::vector<double> out(map.out_dim);
  for (std::size_t i = 0; i < m; ++i) {
    positions.row(i, in);
    map.apply(in, out);
    mapped.set_row(i, out);
  }
  if (!mapped.all_finite()) {
    throw NumericError("feature map produced non-finite values");
  }
  return mapped;
}

}  // namespace

FeatureMap FeatureMap::with_finite_difference_jacobian(
    std::size_t out_dim,
    std::function<void(std::span<const double>, std::span<double>)> apply,
    double h) {
  FeatureMap map;
  map.out_dim = out_dim;
  map.apply = apply;
  map.finite_difference_jacobian = true;
  map.jacobian = [out_dim, apply, h](std::span<const double> x, Matrix& jac) {
    jac = Matrix(out_dim, x.size());
    std::vector<double> probe(x.begin(), x.end());
    std::vector<double> plus(out_dim);
    std::vector<double> minus(out_dim);
    for (std::size_t k = 0; k < x.size(); ++k) {
      probe[k] = x[k] + h;
      apply(probe, plus);
      probe[k] = x[k] - h;
      apply(probe, minus);
      probe[k] = x[k];
      for (std::size_t r = 0; r < out_dim; ++r) {
        jac(r, k) = (plus[r] - minus[r]) / (2.0 * h);
      }
    }
  };
  return map;
}

double riesz_energy(const Matrix& positions, const DiversityScore& score) {
  if (positions.rows() <= 1) return 0.0;
  if (score.feature_map) {
    const Matrix mapped = map_positions(positions, *score.feature_map);
    return kernels::riesz_energy(mapped.data(), mapped.rows(), mapped.cols(),
                                 score.s, score.distance_floor);
  }
  return kernels::riesz_energy(positions.data(), positions.rows(),
                               positions.cols(), score.s, score.distance_floor);
}

double riesz_energy(const ParticleSet& points, const DiversityScore& score) {
  return riesz_energy(points.positions, score);
}

Matrix riesz_energy_gradient(const Matrix& positions, const DiversityScore& score) {
  const std::size_t m = positions.rows();
  const std::size_t d = positions.cols();
  if (m <= 1) return Matrix(m, d, 0.0);

  if (!score.feature_map) {
    Matrix grad(m, d);
    if (auto pair = kernels::riesz_gradient(positions.data(), m, d, score.s,
                                            score.distance_floor, grad.data())) {
      throw CoincidentParticlesError(pair->first, pair->second);
    }
    return grad;
  }

  const FeatureMap& map = *score.feature_map;
  const Matrix mapped = map_positions(positions, map);
  Matrix feature_grad(m, map.out_dim);
  if (auto pair = kernels::riesz_gradient(mapped.data(), m, map.out_dim, score.s,
                                          score.distance_floor,
                                          feature_grad.data())) {
    throw CoincidentParticlesError(pair->first, pair->second);
  }
  // Chain rule: dPhi/dx_i = J_psi(x_i)^T g_i.
  Matrix grad(m, d, 0.0);
  Matrix jac;
  std::vector<double> xi(d);
  for (std::size_t i = 0; i < m; ++i) {
    positions.row(i, xi);
    map.jacobian(xi, jac);
    if (jac.rows() != map.out_dim || jac.cols() != d) {
      throw NumericError("feature map Jacobian has wrong shape");
    }
    for (std::size_t k = 0; k < d; ++k) {
      double acc = 0.0;
      for (std::size_t r = 0; r < map.out_dim; ++r) {
        acc += jac(r, k) * feature_grad(i, r);
      }
      grad(i, k) = acc;
    }
  }
  return grad;
}

Matrix riesz_energy_gradient(const ParticleSet& points, const DiversityScore& score) {
  return riesz_energy_gradient(points.positions, score);
}

std::pair<double, Matrix> feature_mapped_energy_and_grad(const ParticleSet& points,
                                                         const DiversityScore& score) {
  if (!score.feature_map) {
    throw ConfigError("feature_mapped_energy_and_grad requires a feature map");
  }
  return {riesz_energy(points, score), riesz_energy_gradient(points, score)};
}

}  // namespace divopt
