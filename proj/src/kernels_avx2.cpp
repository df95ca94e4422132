// AVX2 kernel variants. Compiled with -mavx2 and reached only after the
// runtime dispatcher has confirmed CPU support. Per-pair arithmetic mirrors
// the scalar reference op-for-op (no FMA), so backends differ only in
// summation order; equivalence tests pin that down.

#include <immintrin.h>

#include <cmath>
#include <cstddef>
#include <limits>
#include <optional>

#include "kernels_detail.hpp"

namespace divopt::kernels::detail {

namespace {

constexpr std::size_t kMaxSimdDim = 8;

inline double hsum(__m256d v) {
  alignas(32) double lane[4];
  _mm256_store_pd(lane, v);
  return ((lane[0] + lane[1]) + lane[2]) + lane[3];
}

// Squared distance between particle i and the four particles starting at j,
// accumulating coordinates in ascending k like the scalar kernel.
inline __m256d pair_dist_sq(const double* z, std::size_t m, std::size_t d,
                            std::size_t i, std::size_t j) {
  __m256d u = _mm256_setzero_pd();
  for (std::size_t k = 0; k < d; ++k) {
    const __m256d zi = _mm256_set1_pd(z[k * m + i]);
    const __m256d zj = _mm256_loadu_pd(&z[k * m + j]);
    const __m256d diff = _mm256_sub_pd(zi, zj);
    u = _mm256_add_pd(u, _mm256_mul_pd(diff, diff));
  }
  return u;
}

inline double pair_dist_sq_scalar(const double* z, std::size_t m, std::size_t d,
                                  std::size_t i, std::size_t j) {
  double u = 0.0;
  for (std::size_t k = 0; k < d; ++k) {
    const double diff = z[k * m + i] - z[k * m + j];
    u += diff * diff;
  }
  return u;
}

// phi(u) lanes for the arithmetic-only kinds.
inline __m256d phi_vec(PhiKind kind, __m256d u) {
  switch (kind) {
    case PhiKind::kVariance:
      return _mm256_mul_pd(u, _mm256_set1_pd(-0.5));
    case PhiKind::kSqrtNeg:
      return _mm256_sub_pd(_mm256_setzero_pd(), _mm256_sqrt_pd(u));
    case PhiKind::kInvSqrt:
      return _mm256_div_pd(_mm256_set1_pd(1.0), _mm256_sqrt_pd(u));
    case PhiKind::kInverse:
      return _mm256_div_pd(_mm256_set1_pd(0.5), u);
    default:
      return _mm256_setzero_pd();
  }
}

inline bool phi_vectorizable(PhiKind kind) {
  return kind == PhiKind::kVariance || kind == PhiKind::kSqrtNeg ||
         kind == PhiKind::kInvSqrt || kind == PhiKind::kInverse;
}

// 4 phi'(u) lanes; everything except the general exponent is arithmetic-only.
inline __m256d weight_vec(PhiKind kind, double s, __m256d u) {
  const __m256d minus_two = _mm256_set1_pd(-2.0);
  switch (kind) {
    case PhiKind::kVariance:
      return minus_two;
    case PhiKind::kSqrtNeg:
      return _mm256_div_pd(minus_two, _mm256_sqrt_pd(u));
    case PhiKind::kLog:
      return _mm256_div_pd(minus_two, u);
    case PhiKind::kInvSqrt:
      return _mm256_div_pd(minus_two, _mm256_mul_pd(u, _mm256_sqrt_pd(u)));
    case PhiKind::kInverse:
      return _mm256_div_pd(minus_two, _mm256_mul_pd(u, u));
    case PhiKind::kGeneral: {
      alignas(32) double lane[4];
      _mm256_store_pd(lane, u);
      for (double& v : lane) v = -2.0 * std::pow(v, -0.5 * s - 1.0);
      return _mm256_load_pd(lane);
    }
  }
  return _mm256_setzero_pd();
}

double riesz_energy_avx2(const double* z, std::size_t m, std::size_t d,
                         double s, double floor) {
  if (d > kMaxSimdDim) return riesz_energy_scalar(z, m, d, s, floor);
  const PhiKind kind = classify(s);
  const double floor2 = floor * floor;
  const __m256d floor2v = _mm256_set1_pd(floor2);
  const bool vec_phi = phi_vectorizable(kind);
  __m256d acc = _mm256_setzero_pd();
  double scalar_total = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    std::size_t j = i + 1;
    for (; j + 4 <= m; j += 4) {
      const __m256d u = pair_dist_sq(z, m, d, i, j);
      if (s >= 0.0) {
        const __m256d hit = _mm256_cmp_pd(u, floor2v, _CMP_LE_OQ);
        if (_mm256_movemask_pd(hit) != 0) {
          return std::numeric_limits<double>::infinity();
        }
      }
      if (vec_phi) {
        acc = _mm256_add_pd(acc, _mm256_mul_pd(_mm256_set1_pd(2.0), phi_vec(kind, u)));
      } else {
        alignas(32) double lane[4];
        _mm256_store_pd(lane, u);
        for (double v : lane) scalar_total += 2.0 * phi_value(kind, s, v);
      }
    }
    for (; j < m; ++j) {
      const double u = pair_dist_sq_scalar(z, m, d, i, j);
      if (s >= 0.0 && u <= floor2) {
        return std::numeric_limits<double>::infinity();
      }
      scalar_total += 2.0 * phi_value(kind, s, u);
    }
  }
  return hsum(acc) + scalar_total;
}

std::optional<CoincidentPair> riesz_gradient_avx2(const double* z,
                                                  std::size_t m, std::size_t d,
                                                  double s, double floor,
                                                  double* grad) {
  if (d > kMaxSimdDim) return riesz_gradient_scalar(z, m, d, s, floor, grad);
  const PhiKind kind = classify(s);
  const double floor2 = floor * floor;
  const __m256d floor2v = _mm256_set1_pd(floor2);
  for (std::size_t i = 0; i < m; ++i) {
    __m256d acc[kMaxSimdDim];
    double tail[kMaxSimdDim];
    for (std::size_t k = 0; k < d; ++k) {
      acc[k] = _mm256_setzero_pd();
      tail[k] = 0.0;
    }
    // Ascending j over [0, i) then (i, m), matching the scalar scan order.
    const std::size_t ranges[2][2] = {{0, i}, {i + 1, m}};
    for (const auto& range : ranges) {
      std::size_t j = range[0];
      const std::size_t end = range[1];
      for (; j + 4 <= end; j += 4) {
        const __m256d u = pair_dist_sq(z, m, d, i, j);
        const __m256d hit = _mm256_cmp_pd(u, floor2v, _CMP_LE_OQ);
        const int mask = _mm256_movemask_pd(hit);
        if (mask != 0) {
          for (int lane = 0; lane < 4; ++lane) {
            if (mask & (1 << lane)) {
              const std::size_t jj = j + static_cast<std::size_t>(lane);
              return CoincidentPair{i < jj ? i : jj, i < jj ? jj : i};
            }
          }
        }
        const __m256d w = weight_vec(kind, s, u);
        for (std::size_t k = 0; k < d; ++k) {
          const __m256d zi = _mm256_set1_pd(z[k * m + i]);
          const __m256d zj = _mm256_loadu_pd(&z[k * m + j]);
          acc[k] = _mm256_add_pd(acc[k], _mm256_mul_pd(w, _mm256_sub_pd(zi, zj)));
        }
      }
      for (; j < end; ++j) {
        const double u = pair_dist_sq_scalar(z, m, d, i, j);
        if (u <= floor2) {
          return CoincidentPair{i < j ? i : j, i < j ? j : i};
        }
        const double w = pair_weight(kind, s, u);
        for (std::size_t k = 0; k < d; ++k) {
          tail[k] += w * (z[k * m + i] - z[k * m + j]);
        }
      }
    }
    for (std::size_t k = 0; k < d; ++k) {
      grad[k * m + i] = hsum(acc[k]) + tail[k];
    }
  }
  return std::nullopt;
}

void scaled_add_avx2(const double* base, const double* dir, double scale,
                     double* out, std::size_t n) {
  const __m256d sv = _mm256_set1_pd(scale);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d b = _mm256_loadu_pd(&base[i]);
    const __m256d m = _mm256_mul_pd(sv, _mm256_loadu_pd(&dir[i]));
    _mm256_storeu_pd(&out[i], _mm256_add_pd(b, m));
  }
  for (; i < n; ++i) out[i] = base[i] + scale * dir[i];
}

}  // namespace

const Vtable kAvx2Table{riesz_energy_avx2, riesz_gradient_avx2,
                        scaled_add_avx2};

}  // namespace divopt::kernels::detail
