// NEON kernel variants for aarch64, where 128-bit SIMD is baseline. Same
// structure as the AVX2 backend with two double lanes per vector.

#include <arm_neon.h>

#include <cmath>
#include <cstddef>
#include <limits>
#include <optional>

#include "kernels_detail.hpp"

namespace divopt::kernels::detail {

namespace {

constexpr std::size_t kMaxSimdDim = 8;

inline double hsum(float64x2_t v) {
  return vgetq_lane_f64(v, 0) + vgetq_lane_f64(v, 1);
}

inline float64x2_t pair_dist_sq(const double* z, std::size_t m, std::size_t d,
                                std::size_t i, std::size_t j) {
  float64x2_t u = vdupq_n_f64(0.0);
  for (std::size_t k = 0; k < d; ++k) {
    const float64x2_t zi = vdupq_n_f64(z[k * m + i]);
    const float64x2_t zj = vld1q_f64(&z[k * m + j]);
    const float64x2_t diff = vsubq_f64(zi, zj);
    u = vaddq_f64(u, vmulq_f64(diff, diff));
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

inline float64x2_t phi_vec(PhiKind kind, float64x2_t u) {
  switch (kind) {
    case PhiKind::kVariance:
      return vmulq_f64(u, vdupq_n_f64(-0.5));
    case PhiKind::kSqrtNeg:
      return vsubq_f64(vdupq_n_f64(0.0), vsqrtq_f64(u));
    case PhiKind::kInvSqrt:
      return vdivq_f64(vdupq_n_f64(1.0), vsqrtq_f64(u));
    case PhiKind::kInverse:
      return vdivq_f64(vdupq_n_f64(0.5), u);
    default:
      return vdupq_n_f64(0.0);
  }
}

inline bool phi_vectorizable(PhiKind kind) {
  return kind == PhiKind::kVariance || kind == PhiKind::kSqrtNeg ||
         kind == PhiKind::kInvSqrt || kind == PhiKind::kInverse;
}

inline float64x2_t weight_vec(PhiKind kind, double s, float64x2_t u) {
  const float64x2_t minus_two = vdupq_n_f64(-2.0);
  switch (kind) {
    case PhiKind::kVariance:
      return minus_two;
    case PhiKind::kSqrtNeg:
      return vdivq_f64(minus_two, vsqrtq_f64(u));
    case PhiKind::kLog:
      return vdivq_f64(minus_two, u);
    case PhiKind::kInvSqrt:
      return vdivq_f64(minus_two, vmulq_f64(u, vsqrtq_f64(u)));
    case PhiKind::kInverse:
      return vdivq_f64(minus_two, vmulq_f64(u, u));
    case PhiKind::kGeneral: {
      double lane[2] = {vgetq_lane_f64(u, 0), vgetq_lane_f64(u, 1)};
      for (double& v : lane) v = -2.0 * std::pow(v, -0.5 * s - 1.0);
      return vld1q_f64(lane);
    }
  }
  return vdupq_n_f64(0.0);
}

inline int below_floor_mask(float64x2_t u, float64x2_t floor2v) {
  const uint64x2_t hit = vcleq_f64(u, floor2v);
  return static_cast<int>((vgetq_lane_u64(hit, 0) ? 1 : 0) |
                          (vgetq_lane_u64(hit, 1) ? 2 : 0));
}

double riesz_energy_neon(const double* z, std::size_t m, std::size_t d,
                         double s, double floor) {
  if (d > kMaxSimdDim) return riesz_energy_scalar(z, m, d, s, floor);
  const PhiKind kind = classify(s);
  const double floor2 = floor * floor;
  const float64x2_t floor2v = vdupq_n_f64(floor2);
  const bool vec_phi = phi_vectorizable(kind);
  float64x2_t acc = vdupq_n_f64(0.0);
  double scalar_total = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    std::size_t j = i + 1;
    for (; j + 2 <= m; j += 2) {
      const float64x2_t u = pair_dist_sq(z, m, d, i, j);
      if (s >= 0.0 && below_floor_mask(u, floor2v) != 0) {
        return std::numeric_limits<double>::infinity();
      }
      if (vec_phi) {
        acc = vaddq_f64(acc, vmulq_f64(vdupq_n_f64(2.0), phi_vec(kind, u)));
      } else {
        scalar_total += 2.0 * phi_value(kind, s, vgetq_lane_f64(u, 0));
        scalar_total += 2.0 * phi_value(kind, s, vgetq_lane_f64(u, 1));
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

std::optional<CoincidentPair> riesz_gradient_neon(const double* z,
                                                  std::size_t m, std::size_t d,
                                                  double s, double floor,
                                                  double* grad) {
  if (d > kMaxSimdDim) return riesz_gradient_scalar(z, m, d, s, floor, grad);
  const PhiKind kind = classify(s);
  const double floor2 = floor * floor;
  const float64x2_t floor2v = vdupq_n_f64(floor2);
  for (std::size_t i = 0; i < m; ++i) {
    float64x2_t acc[kMaxSimdDim];
    double tail[kMaxSimdDim];
    for (std::size_t k = 0; k < d; ++k) {
      acc[k] = vdupq_n_f64(0.0);
      tail[k] = 0.0;
    }
    const std::size_t ranges[2][2] = {{0, i}, {i + 1, m}};
    for (const auto& range : ranges) {
      std::size_t j = range[0];
      const std::size_t end = range[1];
      for (; j + 2 <= end; j += 2) {
        const float64x2_t u = pair_dist_sq(z, m, d, i, j);
        const int mask = below_floor_mask(u, floor2v);
        if (mask != 0) {
          const std::size_t jj = j + (mask & 1 ? 0u : 1u);
          return CoincidentPair{i < jj ? i : jj, i < jj ? jj : i};
        }
        const float64x2_t w = weight_vec(kind, s, u);
        for (std::size_t k = 0; k < d; ++k) {
          const float64x2_t zi = vdupq_n_f64(z[k * m + i]);
          const float64x2_t zj = vld1q_f64(&z[k * m + j]);
          acc[k] = vaddq_f64(acc[k], vmulq_f64(w, vsubq_f64(zi, zj)));
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

void scaled_add_neon(const double* base, const double* dir, double scale,
                     double* out, std::size_t n) {
  const float64x2_t sv = vdupq_n_f64(scale);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    const float64x2_t b = vld1q_f64(&base[i]);
    const float64x2_t m = vmulq_f64(sv, vld1q_f64(&dir[i]));
    vst1q_f64(&out[i], vaddq_f64(b, m));
  }
  for (; i < n; ++i) out[i] = base[i] + scale * dir[i];
}

}  // namespace

const Vtable kNeonTable{riesz_energy_neon, riesz_gradient_neon,
                        scaled_add_neon};

}  // namespace divopt::kernels::detail
