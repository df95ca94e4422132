#pragma once

#include <cmath>
#include <cstddef>
#include <limits>
#include <optional>

#include "divopt/kernels.hpp"

namespace divopt::kernels::detail {

// The Riesz pair potential has closed forms for the exponents the toolkit
// uses most; everything else goes through pow. SIMD backends vectorize the
// arithmetic-only kinds and apply log/pow per lane, so per-pair values are
// bit-identical to the scalar reference on every path.
enum class PhiKind { kVariance, kSqrtNeg, kLog, kInvSqrt, kInverse, kGeneral };

inline PhiKind classify(double s) {
  if (s == -2.0) return PhiKind::kVariance;
  if (s == -1.0) return PhiKind::kSqrtNeg;
  if (s == 0.0) return PhiKind::kLog;
  if (s == 1.0) return PhiKind::kInvSqrt;
  if (s == 2.0) return PhiKind::kInverse;
  return PhiKind::kGeneral;
}

// phi(u) with u the squared pairwise distance.
inline double phi_value(PhiKind kind, double s, double u) {
  switch (kind) {
    case PhiKind::kVariance: return -0.5 * u;
    case PhiKind::kSqrtNeg: return -std::sqrt(u);
    case PhiKind::kLog: return -0.5 * std::log(u);
    case PhiKind::kInvSqrt: return 1.0 / std::sqrt(u);
    case PhiKind::kInverse: return 0.5 / u;
    case PhiKind::kGeneral: return (1.0 / s) * std::pow(u, -0.5 * s);
  }
  return 0.0;
}

// 4 phi'(u), the ordered-pair gradient weight.
inline double pair_weight(PhiKind kind, double s, double u) {
  switch (kind) {
    case PhiKind::kVariance: return -2.0;
    case PhiKind::kSqrtNeg: return -2.0 / std::sqrt(u);
    case PhiKind::kLog: return -2.0 / u;
    case PhiKind::kInvSqrt: return -2.0 / (u * std::sqrt(u));
    case PhiKind::kInverse: return -2.0 / (u * u);
    case PhiKind::kGeneral: return -2.0 * std::pow(u, -0.5 * s - 1.0);
  }
  return 0.0;
}

struct Vtable {
  double (*riesz_energy)(const double*, std::size_t, std::size_t, double, double);
  std::optional<CoincidentPair> (*riesz_gradient)(const double*, std::size_t,
                                                  std::size_t, double, double,
                                                  double*);
  void (*scaled_add)(const double*, const double*, double, double*, std::size_t);
};

// Scalar reference kernels (defined in kernels.cpp); SIMD backends fall back
// to these for shapes they do not cover.
double riesz_energy_scalar(const double* z, std::size_t m, std::size_t d,
                           double s, double floor);
std::optional<CoincidentPair> riesz_gradient_scalar(const double* z,
                                                    std::size_t m, std::size_t d,
                                                    double s, double floor,
                                                    double* grad);
void scaled_add_scalar(const double* base, const double* dir, double scale,
                       double* out, std::size_t n);

extern const Vtable kScalarTable;

#if defined(__x86_64__) || defined(__amd64__)
extern const Vtable kAvx2Table;  // defined in kernels_avx2.cpp
#endif
#if defined(__aarch64__)
extern const Vtable kNeonTable;  // defined in kernels_neon.cpp
#endif

}  // namespace divopt::kernels::detail
