#include "divopt/kernels.hpp"

#include <atomic>
#include <stdexcept>

#include "kernels_detail.hpp"

namespace divopt::kernels {

namespace detail {

double riesz_energy_scalar(const double* z, std::size_t m, std::size_t d,
                           double s, double floor) {
  const PhiKind kind = classify(s);
  const double floor2 = floor * floor;
  double total = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = i + 1; j < m; ++j) {
      double u = 0.0;
      for (std::size_t k = 0; k < d; ++k) {
        const double diff = z[k * m + i] - z[k * m + j];
        u += diff * diff;
      }
      if (s >= 0.0 && u <= floor2) {
        return std::numeric_limits<double>::infinity();
      }
      total += 2.0 * phi_value(kind, s, u);
    }
  }
  return total;
}

std::optional<CoincidentPair> riesz_gradient_scalar(const double* z,
                                                    std::size_t m, std::size_t d,
                                                    double s, double floor,
                                                    double* grad) {
  const PhiKind kind = classify(s);
  const double floor2 = floor * floor;
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t k = 0; k < d; ++k) grad[k * m + i] = 0.0;
    for (std::size_t j = 0; j < m; ++j) {
      if (j == i) continue;
      double u = 0.0;
      for (std::size_t k = 0; k < d; ++k) {
        const double diff = z[k * m + i] - z[k * m + j];
        u += diff * diff;
      }
      if (u <= floor2) {
        return CoincidentPair{i < j ? i : j, i < j ? j : i};
      }
      const double w = pair_weight(kind, s, u);
      for (std::size_t k = 0; k < d; ++k) {
        grad[k * m + i] += w * (z[k * m + i] - z[k * m + j]);
      }
    }
  }
  return std::nullopt;
}

void scaled_add_scalar(const double* base, const double* dir, double scale,
                       double* out, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) out[i] = base[i] + scale * dir[i];
}

const Vtable kScalarTable{riesz_energy_scalar, riesz_gradient_scalar,
                          scaled_add_scalar};

}  // namespace detail

namespace {

std::atomic<Backend> g_forced{Backend::kAuto};

bool cpu_has_avx2() {
#if defined(__x86_64__) || defined(__amd64__)
  return __builtin_cpu_supports("avx2");
#else
  return false;
#endif
}

Backend detect_backend() {
#if defined(__x86_64__) || defined(__amd64__)
  if (cpu_has_avx2()) return Backend::kAvx2;
#endif
#if defined(__aarch64__)
  return Backend::kNeon;
#endif
  return Backend::kScalar;
}

Backend resolve() {
  const Backend forced = g_forced.load(std::memory_order_relaxed);
  return forced == Backend::kAuto ? detect_backend() : forced;
}

const detail::Vtable& table_for(Backend b) {
  switch (b) {
#if defined(__x86_64__) || defined(__amd64__)
    case Backend::kAvx2:
      return detail::kAvx2Table;
#endif
#if defined(__aarch64__)
    case Backend::kNeon:
      return detail::kNeonTable;
#endif
    default:
      return detail::kScalarTable;
  }
}

}  // namespace

bool backend_available(Backend b) {
  switch (b) {
    case Backend::kAuto:
    case Backend::kScalar:
      return true;
    case Backend::kAvx2:
      return cpu_has_avx2();
    case Backend::kNeon:
#if defined(__aarch64__)
      return true;
#else
      return false;
#endif
  }
  return false;
}

void force_backend(Backend b) {
  if (!backend_available(b)) {
    throw std::invalid_argument("kernel backend not available on this CPU: " +
                                std::string(backend_name(b)));
  }
  g_forced.store(b, std::memory_order_relaxed);
}

Backend active_backend() { return resolve(); }

std::string_view backend_name(Backend b) {
  switch (b) {
    case Backend::kAuto: return "auto";
    case Backend::kScalar: return "scalar";
    case Backend::kAvx2: return "avx2";
    case Backend::kNeon: return "neon";
  }
  return "unknown";
}

std::string_view active_backend_name() { return backend_name(resolve()); }

double riesz_energy(const double* z, std::size_t m, std::size_t d, double s,
                    double floor) {
  return table_for(resolve()).riesz_energy(z, m, d, s, floor);
}

std::optional<CoincidentPair> riesz_gradient(const double* z, std::size_t m,
                                             std::size_t d, double s,
                                             double floor, double* grad) {
  return table_for(resolve()).riesz_gradient(z, m, d, s, floor, grad);
}

void scaled_add(const double* base, const double* dir, double scale,
                double* out, std::size_t n) {
  table_for(resolve()).scaled_add(base, dir, scale, out, n);
}

}  // namespace divopt::kernels
