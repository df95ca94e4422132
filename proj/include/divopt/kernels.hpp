#pragma once

#include <cstddef>
#include <optional>
#include <string_view>

namespace divopt::kernels {

// Kernel backends. Scalar is the reference implementation; SIMD variants are
// selected at runtime from CPU capabilities and must agree with scalar within
// summation-order roundoff (equivalence-tested). Elementwise kernels are
// bit-identical across backends.
enum class Backend { kAuto, kScalar, kAvx2, kNeon };

bool backend_available(Backend b);
// Pins the backend for subsequent kernel calls; kAuto restores detection.
// Throws std::invalid_argument if the backend is not available on this CPU.
void force_backend(Backend b);
Backend active_backend();
std::string_view backend_name(Backend b);
std::string_view active_backend_name();

struct CoincidentPair {
  std::size_t first = 0;
  std::size_t second = 0;
};

// Riesz pair potential on squared distances u = |z_i - z_j|^2:
//   s != 0:  phi(u) = (1/s) u^(-s/2)
//   s == 0:  phi(u) = -log(u) / 2
// Energy over ordered pairs i != j, i.e. sum over unordered pairs of
// 2 phi(u), accumulated in (i, j) lexicographic order. `z` is column-major
// (coordinate k at z[k*m + i]). Returns +inf when s >= 0 and some pair sits
// at or below `floor`.
double riesz_energy(const double* z, std::size_t m, std::size_t d, double s,
                    double floor);

// grad[k*m + i] = sum_{j != i} 4 phi'(u_ij) (z[k*m+i] - z[k*m+j]).
// Rows are accumulated in ascending i, each over ascending j. Returns the
// first pair (lexicographic) at or below `floor` and leaves `grad`
// unspecified in that case.
std::optional<CoincidentPair> riesz_gradient(const double* z, std::size_t m,
                                             std::size_t d, double s,
                                             double floor, double* grad);

// out[i] = base[i] + scale * dir[i]; identical results on every backend.
void scaled_add(const double* base, const double* dir, double scale,
                double* out, std::size_t n);

}  // namespace divopt::kernels
