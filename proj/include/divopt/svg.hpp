#pragma once

#include <span>
#include <string>

#include "divopt/landscapes.hpp"
#include "divopt/matrix.hpp"

namespace divopt {

// Final particles over contour lines of the landscape sampled on a 200 x 200
// grid of its domain box. Self-contained SVG text (2-D landscapes only).
std::string render_scatter_svg(const Landscape& landscape, const Matrix& particles);

// f_sum / f_max / -phi against iteration, two stacked panels (aggregates on
// top, diversity below). Non-finite samples split the polylines.
std::string render_trace_svg(std::span<const long> iters,
                             std::span<const double> f_sum,
                             std::span<const double> f_max,
                             std::span<const double> neg_phi, bool log_x);

}  // namespace divopt
