#include "divopt/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <vector>

#include "divopt/errors.hpp"

namespace divopt {

namespace {

constexpr int kGridSize = 200;
constexpr double kCanvas = 640.0;
constexpr double kMargin = 48.0;

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.2f", v);
  return buf;
}

struct Segment {
  double x1, y1, x2, y2;
};

struct EdgePoint {
  double x, y;
};

// Linear interpolation of the level crossing along one cell edge.
EdgePoint interp(double level, double xa, double ya, double va, double xb,
                 double yb, double vb) {
  const double t = (level - va) / (vb - va);
  return {xa + t * (xb - xa), ya + t * (yb - ya)};
}

// Marching squares over grid nodes; emits one segment list per level.
std::vector<Segment> contour_segments(const std::vector<double>& values,
                                      const std::vector<double>& xs,
                                      const std::vector<double>& ys,
                                      double level) {
  std::vector<Segment> segments;
  auto value = [&](int r, int c) { return values[r * kGridSize + c]; };
  for (int r = 0; r + 1 < kGridSize; ++r) {
    for (int c = 0; c + 1 < kGridSize; ++c) {
      const double v00 = value(r, c);
      const double v10 = value(r, c + 1);
      const double v11 = value(r + 1, c + 1);
      const double v01 = value(r + 1, c);
      int idx = 0;
      if (v00 > level) idx |= 1;
      if (v10 > level) idx |= 2;
      if (v11 > level) idx |= 4;
      if (v01 > level) idx |= 8;
      if (idx == 0 || idx == 15) continue;
      const double x0 = xs[c], x1 = xs[c + 1];
      const double y0 = ys[r], y1 = ys[r + 1];
      auto edge_point = [&](int edge) -> EdgePoint {
        switch (edge) {
          case 0: return interp(level, x0, y0, v00, x1, y0, v10);
          case 1: return interp(level, x1, y0, v10, x1, y1, v11);
          case 2: return interp(level, x0, y1, v01, x1, y1, v11);
          default: return interp(level, x0, y0, v00, x0, y1, v01);
        }
      };
      auto add = [&](int ea, int eb) {
        const EdgePoint a = edge_point(ea);
        const EdgePoint b = edge_point(eb);
        segments.push_back({a.x, a.y, b.x, b.y});
      };
      switch (idx) {
        case 1: case 14: add(3, 0); break;
        case 2: case 13: add(0, 1); break;
        case 3: case 12: add(3, 1); break;
        case 4: case 11: add(1, 2); break;
        case 5: add(3, 0); add(1, 2); break;
        case 10: add(0, 1); add(2, 3); break;
        case 6: case 9: add(0, 2); break;
        case 7: case 8: add(3, 2); break;
        default: break;
      }
    }
  }
  return segments;
}

struct Mapper {
  double lo_x, hi_x, lo_y, hi_y;
  double px(double x) const {
    return kMargin + (x - lo_x) / (hi_x - lo_x) * (kCanvas - 2 * kMargin);
  }
  double py(double y) const {
    // SVG y grows downward.
    return kCanvas - kMargin - (y - lo_y) / (hi_y - lo_y) * (kCanvas - 2 * kMargin);
  }
};

void append_polyline(std::string& out, const std::vector<std::pair<double, double>>& pts,
                     const char* color, const char* width) {
  if (pts.size() < 2) return;
  out += "<polyline fill=\"none\" stroke=\"";
  out += color;
  out += "\" stroke-width=\"";
  out += width;
  out += "\" points=\"";
  for (std::size_t i = 0; i < pts.size(); ++i) {
    if (i) out += ' ';
    out += fmt(pts[i].first) + "," + fmt(pts[i].second);
  }
  out += "\"/>\n";
}

}  // namespace

std::string render_scatter_svg(const Landscape& landscape, const Matrix& particles) {
  if (landscape.dim != 2) {
    throw ConfigError("scatter plot requires a 2-D landscape");
  }
  const double lo_x = landscape.box_lo[0], hi_x = landscape.box_hi[0];
  const double lo_y = landscape.box_lo[1], hi_y = landscape.box_hi[1];
  std::vector<double> xs(kGridSize), ys(kGridSize);
  for (int i = 0; i < kGridSize; ++i) {
    xs[i] = lo_x + (hi_x - lo_x) * i / (kGridSize - 1);
    ys[i] = lo_y + (hi_y - lo_y) * i / (kGridSize - 1);
  }
  std::vector<double> values(kGridSize * kGridSize);
  double point[2];
  for (int r = 0; r < kGridSize; ++r) {
    for (int c = 0; c < kGridSize; ++c) {
      point[0] = xs[c];
      point[1] = ys[r];
      values[r * kGridSize + c] = landscape.oracle.eval(std::span<const double>(point, 2));
    }
  }
  std::vector<double> sorted = values;
  std::sort(sorted.begin(), sorted.end());
  std::vector<double> levels;
  for (int i = 1; i <= 11; ++i) {
    const double q = static_cast<double>(i) / 12.0;
    const double level = sorted[static_cast<std::size_t>(q * (sorted.size() - 1))];
    if (levels.empty() || level > levels.back()) levels.push_back(level);
  }

  const Mapper map{lo_x, hi_x, lo_y, hi_y};
  std::string out;
  out += "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  out += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + fmt(kCanvas) +
         "\" height=\"" + fmt(kCanvas) + "\" viewBox=\"0 0 " + fmt(kCanvas) + " " +
         fmt(kCanvas) + "\">\n";
  out += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  for (double level : levels) {
    const auto segments = contour_segments(values, xs, ys, level);
    if (segments.empty()) continue;
    out += "<path stroke=\"#9ecae1\" stroke-width=\"1\" fill=\"none\" d=\"";
    for (const Segment& s : segments) {
      out += "M" + fmt(map.px(s.x1)) + " " + fmt(map.py(s.y1)) + "L" +
             fmt(map.px(s.x2)) + " " + fmt(map.py(s.y2));
    }
    out += "\"/>\n";
  }
  for (std::size_t i = 0; i < particles.rows(); ++i) {
    out += "<circle cx=\"" + fmt(map.px(particles(i, 0))) + "\" cy=\"" +
           fmt(map.py(particles(i, 1))) + "\" r=\"4\" fill=\"#d95f02\"/>\n";
  }
  out += "<rect x=\"" + fmt(kMargin) + "\" y=\"" + fmt(kMargin) + "\" width=\"" +
         fmt(kCanvas - 2 * kMargin) + "\" height=\"" + fmt(kCanvas - 2 * kMargin) +
         "\" fill=\"none\" stroke=\"#444444\"/>\n";
  out += "<text x=\"" + fmt(kMargin) + "\" y=\"" + fmt(kMargin - 16.0) +
         "\" font-family=\"sans-serif\" font-size=\"16\">" + landscape.name +
         "</text>\n";
  out += "<text x=\"" + fmt(kMargin) + "\" y=\"" + fmt(kCanvas - kMargin + 20.0) +
         "\" font-family=\"sans-serif\" font-size=\"12\">[" + fmt(lo_x) + ", " +
         fmt(hi_x) + "] x [" + fmt(lo_y) + ", " + fmt(hi_y) + "]</text>\n";
  out += "</svg>\n";
  return out;
}

std::string render_trace_svg(std::span<const long> iters,
                             std::span<const double> f_sum,
                             std::span<const double> f_max,
                             std::span<const double> neg_phi, bool log_x) {
  if (iters.empty()) throw ConfigError("trace plot requires at least one row");
  const double width = 760.0;
  const double panel_h = 260.0;
  const double height = 2 * panel_h + 3 * kMargin;

  auto x_value = [log_x](long it) {
    return log_x ? std::log10(static_cast<double>(it) + 1.0)
                 : static_cast<double>(it);
  };
  double x_lo = x_value(iters.front());
  double x_hi = x_value(iters.back());
  if (x_hi <= x_lo) x_hi = x_lo + 1.0;

  struct Panel {
    double top;
    double lo = std::numeric_limits<double>::infinity();
    double hi = -std::numeric_limits<double>::infinity();
  };
  auto scan = [](Panel& p, std::span<const double> v) {
    for (double y : v) {
      if (!std::isfinite(y)) continue;
      p.lo = std::min(p.lo, y);
      p.hi = std::max(p.hi, y);
    }
  };
  Panel top{kMargin};
  scan(top, f_sum);
  scan(top, f_max);
  Panel bottom{kMargin * 2 + panel_h};
  scan(bottom, neg_phi);
  for (Panel* p : {&top, &bottom}) {
    if (!std::isfinite(p->lo)) {
      p->lo = 0.0;
      p->hi = 1.0;
    }
    if (p->hi <= p->lo) {
      p->lo -= 1.0;
      p->hi += 1.0;
    }
    const double pad = 0.05 * (p->hi - p->lo);
    p->lo -= pad;
    p->hi += pad;
  }

  auto px = [&](long it) {
    return kMargin + (x_value(it) - x_lo) / (x_hi - x_lo) * (width - 2 * kMargin);
  };
  auto py = [&](const Panel& p, double y) {
    return p.top + panel_h - (y - p.lo) / (p.hi - p.lo) * panel_h;
  };

  std::string out;
  out += "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  out += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + fmt(width) +
         "\" height=\"" + fmt(height) + "\" viewBox=\"0 0 " + fmt(width) + " " +
         fmt(height) + "\">\n";
  out += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";

  auto draw_series = [&](const Panel& panel, std::span<const double> series,
                         const char* color) {
    std::vector<std::pair<double, double>> pts;
    for (std::size_t i = 0; i < series.size(); ++i) {
      if (!std::isfinite(series[i])) {
        append_polyline(out, pts, color, "1.5");
        pts.clear();
        continue;
      }
      pts.emplace_back(px(iters[i]), py(panel, series[i]));
    }
    append_polyline(out, pts, color, "1.5");
  };

  for (const Panel* p : {&top, &bottom}) {
    out += "<rect x=\"" + fmt(kMargin) + "\" y=\"" + fmt(p->top) + "\" width=\"" +
           fmt(width - 2 * kMargin) + "\" height=\"" + fmt(panel_h) +
           "\" fill=\"none\" stroke=\"#444444\"/>\n";
    out += "<text x=\"" + fmt(kMargin - 40.0) + "\" y=\"" + fmt(p->top + 12.0) +
           "\" font-family=\"sans-serif\" font-size=\"11\">" + fmt(p->hi) +
           "</text>\n";
    out += "<text x=\"" + fmt(kMargin - 40.0) + "\" y=\"" + fmt(p->top + panel_h) +
           "\" font-family=\"sans-serif\" font-size=\"11\">" + fmt(p->lo) +
           "</text>\n";
  }
  draw_series(top, f_sum, "#1b9e77");
  draw_series(top, f_max, "#d95f02");
  draw_series(bottom, neg_phi, "#7570b3");

  out += "<text x=\"" + fmt(kMargin) + "\" y=\"" + fmt(kMargin - 12.0) +
         "\" font-family=\"sans-serif\" font-size=\"14\">"
         "<tspan fill=\"#1b9e77\">f_sum</tspan> "
         "<tspan fill=\"#d95f02\">f_max</tspan></text>\n";
  out += "<text x=\"" + fmt(kMargin) + "\" y=\"" + fmt(top.top + panel_h + 28.0) +
         "\" font-family=\"sans-serif\" font-size=\"14\" fill=\"#7570b3\">"
         "diversity (-phi)</text>\n";
  out += "<text x=\"" + fmt(width / 2.0) + "\" y=\"" + fmt(height - 10.0) +
         "\" font-family=\"sans-serif\" font-size=\"12\">iteration" +
         std::string(log_x ? " (log scale)" : "") + "</text>\n";
  out += "</svg>\n";
  return out;
}

}  // namespace divopt
