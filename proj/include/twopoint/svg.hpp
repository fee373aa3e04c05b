#pragma once

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "twopoint/core.hpp"
#include "twopoint/curve_families.hpp"

namespace twopoint {

struct SvgCurve {
  Polyline points;
  bool closed = false;
  std::string stroke = "#1f4e9c";
};

struct SvgPoint {
  Complex z;
  std::string fill = "#c0392b";
};

/// Row-major samples on a tensor grid, like fd::Solution.
struct ScalarField {
  std::vector<double> x, y;
  std::vector<double> values;
};

struct Scene {
  std::vector<SvgCurve> curves;
  std::vector<SvgPoint> points;
  std::optional<Polyline> domain_outline;
  std::optional<ScalarField> field;

  bool empty() const { return curves.empty() && points.empty() && !domain_outline && !field; }
};

namespace detail {

inline std::string svg_num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", v == 0.0 ? 0.0 : v);
  return buf;
}

struct Bounds {
  double x0 = std::numeric_limits<double>::infinity(), x1 = -x0, y0 = x0, y1 = -x0;
  void add(double x, double y) {
    if (!std::isfinite(x) || !std::isfinite(y)) return;
    x0 = std::min(x0, x);
    x1 = std::max(x1, x);
    y0 = std::min(y0, y);
    y1 = std::max(y1, y);
  }
  bool valid() const { return x0 <= x1 && y0 <= y1; }
};

// SVG y grows downward; store points with y flipped so the picture reads like the plane.
inline std::string svg_path(const Polyline& pts, bool closed) {
  std::string d;
  bool pen_down = false;
  std::size_t drawn = 0;
  for (Complex z : pts) {
    if (!is_finite(z)) {
      pen_down = false;
      continue;
    }
    d += (d.empty() ? "" : " ") + std::string(pen_down ? "L" : "M") + svg_num(z.real()) + " " + svg_num(-z.imag());
    pen_down = true;
    ++drawn;
  }
  if (closed && drawn > 0) d += " Z";
  return d;
}

inline std::string heat_color(double t) {
  t = std::clamp(t, 0.0, 1.0);
  const int r = static_cast<int>(std::lround(255.0 * t));
  const int b = static_cast<int>(std::lround(255.0 * (1.0 - t)));
  const int g = static_cast<int>(std::lround(255.0 * (1.0 - std::abs(2.0 * t - 1.0)) * 0.6));
  char buf[8];
  std::snprintf(buf, sizeof buf, "#%02x%02x%02x", r, g, b);
  return buf;
}

inline std::string field_raster(const ScalarField& f, std::size_t max_blocks) {
  const std::size_t nx = f.x.size(), ny = f.y.size();
  if (nx < 2 || ny < 2 || f.values.size() != nx * ny) throw Error(ErrorKind::InvalidInput, "scalar field has inconsistent shape");
  double lo = std::numeric_limits<double>::infinity(), hi = -lo;
  for (double v : f.values)
    if (std::isfinite(v)) lo = std::min(lo, v), hi = std::max(hi, v);
  if (!(lo <= hi)) return "";
  const double span = hi > lo ? hi - lo : 1.0;

  const std::size_t bx = std::min(max_blocks, nx - 1), by = std::min(max_blocks, ny - 1);
  std::string out = "<g shape-rendering=\"crispEdges\">\n";
  for (std::size_t J = 0; J < by; ++J) {
    const std::size_t j0 = J * (ny - 1) / by, j1 = (J + 1) * (ny - 1) / by;
    for (std::size_t I = 0; I < bx; ++I) {
      const std::size_t i0 = I * (nx - 1) / bx, i1 = (I + 1) * (nx - 1) / bx;
      double sum = 0.0;
      std::size_t n = 0;
      for (std::size_t j = j0; j <= j1; ++j)
        for (std::size_t i = i0; i <= i1; ++i) {
          const double v = f.values[j * nx + i];
          if (std::isfinite(v)) sum += v, ++n;
        }
      if (n == 0) continue;
      out += "<rect x=\"" + svg_num(f.x[i0]) + "\" y=\"" + svg_num(-f.y[j1]) + "\" width=\"" + svg_num(f.x[i1] - f.x[i0]) +
             "\" height=\"" + svg_num(f.y[j1] - f.y[j0]) + "\" fill=\"" + heat_color((sum / n - lo) / span) + "\"/>\n";
    }
  }
  return out + "</g>\n";
}

}  // namespace detail

/// Standalone SVG 1.1 document. The viewBox covers every finite coordinate with
/// a 5% margin; each polyline becomes a single path element.
inline std::string render_svg(const Scene& scene, std::size_t raster_blocks = 64) {
  if (scene.empty()) throw Error(ErrorKind::InvalidInput, "scene is empty");
  detail::Bounds b;
  for (const SvgCurve& c : scene.curves)
    for (Complex z : c.points) b.add(z.real(), -z.imag());
  for (const SvgPoint& p : scene.points) b.add(p.z.real(), -p.z.imag());
  if (scene.domain_outline)
    for (Complex z : *scene.domain_outline) b.add(z.real(), -z.imag());
  if (scene.field && !scene.field->x.empty() && !scene.field->y.empty()) {
    b.add(scene.field->x.front(), -scene.field->y.front());
    b.add(scene.field->x.back(), -scene.field->y.back());
  }
  if (!b.valid()) throw Error(ErrorKind::InvalidInput, "scene has no finite coordinates");

  double w = b.x1 - b.x0, h = b.y1 - b.y0;
  const double extent = std::max({w, h, 1e-12});
  if (w == 0.0) w = extent;
  if (h == 0.0) h = extent;
  const double cx = 0.5 * (b.x0 + b.x1), cy = 0.5 * (b.y0 + b.y1);
  const double vw = 1.1 * w, vh = 1.1 * h;
  const double stroke = 0.003 * std::max(vw, vh);

  std::string s = "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  s += "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" viewBox=\"" + detail::svg_num(cx - 0.5 * vw) + " " +
       detail::svg_num(cy - 0.5 * vh) + " " + detail::svg_num(vw) + " " + detail::svg_num(vh) + "\">\n";
  if (scene.field) s += detail::field_raster(*scene.field, raster_blocks);
  if (scene.domain_outline)
    s += "<path d=\"" + detail::svg_path(*scene.domain_outline, true) + "\" fill=\"none\" stroke=\"#555555\" stroke-width=\"" +
         detail::svg_num(stroke) + "\" stroke-dasharray=\"" + detail::svg_num(4 * stroke) + "\"/>\n";
  for (const SvgCurve& c : scene.curves)
    s += "<path d=\"" + detail::svg_path(c.points, c.closed) + "\" fill=\"none\" stroke=\"" + c.stroke +
         "\" stroke-width=\"" + detail::svg_num(stroke) + "\"/>\n";
  for (const SvgPoint& p : scene.points)
    s += "<circle cx=\"" + detail::svg_num(p.z.real()) + "\" cy=\"" + detail::svg_num(-p.z.imag()) + "\" r=\"" +
         detail::svg_num(2.5 * stroke) + "\" fill=\"" + p.fill + "\"/>\n";
  return s + "</svg>\n";
}

inline void emit_svg(const Scene& scene, const std::string& path) {
  const std::string text = render_svg(scene);
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorKind::IoError, "cannot open svg file " + path);
  out << text;
  if (!out) throw Error(ErrorKind::IoError, "failed writing svg file " + path);
}

inline Polyline circle_polyline(Complex c, double r, std::size_t n = 256) {
  Polyline p;
  p.reserve(n);
  for (std::size_t i = 0; i < n; ++i) p.push_back(c + std::polar(r, 2.0 * kPi * static_cast<double>(i) / static_cast<double>(n)));
  return p;
}

}  // namespace twopoint
