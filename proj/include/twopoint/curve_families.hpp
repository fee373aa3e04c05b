#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <optional>
#include <vector>

#include "twopoint/core.hpp"

namespace twopoint {

using Polyline = std::vector<Complex>;

/// A circle through w1 and w2 whose center sits at signed offset `s` along the
/// unit normal i(w2 - w1)/|w2 - w1| from the midpoint; s = ±infinity is the line.
struct GammaCircle {
  Complex w1, w2;
  double s = 0.0;

  GammaCircle(Complex a, Complex b, double offset) : w1(a), w2(b), s(offset) {
    if (std::abs(a - b) == 0.0) throw Error(ErrorKind::DegeneratePair, "Γ circle needs distinct points");
  }

  static GammaCircle line(Complex a, Complex b) { return {a, b, std::numeric_limits<double>::infinity()}; }

  bool is_line() const { return !std::isfinite(s); }
  Complex midpoint() const { return 0.5 * (w1 + w2); }
  Complex unit_normal() const { return Complex(0.0, 1.0) * (w2 - w1) / std::abs(w2 - w1); }
  Complex center() const { return midpoint() + s * unit_normal(); }
  double radius() const { return std::hypot(0.5 * std::abs(w2 - w1), s); }
};

/// The member of Γ(w1, w2) through w (w not on the line through w1, w2).
inline GammaCircle gamma_through(Complex w1, Complex w2, Complex w) {
  GammaCircle probe(w1, w2, 0.0);
  const Complex m = probe.midpoint();
  const Complex e = probe.unit_normal();
  // |m + s e - w1|^2 = |m + s e - w|^2 is linear in s
  const double denom = 2.0 * (std::conj(e) * (w - w1)).real();
  if (std::abs(denom) <= 1e-15 * std::abs(w2 - w1))
    return GammaCircle::line(w1, w2);
  const double s = (std::norm(m - w) - std::norm(m - w1)) / denom;
  return {w1, w2, s};
}

struct GammaTrace {
  Polyline points;
  std::size_t w1_index = 0;
  std::size_t w2_index = 0;
};

/// Samples a Γ member in parameter order. Circles start at w1 and run
/// counterclockwise, so [w1_index, w2_index] and [w2_index, end) + w1 are the two
/// arcs. The line is clipped to the segment of length 4|w2 - w1| centered at the
/// midpoint; its arcs are the inner segment and the two outer pieces.
inline GammaTrace gamma_trace(const GammaCircle& circle, std::size_t n) {
  if (n < 8) throw Error(ErrorKind::InvalidInput, "gamma_trace needs n >= 8");
  GammaTrace out;
  out.points.reserve(n);
  if (circle.is_line()) {
    const Complex m = circle.midpoint();
    const Complex d = circle.w2 - circle.w1;
    const std::size_t n_out = std::max<std::size_t>(1, static_cast<std::size_t>(std::lround(n * 1.5 / 4.0)));
    const std::size_t n_mid = std::max<std::size_t>(1, static_cast<std::size_t>(std::lround(n * 1.0 / 4.0)));
    const std::size_t n_last = n - n_out - n_mid;
    for (std::size_t i = 0; i < n_out; ++i) out.points.push_back(m + d * (-2.0 + 1.5 * i / n_out));
    out.w1_index = out.points.size();
    out.points.push_back(circle.w1);
    for (std::size_t i = 1; i < n_mid; ++i) out.points.push_back(m + d * (-0.5 + 1.0 * i / n_mid));
    out.w2_index = out.points.size();
    out.points.push_back(circle.w2);
    for (std::size_t i = 1; i < n_last; ++i) out.points.push_back(m + d * (0.5 + 1.5 * i / (n_last - 1)));
    return out;
  }
  const Complex c = circle.center();
  const double r = circle.radius();
  const double a1 = std::arg(circle.w1 - c);
  double span = std::arg(circle.w2 - c) - a1;
  while (span <= 0.0) span += 2.0 * kPi;
  std::size_t n_a = static_cast<std::size_t>(std::lround(n * span / (2.0 * kPi)));
  n_a = std::clamp<std::size_t>(n_a, 1, n - 1);
  const std::size_t n_b = n - n_a;
  out.points.push_back(circle.w1);
  for (std::size_t i = 1; i < n_a; ++i) out.points.push_back(c + std::polar(r, a1 + span * i / n_a));
  out.w2_index = out.points.size();
  out.points.push_back(circle.w2);
  const double span_b = 2.0 * kPi - span;
  for (std::size_t i = 1; i < n_b; ++i) out.points.push_back(c + std::polar(r, a1 + span + span_b * i / n_b));
  return out;
}

enum class DeltaBranch { Plus, Minus };

/// One branch of |ζ² - 1 - it| = |t| with ζ = (2w - w1 - w2)/(w2 - w1).
/// Convention: the plus branch passes through w2 (ζ = 1), the minus branch through w1 (ζ = -1).
struct DeltaCurve {
  Complex w1, w2;
  double t;
  DeltaBranch branch = DeltaBranch::Plus;

  DeltaCurve(Complex a, Complex b, double t_, DeltaBranch br) : w1(a), w2(b), t(t_), branch(br) {
    if (std::abs(a - b) == 0.0) throw Error(ErrorKind::DegeneratePair, "Δ curve needs distinct points");
    if (t_ == 0.0 || !std::isfinite(t_)) throw Error(ErrorKind::ZeroParameter, "Δ curve needs finite t != 0");
  }
};

inline double delta_residual(Complex w1, Complex w2, double t, Complex w) {
  if (std::abs(w1 - w2) == 0.0) throw Error(ErrorKind::DegeneratePair, "Δ residual needs distinct points");
  if (t == 0.0) throw Error(ErrorKind::ZeroParameter, "Δ residual needs t != 0");
  const Complex zeta = (2.0 * w - w1 - w2) / (w2 - w1);
  return std::abs(std::abs(zeta * zeta - 1.0 - Complex(0.0, t)) - std::abs(t));
}

/// Continuous square root on the ζ²-circle c(θ) = 1 + it + |t|e^{iθ} with value
/// `sign` at c = 1. Rotating by u = (1 + it)/|1 + it| puts the whole circle in
/// Re > 0, where the principal root has no cut.
class DeltaRoot {
 public:
  DeltaRoot(double t, DeltaBranch branch) : t_(t) {
    const Complex center(1.0, t);
    // the ζ²-circle never encloses the origin: |1 + it|² = 1 + t² > t²
    if (!(std::abs(center) > std::abs(t))) throw Error(ErrorKind::InvalidInput, "ζ²-circle encloses the origin");
    u_ = center / std::abs(center);
    su_ = std::sqrt(u_);
    const Complex at_one = su_ * std::sqrt(1.0 / u_);
    sign_ = (std::abs(at_one - 1.0) < 0.5 ? 1.0 : -1.0) * (branch == DeltaBranch::Plus ? 1.0 : -1.0);
  }

  /// θ0 with c(θ0) = 1
  double start_angle() const { return std::arg(Complex(0.0, -t_)); }
  Complex circle_point(double theta) const { return Complex(1.0, t_) + std::polar(std::abs(t_), theta); }
  Complex operator()(Complex c) const { return sign_ * su_ * std::sqrt(c / u_); }

 private:
  double t_;
  Complex u_, su_;
  double sign_ = 1.0;
};

/// Point of a Δ branch at angle offset φ ∈ [0, 2π] from the vertex w2 (plus) or w1 (minus).
inline Complex delta_point(const DeltaCurve& curve, const DeltaRoot& root, double phi) {
  const Complex zeta = root(root.circle_point(root.start_angle() + phi));
  return 0.5 * (curve.w1 + curve.w2) + zeta * 0.5 * (curve.w2 - curve.w1);
}

/// Closed polyline of n + 1 vertices (the last one closes the loop) starting at
/// w2 (plus) or w1 (minus).
inline Polyline delta_trace(const DeltaCurve& curve, std::size_t n) {
  if (n < 16) throw Error(ErrorKind::InvalidInput, "delta_trace needs n >= 16");
  const DeltaRoot root(curve.t, curve.branch);
  Polyline out;
  out.reserve(n + 1);
  out.push_back(curve.branch == DeltaBranch::Plus ? curve.w2 : curve.w1);
  for (std::size_t i = 1; i <= n; ++i)
    out.push_back(delta_point(curve, root, 2.0 * kPi * static_cast<double>(i) / static_cast<double>(n)));
  return out;
}

}  // namespace twopoint
