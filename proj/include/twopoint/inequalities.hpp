#pragma once

#include <array>
#include <bit>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "twopoint/core.hpp"
#include "twopoint/covering.hpp"
#include "twopoint/disk_geometry.hpp"
#include "twopoint/rational_map.hpp"
#include "twopoint/walk_on_spheres.hpp"

namespace twopoint {

enum class InequalityId { Goluzin, Lemma, Schwarzian, RhoLimit };
enum class Hypothesis { CheckedOk, CheckedViolated, Assumed };

inline std::string_view to_string(InequalityId id) {
  switch (id) {
    case InequalityId::Goluzin: return "goluzin_1";
    case InequalityId::Lemma: return "lemma_2";
    case InequalityId::Schwarzian: return "schwarzian_5";
    case InequalityId::RhoLimit: return "rho_12_13";
  }
  return "unknown";
}

inline std::string_view to_string(Hypothesis h) {
  switch (h) {
    case Hypothesis::CheckedOk: return "checked_ok";
    case Hypothesis::CheckedViolated: return "checked_violated";
    case Hypothesis::Assumed: return "assumed";
  }
  return "unknown";
}

struct BoundReport {
  InequalityId id = InequalityId::Goluzin;
  double lhs = 0.0;
  double rhs = 0.0;
  double slack = 0.0;  // rhs - lhs
  Hypothesis hypothesis = Hypothesis::Assumed;
  std::optional<CoveringVerdict> covering;
  std::string map_digest;
  std::vector<Complex> points;
  std::vector<std::pair<std::string, double>> parameters;

  bool holds(double tolerance = tol::kSlack) const { return slack >= tolerance; }

  std::optional<double> parameter(std::string_view name) const {
    for (const auto& [k, v] : parameters)
      if (k == name) return v;
    return std::nullopt;
  }
};

/// FNV-1a over the coefficient bit patterns; identifies a map in report echoes.
inline std::string map_digest(const RationalMap& f) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  auto mix = [&h](double x) {
    auto bits = std::bit_cast<std::uint64_t>(x == 0.0 ? 0.0 : x);  // -0 and 0 hash alike
    for (int i = 0; i < 8; ++i) {
      h ^= (bits >> (8 * i)) & 0xffU;
      h *= 0x100000001b3ULL;
    }
  };
  for (const Polynomial* p : {&f.numerator(), &f.denominator()}) {
    mix(static_cast<double>(p->degree()));
    for (Complex c : p->coefficients()) {
      mix(c.real());
      mix(c.imag());
    }
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

namespace detail {

inline BoundReport make_report(InequalityId id, double lhs, double rhs) {
  BoundReport r;
  r.id = id;
  r.lhs = lhs;
  r.rhs = rhs;
  r.slack = rhs - lhs;
  return r;
}

inline void attach_covering(BoundReport& r, CoveringVerdict v) {
  r.hypothesis = v.status == CoveringStatus::NoViolationFound ? Hypothesis::CheckedOk : Hypothesis::CheckedViolated;
  r.covering = std::move(v);
}

inline void require_distinct(Complex z1, Complex z2) {
  if (std::abs(z1 - z2) == 0.0) throw Error(ErrorKind::CoincidentPoints, "z1 = z2");
}

}  // namespace detail

struct CheckOptions {
  bool check = false;
  CoveringResolution resolution{};
};

/// |(1-|z1|²)f'(z1)(1-|z2|²)f'(z2)| tanh²d(z1,z2) <= |w1 - w2|².
inline BoundReport goluzin_report(const RationalMap& f, DiskPoint z1, DiskPoint z2, CheckOptions opt = {}) {
  detail::require_distinct(z1, z2);
  const auto [w1, w2] = detail::covering_setup(f, z1, z2, false);
  const Jet3 j1 = jet_eval(f, z1), j2 = jet_eval(f, z2);
  const double th = pseudo_distance(z1, z2);
  const double lhs = std::abs((1.0 - std::norm(z1.z())) * j1.f1 * (1.0 - std::norm(z2.z())) * j2.f1) * th * th;
  BoundReport r = detail::make_report(InequalityId::Goluzin, lhs, std::norm(w1 - w2));
  r.map_digest = map_digest(f);
  r.points = {z1, z2};
  if (opt.check) detail::attach_covering(r, check_gamma_covering(f, z1, z2, opt.resolution));
  return r;
}

/// Inner radius of a plane domain at an interior point: closed form where
/// available, walk-on-spheres otherwise.
inline double inner_radius(const DomainSpec& d, Complex w, const WalkBudget& budget = {}) {
  if (d.is_closed_form()) return closed_form_invariants(d, w).inner_radius;
  return inner_radius_numeric(d, w, budget).value;
}

/// r(B1, W1) r(B2, W2) <= |W1 - W2|² for disjoint plane domains (disjointness assumed).
inline BoundReport lemma_product_check(const DomainSpec& b1, Complex W1, const DomainSpec& b2, Complex W2,
                                       const WalkBudget& budget = {}) {
  const double r1 = inner_radius(b1, W1, budget), r2 = inner_radius(b2, W2, budget);
  BoundReport r = detail::make_report(InequalityId::Lemma, r1 * r2, std::norm(W1 - W2));
  r.points = {W1, W2};
  r.parameters = {{"inner_radius_1", r1}, {"inner_radius_2", r2}};
  return r;
}

namespace detail {

/// Both sides of the Schwarzian two-point inequality from the jets at z1, z2.
/// The jets are first normalized by f -> (2f - w1 - w2)/(w2 - w1), so the
/// evaluation is always the w1 = -1, w2 = 1 case.
inline std::pair<double, double> schwarzian_sides(const Jet3& a, const Jet3& b, Complex z1, Complex z2) {
  const Complex scale = 2.0 / (b.f - a.f);
  const Complex shift = -(a.f + b.f) / (b.f - a.f);
  auto normalize = [&](const Jet3& j) { return Jet3{scale * j.f + shift, scale * j.f1, scale * j.f2, scale * j.f3}; };
  const Jet3 g1 = normalize(a), g2 = normalize(b);
  const Complex dw = g2.f - g1.f;  // 2 up to rounding
  const Complex s1 = schwarzian(g1), s2 = schwarzian(g2);
  const Complex sum = s1 * dw * dw / (6.0 * g1.f1 * g1.f1) + s2 * dw * dw / (6.0 * g2.f1 * g2.f1) +
                      2.0 * dw * dw / (g1.f1 * g2.f1 * (z1 - z2) * (z1 - z2)) +
                      2.0 * std::norm(dw) / (g1.f1 * std::conj(g2.f1) * std::pow(1.0 - z1 * std::conj(z2), 2));
  const double q1 = 1.0 - std::norm(z1), q2 = 1.0 - std::norm(z2);
  const double rhs = 2.0 + std::norm(dw) / (std::norm(g1.f1) * q1 * q1) + std::norm(dw) / (std::norm(g2.f1) * q2 * q2);
  return {sum.real(), rhs};
}

}  // namespace detail

inline BoundReport schwarzian_report(const RationalMap& f, DiskPoint z1, DiskPoint z2, CheckOptions opt = {}) {
  detail::require_distinct(z1, z2);
  detail::covering_setup(f, z1, z2, true);
  const auto [lhs, rhs] = detail::schwarzian_sides(jet_eval(f, z1), jet_eval(f, z2), z1, z2);
  BoundReport r = detail::make_report(InequalityId::Schwarzian, lhs, rhs);
  r.map_digest = map_digest(f);
  r.points = {z1, z2};
  if (opt.check) detail::attach_covering(r, check_delta_covering(f, z1, z2, opt.resolution));
  return r;
}

inline void require_lambda(double lambda) {
  if (!(lambda > 0.0 && lambda < 1.0)) throw Error(ErrorKind::ParameterOutOfRange, "λ must lie in (0, 1)");
}

/// f(z) = (z(1+λ²) - iλz² - iλ) / (λz² - i(1+λ²)z + λ): equality case of the
/// Schwarzian inequality at (-λ, λ); maps U onto the sphere minus an arc of |w| = 1.
inline RationalMap extremal_schwarzian_map(double lambda) {
  require_lambda(lambda);
  const Complex i(0.0, 1.0);
  const double s = 1.0 + lambda * lambda;
  return {Polynomial{-i * lambda, Complex(s), -i * lambda}, Polynomial{Complex(lambda), -i * s, Complex(lambda)}};
}

/// A k + B with k(z) = z/(1 - z²), sending -λ, λ to w1, w2. Omits two rays on the
/// perpendicular bisector of [w1, w2]; equality case of the Goluzin inequality.
inline RationalMap goluzin_extremal_map(double lambda, Complex w1, Complex w2) {
  require_lambda(lambda);
  if (!is_finite(w1) || !is_finite(w2)) throw Error(ErrorKind::InvalidInput, "images must be finite");
  if (std::abs(w1 - w2) == 0.0) throw Error(ErrorKind::CoincidentImages, "w1 = w2");
  const Complex A = (w2 - w1) * (1.0 - lambda * lambda) / (2.0 * lambda);
  const Complex B = 0.5 * (w1 + w2);
  return {Polynomial{B, A, -B}, Polynomial{1.0, 0.0, -1.0}};
}

/// Equality case for an arbitrary pair: goluzin_extremal_map precomposed with the
/// inverse of the pair's normalizing automorphism, so z_k -> w_k.
inline RationalMap goluzin_extremal_map(DiskPoint z1, DiskPoint z2, Complex w1, Complex w2) {
  detail::require_distinct(z1, z2);
  const NormalizedPair np = normalize_pair(z1, z2);
  return compose(goluzin_extremal_map(np.lambda, w1, w2), np.phi.inverse().to_rational_map());
}

/// (2f - w1 - w2)/(w2 - w1): sends z1 to -1 and z2 to 1.
inline RationalMap normalize_images(const RationalMap& f, Complex z1, Complex z2) {
  f.require_regular(z1);
  f.require_regular(z2);
  const Complex w1 = f(z1), w2 = f(z2);
  if (std::abs(w1 - w2) == 0.0) throw Error(ErrorKind::CoincidentImages, "f(z1) = f(z2)");
  return affine_image(f, 2.0 / (w2 - w1), -(w1 + w2) / (w2 - w1));
}

/// Σ log[(1-|ζk|²)|f'(ζk)|] + Σ_{k≠l} δk δl log|(1 - conj(ζk)ζl)/(ζk - ζl)|,
/// each unordered pair counted twice.
inline double reduced_energy(std::span<const Complex> points, std::span<const double> potentials,
                             const RationalMap& f = RationalMap::identity()) {
  if (points.size() != potentials.size()) throw Error(ErrorKind::InvalidInput, "points/potentials length mismatch");
  for (Complex z : points)
    if (!is_finite(z) || std::abs(z) >= 1.0) throw Error(ErrorKind::InvalidInput, "points must lie in the unit disk");
  for (std::size_t k = 0; k < points.size(); ++k)
    for (std::size_t l = k + 1; l < points.size(); ++l)
      if (std::abs(points[k] - points[l]) <= 1e-14) throw Error(ErrorKind::DuplicatePoints, "repeated point");
  double total = 0.0;
  for (Complex z : points) {
    const Complex d = jet_eval(f, z).f1;
    if (std::abs(d) <= tol::kCritical) throw Error(ErrorKind::CriticalPoint, "f' vanishes at a point");
    total += std::log((1.0 - std::norm(z)) * std::abs(d));
  }
  for (std::size_t k = 0; k < points.size(); ++k)
    for (std::size_t l = 0; l < points.size(); ++l)
      if (k != l)
        total += potentials[k] * potentials[l] *
                 std::log(std::abs((1.0 - std::conj(points[k]) * points[l]) / (points[k] - points[l])));
  return total;
}

inline constexpr std::array<double, 4> kRhoPotentials{-1.0, 1.0, 1.0, -1.0};

/// Offset d with f(z + d) - f(z) = target, selected as the preimage closest to the
/// first-order prediction target/f'(z) and accepted only when it is simple and
/// clearly separated from other preimages. The difference f(z + d) - f(z) is
/// evaluated from Taylor-shifted numerator and denominator, so d keeps full
/// relative accuracy even when it is tiny.
inline Complex local_inverse_offset(const RationalMap& f, Complex z, Complex target) {
  const Jet3 j = jet_eval(f, z);
  const Complex guess = target / j.f1;
  const double step = std::abs(guess);
  const auto pre = preimages_in_disk(f, j.f + target);
  if (pre.empty()) throw Error(ErrorKind::ContinuationFailed, "no preimage near the marked point");
  std::size_t best = 0;
  for (std::size_t k = 1; k < pre.size(); ++k)
    if (std::abs(pre[k].z - z - guess) < std::abs(pre[best].z - z - guess)) best = k;
  if (pre[best].multiplicity != 1 || std::abs(pre[best].z - z - guess) > 0.5 * step)
    throw Error(ErrorKind::ContinuationFailed, "preimage branch lost");
  for (std::size_t k = 0; k < pre.size(); ++k)
    if (k != best && std::abs(pre[k].z - pre[best].z) < 4.0 * step)
      throw Error(ErrorKind::ContinuationFailed, "competing preimage near the branch");

  const Polynomial ps = f.numerator().taylor_shift(z), qs = f.denominator().taylor_shift(z);
  const Complex p0 = ps[0], q0 = qs[0];
  auto increment = [&](Complex d) {  // f(z + d) - f(z)
    Complex dp{}, dq{};
    for (int k = ps.degree(); k >= 1; --k) dp = (dp + ps[static_cast<std::size_t>(k)]) * d;
    for (int k = qs.degree(); k >= 1; --k) dq = (dq + qs[static_cast<std::size_t>(k)]) * d;
    return (dp * q0 - p0 * dq) / (q0 * (q0 + dq));
  };
  Complex d = pre[best].z - z;
  for (int it = 0; it < 8; ++it) {
    const Complex corr = (increment(d) - target) / jet_eval(f, z + d).f1;
    d -= corr;
    if (std::abs(corr) <= 1e-17 * std::abs(d)) break;
  }
  return d;
}

/// The ρ-inequality: Σ log[(1-|h(ωk)|²)/|h'(ωk)|] + Σ_{k≠l} δkδl log|...| <= 2 log(4ρ²/(1-ρ²))
/// with ω = (-1-ρ, -1+ρ, 1-ρ, 1+ρ) and h the local inverse of f near z1, z2.
/// Requires f(z1) = -1, f(z2) = 1 (see normalize_images). Extra parameters:
/// rescaled = slack/ρ², which tends to the Schwarzian-inequality slack of f as
/// ρ -> 0 with error O(ρ²); schwarzian_slack; gap = |rescaled - schwarzian_slack|.
inline BoundReport rho_family_report(const RationalMap& f, DiskPoint z1, DiskPoint z2, double rho) {
  detail::require_distinct(z1, z2);
  if (!(rho > 0.0 && rho < 0.5)) throw Error(ErrorKind::ParameterOutOfRange, "ρ must lie in (0, 1/2)");
  f.require_regular(z1);
  f.require_regular(z2);
  if (std::abs(f(z1) + 1.0) > 1e-9 || std::abs(f(z2) - 1.0) > 1e-9)
    throw Error(ErrorKind::InvalidInput, "map must satisfy f(z1) = -1, f(z2) = 1");
  detail::covering_setup(f, z1, z2, true);
  const std::array<Complex, 4> omega{-1.0 - rho, -1.0 + rho, 1.0 - rho, 1.0 + rho};
  // h(ω_k) = base_k + d_k with the marked point as base; differences within a
  // pair are taken between offsets to avoid cancellation.
  std::array<Complex, 4> h{}, d{}, base{};
  double lhs = 0.0;
  for (std::size_t k = 0; k < 4; ++k) {
    base[k] = k < 2 ? z1.z() : z2.z();
    d[k] = local_inverse_offset(f, base[k], omega[k] - (k < 2 ? -1.0 : 1.0));
    h[k] = base[k] + d[k];
    const Complex dh = 1.0 / jet_eval(f, h[k]).f1;
    lhs += std::log((1.0 - std::norm(h[k])) / std::abs(dh));
  }
  for (std::size_t k = 0; k < 4; ++k)
    for (std::size_t l = 0; l < 4; ++l)
      if (k != l) {
        const Complex diff = base[k] == base[l] ? d[k] - d[l] : h[k] - h[l];
        lhs += kRhoPotentials[k] * kRhoPotentials[l] * std::log(std::abs((1.0 - std::conj(h[k]) * h[l]) / diff));
      }
  const double rhs = 2.0 * std::log(4.0 * rho * rho / (1.0 - rho * rho));
  BoundReport r = detail::make_report(InequalityId::RhoLimit, lhs, rhs);
  const double rescaled = r.slack / (rho * rho);
  const double s5 = schwarzian_report(f, z1, z2).slack;
  r.map_digest = map_digest(f);
  r.points = {z1, z2};
  r.parameters = {{"rho", rho}, {"rescaled", rescaled}, {"schwarzian_slack", s5}, {"gap", std::abs(rescaled - s5)}};
  return r;
}

}  // namespace twopoint
