#pragma once

#include <algorithm>
#include <array>
#include <memory>
#include <optional>
#include <utility>

#include "twopoint/core.hpp"
#include "twopoint/rational_map.hpp"

namespace twopoint {

/// z ↦ (az + b) / (cz + d)
struct MobiusTransform {
  Complex a{1.0}, b{}, c{}, d{1.0};

  static MobiusTransform identity() { return {}; }

  /// e^{iθ} (z - p) / (1 - conj(p) z)
  static MobiusTransform disk_automorphism(Complex p, double theta = 0.0) {
    const Complex rot = std::polar(1.0, theta);
    return {rot, -rot * p, -std::conj(p), 1.0};
  }

  Complex det() const { return a * d - b * c; }
  Complex operator()(Complex z) const { return (a * z + b) / (c * z + d); }
  Complex derivative(Complex z) const {
    const Complex den = c * z + d;
    return det() / (den * den);
  }
  MobiusTransform inverse() const { return {d, -b, -c, a}; }

  /// (*this)∘other
  MobiusTransform operator*(const MobiusTransform& o) const {
    return {a * o.a + b * o.c, a * o.b + b * o.d, c * o.a + d * o.c, c * o.b + d * o.d};
  }

  /// Scaled so that det = 1 and the first nonzero of (a, d) has nonnegative real part.
  MobiusTransform normalized() const {
    const Complex s = std::sqrt(det());
    MobiusTransform m{a / s, b / s, c / s, d / s};
    const Complex pivot = std::abs(m.d) > 1e-300 ? m.d : m.a;
    if (pivot.real() < 0.0) m = {-m.a, -m.b, -m.c, -m.d};
    return m;
  }

  /// Checks |T(e^{iθ})| = 1 at eight boundary samples.
  bool is_disk_automorphism(double tolerance = 1e-10) const {
    for (int k = 0; k < 8; ++k) {
      const Complex z = std::polar(1.0, kPi * k / 4.0 + 0.1);
      if (std::abs(std::abs((*this)(z)) - 1.0) > tolerance) return false;
    }
    return std::abs((*this)(0.0)) < 1.0;
  }

  RationalMap to_rational_map() const { return mobius_map(a, b, c, d); }
};

/// Hyperbolic distance normalized so that tanh d equals the pseudo-hyperbolic
/// distance (curvature -4).
inline double hyp_distance(Complex z1, Complex z2) { return std::atanh(std::min(pseudo_distance(z1, z2), 1.0)); }

struct NormalizedPair {
  MobiusTransform phi;  // disk automorphism with phi(-lambda) = z1, phi(lambda) = z2
  double lambda = 0.0;
};

inline NormalizedPair normalize_pair(Complex z1, Complex z2) {
  if (std::abs(z1 - z2) == 0.0) throw Error(ErrorKind::CoincidentPoints, "normalize_pair needs distinct points");
  const auto sigma = MobiusTransform::disk_automorphism(z1);  // z1 -> 0
  const Complex u = sigma(z2);
  const double p = std::abs(u);
  const double lambda = p / (1.0 + std::sqrt((1.0 - p) * (1.0 + p)));
  const MobiusTransform psi{1.0, lambda, lambda, 1.0};  // -lambda -> 0, lambda -> p
  const MobiusTransform rot{u / p, 0.0, 0.0, 1.0};
  return {(sigma.inverse() * rot * psi).normalized(), lambda};
}

enum class HalfDiskSide { Left, Right };

/// Plane domains with closed-form or implicit boundaries.
struct DomainSpec {
  enum class Kind { UnitDisk, Disk, HalfPlane, HalfDisk, GreenLevelSubdomain };

  Kind kind = Kind::UnitDisk;
  Complex center{};            // Disk
  double radius = 1.0;         // Disk
  Complex normal{1.0, 0.0};    // HalfPlane: outward unit normal; domain Re(z conj(n)) < offset
  double offset = 0.0;         // HalfPlane
  HalfDiskSide side = HalfDiskSide::Left;
  std::shared_ptr<const DomainSpec> base;  // GreenLevelSubdomain
  Complex z1{}, z2{};                      // GreenLevelSubdomain
  int sign = 1;                            // +1: g(.,z1) > g(.,z2)

  static DomainSpec unit_disk() { return {}; }
  static DomainSpec disk(Complex c, double r) {
    if (!(r > 0.0)) throw Error(ErrorKind::InvalidInput, "disk radius must be positive");
    DomainSpec d;
    d.kind = Kind::Disk;
    d.center = c;
    d.radius = r;
    return d;
  }
  static DomainSpec half_plane(Complex outward_normal, double offset) {
    if (std::abs(outward_normal) == 0.0) throw Error(ErrorKind::InvalidInput, "half-plane normal is zero");
    DomainSpec d;
    d.kind = Kind::HalfPlane;
    d.normal = outward_normal / std::abs(outward_normal);
    d.offset = offset;
    return d;
  }
  static DomainSpec half_disk(HalfDiskSide s) {
    DomainSpec d;
    d.kind = Kind::HalfDisk;
    d.side = s;
    return d;
  }
  static DomainSpec green_level(const DomainSpec& base, Complex z1, Complex z2, int sign);

  bool is_closed_form() const { return kind != Kind::GreenLevelSubdomain; }
  bool contains(Complex z) const;
  /// Lower bound on the distance from an interior point to the boundary
  /// (exact for closed-form kinds).
  double boundary_distance(Complex z) const;
};

/// Conformal map of a closed-form domain onto the unit disk sending `pole` to 0.
/// value(z) and derivative(z) are closed-form; Green function is -log|value|.
class CanonicalMap {
 public:
  CanonicalMap(const DomainSpec& domain, Complex pole) : dom_(domain) {
    switch (dom_.kind) {
      case DomainSpec::Kind::UnitDisk:
      case DomainSpec::Kind::Disk:
      case DomainSpec::Kind::HalfPlane:
      case DomainSpec::Kind::HalfDisk:
        break;
      case DomainSpec::Kind::GreenLevelSubdomain:
        throw Error(ErrorKind::UnsupportedDomain, "no closed form for Green level subdomains");
    }
    pole_ = pre(pole).first;
  }

  Complex value(Complex z) const { return post(pre(z).first); }

  /// (F(z), F'(z))
  std::pair<Complex, Complex> jet(Complex z) const {
    const auto [s, ds] = pre(z);
    const auto [v, dv] = post_jet(s);
    return {v, dv * ds};
  }

  double green(Complex z) const { return -std::log(std::abs(value(z))); }

  /// F^{-1}(xi) for |xi| < 1.
  Complex inverse(Complex xi) const {
    const Complex s0 = pole_;
    switch (dom_.kind) {
      case DomainSpec::Kind::UnitDisk: return (xi + s0) / (1.0 + std::conj(s0) * xi);
      case DomainSpec::Kind::Disk: return dom_.center + dom_.radius * (xi + s0) / (1.0 + std::conj(s0) * xi);
      case DomainSpec::Kind::HalfPlane: {
        const Complex s = (s0 + xi * std::conj(s0)) / (1.0 - xi);
        return (s + dom_.offset) * dom_.normal;
      }
      case DomainSpec::Kind::HalfDisk: {
        const Complex u = std::sqrt((s0 - xi * std::conj(s0)) / (1.0 - xi));
        const Complex v = (u - 1.0) / (u + 1.0);
        return dom_.side == HalfDiskSide::Left ? v * Complex(0.0, 1.0) : v * Complex(0.0, -1.0);
      }
      case DomainSpec::Kind::GreenLevelSubdomain: break;
    }
    return xi;
  }

 private:
  // Domain-specific first stage to a canonical model (disk or upper/left half-plane).
  std::pair<Complex, Complex> pre(Complex z) const {
    switch (dom_.kind) {
      case DomainSpec::Kind::UnitDisk:
        return {z, 1.0};
      case DomainSpec::Kind::Disk:
        return {(z - dom_.center) / dom_.radius, 1.0 / dom_.radius};
      case DomainSpec::Kind::HalfPlane:
        // left half-plane model: Re s < 0
        return {z * std::conj(dom_.normal) - dom_.offset, std::conj(dom_.normal)};
      case DomainSpec::Kind::HalfDisk: {
        // rotate to the upper half-disk, then (1+v)/(1-v) onto the first quadrant, square
        const Complex rot = dom_.side == HalfDiskSide::Left ? Complex(0.0, -1.0) : Complex(0.0, 1.0);
        const Complex v = rot * z;
        const Complex u = (1.0 + v) / (1.0 - v);
        const Complex du = 2.0 / ((1.0 - v) * (1.0 - v)) * rot;
        return {u * u, 2.0 * u * du};
      }
      case DomainSpec::Kind::GreenLevelSubdomain:
        break;
    }
    return {z, 1.0};
  }

  std::pair<Complex, Complex> post_jet(Complex s) const {
    const Complex s0 = pole_;
    switch (dom_.kind) {
      case DomainSpec::Kind::UnitDisk:
      case DomainSpec::Kind::Disk: {
        const Complex den = 1.0 - std::conj(s0) * s;
        return {(s - s0) / den, (1.0 - std::norm(s0)) / (den * den)};
      }
      case DomainSpec::Kind::HalfPlane: {
        const Complex den = s + std::conj(s0);
        return {(s - s0) / den, (std::conj(s0) + s0) / (den * den)};
      }
      case DomainSpec::Kind::HalfDisk: {
        const Complex den = s - std::conj(s0);
        return {(s - s0) / den, (s0 - std::conj(s0)) / (den * den)};
      }
      case DomainSpec::Kind::GreenLevelSubdomain:
        break;
    }
    return {s, 1.0};
  }
  Complex post(Complex s) const { return post_jet(s).first; }

  DomainSpec dom_;
  Complex pole_{};
};

inline DomainSpec DomainSpec::green_level(const DomainSpec& base, Complex z1, Complex z2, int sign) {
  if (!base.is_closed_form())
    throw Error(ErrorKind::UnsupportedDomain, "Green level subdomains need a closed-form base");
  if (std::abs(z1 - z2) == 0.0) throw Error(ErrorKind::CoincidentPoints, "level subdomain poles coincide");
  if (!base.contains(z1) || !base.contains(z2))
    throw Error(ErrorKind::InvalidInput, "level subdomain poles must be interior to the base");
  DomainSpec d;
  d.kind = Kind::GreenLevelSubdomain;
  d.base = std::make_shared<const DomainSpec>(base);
  d.z1 = z1;
  d.z2 = z2;
  d.sign = sign >= 0 ? 1 : -1;
  return d;
}

inline bool DomainSpec::contains(Complex z) const {
  switch (kind) {
    case Kind::UnitDisk: return std::abs(z) < 1.0;
    case Kind::Disk: return std::abs(z - center) < radius;
    case Kind::HalfPlane: return (z * std::conj(normal)).real() < offset;
    case Kind::HalfDisk:
      return std::abs(z) < 1.0 && (side == HalfDiskSide::Left ? z.real() < 0.0 : z.real() > 0.0);
    case Kind::GreenLevelSubdomain: {
      if (!base->contains(z)) return false;
      const double g1 = CanonicalMap(*base, z1).green(z);
      const double g2 = CanonicalMap(*base, z2).green(z);
      return sign * (g1 - g2) > 0.0;
    }
  }
  return false;
}

namespace detail {

/// Euclidean distance from xi (in the unit disk) to the hyperbolic bisector of 0 and a.
inline double bisector_distance(Complex xi, Complex a) {
  const double p = std::abs(a);
  const double lam = p / (1.0 + std::sqrt((1.0 - p) * (1.0 + p)));
  const Complex dir = a / p;
  const double c = (1.0 + lam * lam) / (2.0 * lam);
  const double rho = (1.0 - lam * lam) / (2.0 * lam);
  return std::abs(std::abs(xi - c * dir) - rho);
}

}  // namespace detail

inline double DomainSpec::boundary_distance(Complex z) const {
  switch (kind) {
    case Kind::UnitDisk: return 1.0 - std::abs(z);
    case Kind::Disk: return radius - std::abs(z - center);
    case Kind::HalfPlane: return offset - (z * std::conj(normal)).real();
    case Kind::HalfDisk: return std::min(1.0 - std::abs(z), std::abs(z.real()));
    case Kind::GreenLevelSubdomain: {
      // Map to the disk with z1 -> 0; the level set becomes the hyperbolic bisector
      // of 0 and F(z2). Koebe's 1/4 theorem turns the disk-side clearance into a
      // guaranteed z-side ball.
      const CanonicalMap f(*base, z1);
      const auto [xi, dxi] = f.jet(z);
      const Complex a = f.value(z2);
      const double clearance = std::min(detail::bisector_distance(xi, a), 1.0 - std::abs(xi));
      const double koebe = clearance / (4.0 * std::abs(dxi));
      return std::min(base->boundary_distance(z), koebe);
    }
  }
  return 0.0;
}

struct ClosedFormInvariants {
  std::optional<double> green;
  double inner_radius = 0.0;
};

/// Green function g(z, z0) (when z0 is given) and inner radius r(domain, z).
inline ClosedFormInvariants closed_form_invariants(const DomainSpec& domain, Complex z,
                                                   std::optional<Complex> z0 = std::nullopt) {
  if (!domain.is_closed_form())
    throw Error(ErrorKind::UnsupportedDomain, "Green level subdomains are handled numerically");
  if (!domain.contains(z)) throw Error(ErrorKind::InvalidInput, "point is not interior to the domain");
  ClosedFormInvariants out;
  const CanonicalMap at_z(domain, z);
  out.inner_radius = 1.0 / std::abs(at_z.jet(z).second);
  if (z0) {
    if (!domain.contains(*z0)) throw Error(ErrorKind::InvalidInput, "pole is not interior to the domain");
    if (std::abs(*z0 - z) == 0.0) throw Error(ErrorKind::CoincidentPoints, "Green function at its pole");
    out.green = CanonicalMap(domain, *z0).green(z);
  }
  return out;
}

}  // namespace twopoint
