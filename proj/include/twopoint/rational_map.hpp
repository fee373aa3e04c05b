#pragma once

#include <algorithm>
#include <cstddef>
#include <optional>
#include <utility>
#include <vector>

#include "twopoint/core.hpp"
#include "twopoint/jet.hpp"
#include "twopoint/polynomial.hpp"

namespace twopoint {

/// A point of the open unit disk.
class DiskPoint {
 public:
  explicit DiskPoint(Complex z) : z_(z) {
    if (!is_finite(z) || !(std::abs(z) < 1.0))
      throw Error(ErrorKind::InvalidInput, "disk point must satisfy |z| < 1");
  }
  Complex z() const { return z_; }
  operator Complex() const { return z_; }

 private:
  Complex z_;
};

struct Preimage {
  Complex z;
  int multiplicity = 1;
};

struct SingularPoints {
  std::vector<Complex> poles;
  std::vector<Complex> critical;
};

/// Meromorphic function given as numerator / denominator. Invariants are checked
/// on construction: nonzero denominator and no common root (separation above
/// tol::kCommonRoot). Poles are cached since every evaluation checks them.
class RationalMap {
 public:
  RationalMap(Polynomial numerator, Polynomial denominator)
      : p_(std::move(numerator)), q_(std::move(denominator)) {
    if (q_.is_zero()) throw Error(ErrorKind::InvalidMap, "denominator is identically zero");
    if (q_.degree() > 0) poles_ = roots(q_);
    if (p_.degree() > 0 && !poles_.empty()) {
      for (const Complex& a : roots(p_))
        for (const Complex& b : poles_)
          if (std::abs(a - b) <= tol::kCommonRoot)
            throw Error(ErrorKind::InvalidMap, "numerator and denominator share a root");
    }
  }

  static RationalMap identity() { return {Polynomial{0.0, 1.0}, Polynomial{1.0}}; }
  static RationalMap polynomial(Polynomial p) { return {std::move(p), Polynomial{1.0}}; }

  const Polynomial& numerator() const { return p_; }
  const Polynomial& denominator() const { return q_; }
  std::span<const Complex> poles() const { return poles_; }
  int degree() const { return std::max(p_.degree(), q_.degree()); }

  Complex operator()(Complex z) const { return p_(z) / q_(z); }

  /// Throws PoleAtPoint when z is within tol::kPole of a pole.
  void require_regular(Complex z) const {
    for (const Complex& a : poles_)
      if (std::abs(z - a) <= tol::kPole) throw Error(ErrorKind::PoleAtPoint, "evaluation at a pole");
  }

  bool has_pole_near(Complex z, double radius) const {
    return std::any_of(poles_.begin(), poles_.end(), [&](Complex a) { return std::abs(z - a) <= radius; });
  }

 private:
  Polynomial p_, q_;
  std::vector<Complex> poles_;
};

inline Jet3 jet_eval(const Polynomial& p, Complex z) {
  const Jet3 x = Jet3::variable(z);
  Jet3 acc{};
  auto c = p.coefficients();
  for (auto it = c.rbegin(); it != c.rend(); ++it) acc = acc * x + Jet3::constant(*it);
  return acc;
}

/// f, f', f'', f''' at z by jet arithmetic on the quotient.
inline Jet3 jet_eval(const RationalMap& f, Complex z) {
  f.require_regular(z);
  return jet_eval(f.numerator(), z) / jet_eval(f.denominator(), z);
}

/// Schwarzian derivative f'''/f' - 3/2 (f''/f')^2.
inline Complex schwarzian(const Jet3& j) {
  if (std::abs(j.f1) <= tol::kCritical) throw Error(ErrorKind::CriticalPoint, "f'(z) vanishes");
  const Complex r = j.f2 / j.f1;
  return j.f3 / j.f1 - 1.5 * r * r;
}

inline Complex schwarzian_at(const RationalMap& f, Complex z) { return schwarzian(jet_eval(f, z)); }

/// Roots of P - wQ inside the unit disk, clustered into (point, multiplicity).
inline std::vector<Preimage> preimages_in_disk(const RationalMap& f, Complex w, double radius = 1.0) {
  const Polynomial eq = f.numerator() - w * f.denominator();
  if (eq.is_zero() || eq.max_abs_coefficient() <= 1e-15 * (f.numerator().max_abs_coefficient() +
                                                           std::abs(w) * f.denominator().max_abs_coefficient()))
    throw Error(ErrorKind::DegenerateEquation, "P - wQ vanishes identically");
  std::vector<Complex> rs = roots(eq);
  std::erase_if(rs, [&](Complex z) { return !(std::abs(z) < radius); });
  std::vector<Preimage> out;
  for (const auto& [z, k] : cluster_points(rs, tol::kCluster)) out.push_back({z, k});
  std::sort(out.begin(), out.end(), [](const Preimage& a, const Preimage& b) {
    return a.z.real() != b.z.real() ? a.z.real() < b.z.real() : a.z.imag() < b.z.imag();
  });
  return out;
}

/// Poles and critical points (roots of P'Q - PQ') with |z| < 1 + 1e-9.
inline SingularPoints singular_points(const RationalMap& f) {
  const double r = 1.0 + 1e-9;
  SingularPoints s;
  for (const auto& [z, k] : cluster_points(f.poles(), tol::kCluster))
    if (std::abs(z) < r) s.poles.insert(s.poles.end(), static_cast<std::size_t>(k), z);
  const Polynomial wronskian =
      f.numerator().derivative() * f.denominator() - f.numerator() * f.denominator().derivative();
  if (!wronskian.is_zero() && wronskian.trimmed(1e-14).degree() > 0) {
    for (const Complex& z : roots(wronskian))
      if (std::abs(z) < r && !f.has_pole_near(z, tol::kCluster)) s.critical.push_back(z);
  }
  return s;
}

/// g∘h in lowest terms: sum_i g_i P^i Q^(d-i) over the same for the denominator.
inline RationalMap compose(const RationalMap& g, const RationalMap& h) {
  const int d = std::max(g.degree(), 0);
  const Polynomial& P = h.numerator();
  const Polynomial& Q = h.denominator();
  auto homogenize = [&](const Polynomial& a) {
    Polynomial acc;
    for (int i = 0; i <= a.degree(); ++i)
      acc = acc + a[static_cast<std::size_t>(i)] * (P.pow(i) * Q.pow(static_cast<unsigned>(d - i)));
    return acc;
  };
  return {homogenize(g.numerator()), homogenize(g.denominator())};
}

/// a·f + b
inline RationalMap affine_image(const RationalMap& f, Complex a, Complex b) {
  return {a * f.numerator() + b * f.denominator(), f.denominator()};
}

/// (az + b) / (cz + d) as a rational map.
inline RationalMap mobius_map(Complex a, Complex b, Complex c, Complex d) {
  if (std::abs(a * d - b * c) == 0.0) throw Error(ErrorKind::InvalidMap, "singular Möbius coefficients");
  return {Polynomial{b, a}, Polynomial{d, c}};
}

/// e^{iθ} Π (z - a_k) / (1 - conj(a_k) z)
inline RationalMap blaschke_product(std::span<const Complex> zeros, double theta = 0.0) {
  Polynomial num{std::polar(1.0, theta)}, den{1.0};
  for (const Complex& a : zeros) {
    if (!(std::abs(a) < 1.0)) throw Error(ErrorKind::InvalidInput, "Blaschke zeros must lie in the disk");
    num = num * Polynomial{-a, 1.0};
    den = den * Polynomial{1.0, -std::conj(a)};
  }
  return {num, den};
}

}  // namespace twopoint
