#pragma once

#include <algorithm>
#include <cmath>
#include <random>

#include "twopoint/disk_geometry.hpp"
#include "twopoint/rational_map.hpp"

namespace twopoint::testing {

inline Complex random_disk_point(std::mt19937_64& rng, double max_modulus) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  return std::polar(max_modulus * std::sqrt(u(rng)), 2.0 * kPi * u(rng));
}

inline MobiusTransform random_automorphism(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  return MobiusTransform::disk_automorphism(random_disk_point(rng, 0.9), 2.0 * kPi * u(rng));
}

/// Coefficients i.i.d. complex normal, numerator and denominator degree in [1, max_degree].
inline RationalMap random_rational_map(std::mt19937_64& rng, int max_degree) {
  std::normal_distribution<double> n(0.0, 1.0);
  std::uniform_int_distribution<int> deg(1, max_degree);
  auto poly = [&](int d) {
    std::vector<Complex> c(static_cast<std::size_t>(d + 1));
    for (Complex& x : c) x = Complex(n(rng), n(rng));
    return Polynomial(std::move(c));
  };
  for (;;) {
    try {
      return RationalMap(poly(deg(rng)), poly(deg(rng)));
    } catch (const Error&) {
    }
  }
}

/// f', f'', f''' from central differences of step h, h/2, h/4 combined by two
/// Richardson passes (O(h^6)). Analytic maps can be differenced along the real axis.
inline Jet3 finite_difference_jet(const RationalMap& f, Complex z, double h) {
  auto d1 = [&](double s) { return (f(z + s) - f(z - s)) / (2.0 * s); };
  auto d2 = [&](double s) { return (f(z + s) - 2.0 * f(z) + f(z - s)) / (s * s); };
  auto d3 = [&](double s) { return (f(z + 2.0 * s) - 2.0 * f(z + s) + 2.0 * f(z - s) - f(z - 2.0 * s)) / (2.0 * s * s * s); };
  auto extrapolate = [h](auto&& d) {
    const Complex a = d(h), b = d(0.5 * h), c = d(0.25 * h);
    const Complex ab = (4.0 * b - a) / 3.0, bc = (4.0 * c - b) / 3.0;
    return (16.0 * bc - ab) / 15.0;
  };
  return {f(z), extrapolate(d1), extrapolate(d2), extrapolate(d3)};
}

inline Complex finite_difference_schwarzian(const RationalMap& f, Complex z, double h) {
  const Jet3 j = finite_difference_jet(f, z, h);
  const Complex r = j.f2 / j.f1;
  return j.f3 / j.f1 - 1.5 * r * r;
}

inline double distance_to_poles(const RationalMap& f, Complex z) {
  double d = std::numeric_limits<double>::infinity();
  for (Complex p : f.poles()) d = std::min(d, std::abs(z - p));
  return d;
}

/// Random point of the disk at distance >= 0.15 from every pole and with |f'| not small.
inline Complex admissible_point(std::mt19937_64& rng, const RationalMap& f) {
  for (;;) {
    const Complex z = random_disk_point(rng, 0.9);
    if (distance_to_poles(f, z) < 0.15) continue;
    if (std::abs(jet_eval(f, z).f1) < 0.05 * std::abs(f(z)) + 1e-3) continue;
    return z;
  }
}

}  // namespace twopoint::testing
