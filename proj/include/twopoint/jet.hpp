#pragma once

#include "twopoint/core.hpp"

namespace twopoint {

/// Value and first three derivatives of a function at a point. Arithmetic
/// propagates derivatives by the Leibniz and chain rules (third-order Taylor
/// arithmetic), so jets of compound expressions are exact up to rounding.
template <class T>
struct BasicJet3 {
  T f{}, f1{}, f2{}, f3{};

  static constexpr BasicJet3 constant(T a) { return {a, T{}, T{}, T{}}; }
  static constexpr BasicJet3 variable(T z) { return {z, T(1), T{}, T{}}; }

  friend constexpr BasicJet3 operator+(const BasicJet3& a, const BasicJet3& b) {
    return {a.f + b.f, a.f1 + b.f1, a.f2 + b.f2, a.f3 + b.f3};
  }
  friend constexpr BasicJet3 operator-(const BasicJet3& a, const BasicJet3& b) {
    return {a.f - b.f, a.f1 - b.f1, a.f2 - b.f2, a.f3 - b.f3};
  }
  friend constexpr BasicJet3 operator*(T s, const BasicJet3& a) {
    return {s * a.f, s * a.f1, s * a.f2, s * a.f3};
  }
  friend constexpr BasicJet3 operator*(const BasicJet3& u, const BasicJet3& v) {
    return {u.f * v.f,
            u.f1 * v.f + u.f * v.f1,
            u.f2 * v.f + T(2) * u.f1 * v.f1 + u.f * v.f2,
            u.f3 * v.f + T(3) * u.f2 * v.f1 + T(3) * u.f1 * v.f2 + u.f * v.f3};
  }
  friend constexpr BasicJet3 operator/(const BasicJet3& u, const BasicJet3& v) {
    return u * reciprocal(v);
  }

  friend constexpr BasicJet3 reciprocal(const BasicJet3& v) {
    const T r = T(1) / v.f;
    const T r2 = r * r;
    const T r3 = r2 * r;
    return {r,
            -v.f1 * r2,
            T(2) * v.f1 * v.f1 * r3 - v.f2 * r2,
            T(-6) * v.f1 * v.f1 * v.f1 * r3 * r + T(6) * v.f1 * v.f2 * r3 - v.f3 * r2};
  }
};

/// Jet of g∘h from the jet of g at h(z) and the jet of h at z (Faà di Bruno).
template <class T>
constexpr BasicJet3<T> compose(const BasicJet3<T>& g_at_h, const BasicJet3<T>& h) {
  return {g_at_h.f,
          g_at_h.f1 * h.f1,
          g_at_h.f2 * h.f1 * h.f1 + g_at_h.f1 * h.f2,
          g_at_h.f3 * h.f1 * h.f1 * h.f1 + T(3) * g_at_h.f2 * h.f1 * h.f2 + g_at_h.f1 * h.f3};
}

using Jet3 = BasicJet3<Complex>;

}  // namespace twopoint
