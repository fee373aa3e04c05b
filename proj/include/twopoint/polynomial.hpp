#pragma once

#include <algorithm>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "twopoint/core.hpp"

namespace twopoint {

/// Complex polynomial, coefficients in ascending degree. Trailing (leading-order)
/// exact zeros are trimmed; the zero polynomial has an empty coefficient list.
class Polynomial {
 public:
  Polynomial() = default;
  Polynomial(std::initializer_list<Complex> coeffs) : c_(coeffs) { trim(); }
  explicit Polynomial(std::vector<Complex> coeffs) : c_(std::move(coeffs)) { trim(); }

  static Polynomial constant(Complex a) { return Polynomial({a}); }
  static Polynomial monomial(std::size_t degree, Complex a = 1.0) {
    std::vector<Complex> c(degree + 1, 0.0);
    c[degree] = a;
    return Polynomial(std::move(c));
  }

  /// -1 for the zero polynomial.
  int degree() const { return static_cast<int>(c_.size()) - 1; }
  bool is_zero() const { return c_.empty(); }
  std::span<const Complex> coefficients() const { return c_; }
  Complex operator[](std::size_t i) const { return i < c_.size() ? c_[i] : Complex{}; }
  Complex leading() const { return c_.empty() ? Complex{} : c_.back(); }

  double max_abs_coefficient() const {
    double m = 0.0;
    for (const auto& a : c_) m = std::max(m, std::abs(a));
    return m;
  }

  Complex operator()(Complex z) const {
    Complex acc{};
    for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = acc * z + *it;
    return acc;
  }

  Polynomial derivative() const {
    if (c_.size() <= 1) return {};
    std::vector<Complex> d(c_.size() - 1);
    for (std::size_t i = 1; i < c_.size(); ++i) d[i - 1] = static_cast<double>(i) * c_[i];
    return Polynomial(std::move(d));
  }

  /// Coefficients of p(z + d) as a polynomial in d (repeated synthetic division).
  Polynomial taylor_shift(Complex z) const {
    std::vector<Complex> c = c_;
    const std::size_t n = c.size();
    for (std::size_t k = 0; k + 1 < n; ++k)
      for (std::size_t i = n - 1; i > k; --i) c[i - 1] += z * c[i];
    return Polynomial(std::move(c));
  }

  /// Drops leading coefficients that are negligible relative to the largest one.
  Polynomial trimmed(double relative) const {
    std::vector<Complex> c = c_;
    const double scale = max_abs_coefficient();
    while (!c.empty() && std::abs(c.back()) <= relative * scale) c.pop_back();
    return Polynomial(std::move(c));
  }

  friend Polynomial operator+(const Polynomial& a, const Polynomial& b) {
    std::vector<Complex> c(std::max(a.c_.size(), b.c_.size()), 0.0);
    for (std::size_t i = 0; i < a.c_.size(); ++i) c[i] += a.c_[i];
    for (std::size_t i = 0; i < b.c_.size(); ++i) c[i] += b.c_[i];
    return Polynomial(std::move(c));
  }
  friend Polynomial operator-(const Polynomial& a, const Polynomial& b) { return a + (-1.0) * b; }
  friend Polynomial operator*(Complex s, const Polynomial& p) {
    std::vector<Complex> c = p.c_;
    for (auto& a : c) a *= s;
    return Polynomial(std::move(c));
  }
  friend Polynomial operator*(const Polynomial& a, const Polynomial& b) {
    if (a.is_zero() || b.is_zero()) return {};
    std::vector<Complex> c(a.c_.size() + b.c_.size() - 1, 0.0);
    for (std::size_t i = 0; i < a.c_.size(); ++i)
      for (std::size_t j = 0; j < b.c_.size(); ++j) c[i + j] += a.c_[i] * b.c_[j];
    return Polynomial(std::move(c));
  }

  Polynomial pow(unsigned k) const {
    Polynomial r = constant(1.0);
    for (unsigned i = 0; i < k; ++i) r = r * *this;
    return r;
  }

  bool operator==(const Polynomial&) const = default;

 private:
  void trim() {
    while (!c_.empty() && c_.back() == Complex{}) c_.pop_back();
  }

  std::vector<Complex> c_;
};

namespace detail {

inline Complex newton_polish(const Polynomial& p, const Polynomial& dp, Complex z) {
  Complex best = z;
  double best_res = std::abs(p(z));
  for (int it = 0; it < 12 && best_res > 0.0; ++it) {
    const Complex d = dp(z);
    if (d == Complex{}) break;
    z -= p(z) / d;
    const double res = std::abs(p(z));
    if (!(res < best_res)) break;
    best = z;
    best_res = res;
  }
  return best;
}

}  // namespace detail

/// All complex roots, with multiplicity (roots of multiplicity k appear k times).
/// Companion-matrix eigenvalues followed by Newton refinement on `p` itself.
/// Throws DegenerateEquation for the zero polynomial.
inline std::vector<Complex> roots(const Polynomial& poly) {
  if (poly.is_zero()) throw Error(ErrorKind::DegenerateEquation, "roots of the zero polynomial");
  const Polynomial p = poly.trimmed(1e-14);
  auto c = p.coefficients();
  std::vector<Complex> out;
  std::size_t low = 0;
  while (low < c.size() && c[low] == Complex{}) ++low;
  out.assign(low, Complex{});
  const std::size_t n = c.size() - 1 - low;  // remaining degree
  if (n == 0) return out;
  const Complex lead = c.back();

  std::vector<Complex> found;
  if (n == 1) {
    found.push_back(-c[low] / lead);
  } else if (n == 2) {
    // eigenvalues of the 2x2 companion matrix, cancellation-free form
    const Complex a = lead, b = c[low + 1], k = c[low];
    const Complex disc = std::sqrt(b * b - 4.0 * a * k);
    const Complex q = -0.5 * (std::real(std::conj(b) * disc) >= 0.0 ? b + disc : b - disc);
    if (q == Complex{}) {
      found = {Complex{}, Complex{}};
    } else {
      found = {q / a, k / q};
    }
  } else {
    Eigen::MatrixXcd companion = Eigen::MatrixXcd::Zero(n, n);
    for (std::size_t i = 1; i < n; ++i) companion(i, i - 1) = 1.0;
    for (std::size_t i = 0; i < n; ++i) companion(i, n - 1) = -c[low + i] / lead;
    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> solver(companion, false);
    for (std::size_t i = 0; i < n; ++i) found.push_back(solver.eigenvalues()[i]);
  }
  const Polynomial dp = p.derivative();
  for (auto& z : found) out.push_back(detail::newton_polish(p, dp, z));
  return out;
}

/// Groups values closer than `radius` (single linkage); returns (mean, count).
inline std::vector<std::pair<Complex, int>> cluster_points(std::span<const Complex> pts, double radius) {
  std::vector<int> label(pts.size(), -1);
  int next = 0;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    if (label[i] >= 0) continue;
    label[i] = next;
    std::vector<std::size_t> stack{i};
    while (!stack.empty()) {
      const std::size_t a = stack.back();
      stack.pop_back();
      for (std::size_t j = 0; j < pts.size(); ++j) {
        if (label[j] < 0 && std::abs(pts[a] - pts[j]) <= radius) {
          label[j] = next;
          stack.push_back(j);
        }
      }
    }
    ++next;
  }
  std::vector<std::pair<Complex, int>> out(next, {Complex{}, 0});
  for (std::size_t i = 0; i < pts.size(); ++i) {
    out[label[i]].first += pts[i];
    out[label[i]].second += 1;
  }
  for (auto& [z, k] : out) z /= static_cast<double>(k);
  return out;
}

}  // namespace twopoint
