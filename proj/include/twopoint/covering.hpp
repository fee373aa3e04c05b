#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <vector>

#include "twopoint/core.hpp"
#include "twopoint/curve_families.hpp"
#include "twopoint/rational_map.hpp"

namespace twopoint {

enum class CoveringStatus { NoViolationFound, MultiplePreimage, ExitsImage };

inline std::string_view to_string(CoveringStatus s) {
  switch (s) {
    case CoveringStatus::NoViolationFound: return "no_violation_found";
    case CoveringStatus::MultiplePreimage: return "multiple_preimage";
    case CoveringStatus::ExitsImage: return "exits_image";
  }
  return "unknown";
}

enum class CurveFamily { Gamma, Delta };

struct CoveringWitness {
  Complex w;
  bool w_is_infinite = false;
  std::vector<Complex> preimages;  // with multiplicity
};

/// Outcome of a sampled covering check. `no_violation_found` only certifies the
/// stated resolution. `exits_image` is reported when one of the marked images
/// itself has no preimage clear of the boundary guard band.
struct CoveringVerdict {
  CurveFamily family = CurveFamily::Gamma;
  CoveringStatus status = CoveringStatus::NoViolationFound;
  std::optional<CoveringWitness> witness;
  std::size_t curve_samples = 0;   // n
  std::size_t family_samples = 0;  // m
};

struct CoveringResolution {
  std::size_t curve_samples = 512;
  std::size_t family_samples = 257;
};

namespace detail {

/// Preimages of w clear of the boundary guard band, expanded by multiplicity.
/// A null w stands for the point at infinity (preimages are the poles).
inline std::vector<Complex> guarded_preimages(const RationalMap& f, std::optional<Complex> w) {
  std::vector<Complex> out;
  const double limit = 1.0 - tol::kBoundaryGuard;
  if (!w) {
    for (const auto& [z, k] : cluster_points(f.poles(), tol::kCluster))
      if (std::abs(z) < limit) out.insert(out.end(), static_cast<std::size_t>(k), z);
    return out;
  }
  for (const Preimage& p : preimages_in_disk(f, *w, limit))
    out.insert(out.end(), static_cast<std::size_t>(p.multiplicity), p.z);
  return out;
}

struct CoveringSetup {
  Complex w1, w2;
};

inline CoveringSetup covering_setup(const RationalMap& f, Complex z1, Complex z2, bool need_regular) {
  f.require_regular(z1);
  f.require_regular(z2);
  const Complex w1 = f(z1), w2 = f(z2);
  if (!is_finite(w1) || !is_finite(w2)) throw Error(ErrorKind::PoleAtPoint, "marked image is infinite");
  if (std::abs(w1 - w2) <= 1e-14 * (1.0 + std::abs(w1)))
    throw Error(ErrorKind::CoincidentImages, "f(z1) = f(z2)");
  if (need_regular) {
    for (Complex z : {z1, z2})
      if (std::abs(jet_eval(f, z).f1) <= tol::kCritical) throw Error(ErrorKind::CriticalPoint, "f'(z_k) = 0");
  }
  return {w1, w2};
}

/// Number of guarded preimages (with multiplicity). Maps of degree <= 2 take a
/// closed-form, allocation-free path; the corpus is dominated by them.
class PreimageCounter {
 public:
  explicit PreimageCounter(const RationalMap& f) : f_(f), fast_(f.degree() <= 2) {
    for (std::size_t i = 0; i < 3; ++i) {
      p_[i] = f.numerator()[i];
      q_[i] = f.denominator()[i];
    }
    scale_p_ = f.numerator().max_abs_coefficient();
    scale_q_ = f.denominator().max_abs_coefficient();
    poles_ = guarded_preimages(f, std::nullopt).size();
  }

  std::size_t operator()(const std::optional<Complex>& w) const {
    if (!w) return poles_;
    if (!fast_) return guarded_preimages(f_, w).size();
    std::array<Complex, 3> e;
    double m = 0.0;
    for (std::size_t i = 0; i < 3; ++i) {
      e[i] = p_[i] - *w * q_[i];
      m = std::max(m, std::abs(e[i]));
    }
    if (m <= 1e-15 * (scale_p_ + std::abs(*w) * scale_q_))
      throw Error(ErrorKind::DegenerateEquation, "P - wQ vanishes identically");
    int deg = 2;
    while (deg > 0 && std::abs(e[static_cast<std::size_t>(deg)]) <= 1e-14 * m) --deg;
    const double limit = 1.0 - tol::kBoundaryGuard;
    if (deg == 0) return 0;
    if (deg == 1) return std::abs(e[0] / e[1]) < limit ? 1 : 0;
    const Complex a = e[2], b = e[1], k = e[0];
    const Complex disc = std::sqrt(b * b - 4.0 * a * k);
    const Complex q = -0.5 * (std::real(std::conj(b) * disc) >= 0.0 ? b + disc : b - disc);
    if (q == Complex{}) return 2;  // double root at 0
    return (std::abs(q / a) < limit ? 1U : 0U) + (std::abs(k / q) < limit ? 1U : 0U);
  }

 private:
  const RationalMap& f_;
  bool fast_;
  std::array<Complex, 3> p_{}, q_{};
  double scale_p_ = 0.0, scale_q_ = 0.0;
  std::size_t poles_ = 0;
};

/// Scans arcs (sample lists) in order; returns the first violation. `samples`
/// holds nullopt for the point at infinity.
class ArcScanner {
 public:
  ArcScanner(const RationalMap& f, const PreimageCounter& count) : f_(f), count_(count) {}

  /// true when a violation was recorded
  bool scan(const std::vector<std::optional<Complex>>& samples) {
    const std::optional<Complex>* first_multiple = nullptr;
    for (const auto& w : samples) {
      const std::size_t n = count_(w);
      if (n == 0) return false;  // arc leaves f(U): not constrained
      if (n >= 2 && !first_multiple) first_multiple = &w;
    }
    if (!first_multiple) return false;
    const auto& w = *first_multiple;
    witness = CoveringWitness{w.value_or(Complex{}), !w.has_value(), guarded_preimages(f_, w)};
    return true;
  }

  std::optional<CoveringWitness> witness;

 private:
  const RationalMap& f_;
  const PreimageCounter& count_;
};

inline std::optional<CoveringVerdict> check_marked_points(const RationalMap& f, Complex w1, Complex w2) {
  for (Complex w : {w1, w2}) {
    auto pre = guarded_preimages(f, w);
    if (pre.empty()) {
      CoveringVerdict v;
      v.status = CoveringStatus::ExitsImage;
      v.witness = CoveringWitness{w, false, {}};
      return v;
    }
  }
  return std::nullopt;
}

}  // namespace detail

/// Corollary-1 hypothesis: every arc of every circle through f(z1), f(z2) that
/// lies in f(U) has single preimages. The circle offsets follow a tangent grid
/// s = (|w2 - w1|/2) tan(-π/2 + πj/m); j = 0 is the straight line.
inline CoveringVerdict check_gamma_covering(const RationalMap& f, DiskPoint z1, DiskPoint z2,
                                            CoveringResolution res = {}) {
  const std::size_t n = res.curve_samples, m = res.family_samples;
  if (n < 8 || m < 1) throw Error(ErrorKind::InvalidInput, "covering resolution too small");
  const auto [w1, w2] = detail::covering_setup(f, z1, z2, false);
  CoveringVerdict verdict;
  if (auto bad = detail::check_marked_points(f, w1, w2)) verdict = *bad;
  verdict.family = CurveFamily::Gamma;
  verdict.curve_samples = n;
  verdict.family_samples = m;
  if (verdict.status != CoveringStatus::NoViolationFound) return verdict;

  const double half = 0.5 * std::abs(w2 - w1);
  const detail::PreimageCounter counter(f);
  std::vector<std::optional<Complex>> arc_a, arc_b;
  for (std::size_t j = 0; j < m; ++j) {
    arc_a.clear();
    arc_b.clear();
    if (j == 0) {
      // line: w = mid + (w2 - w1) tan(ψ/2)/2, ψ = ±π/2 at w1/w2 and ψ = π at infinity
      const Complex mid = 0.5 * (w1 + w2), d = w2 - w1;
      const std::size_t half_n = n / 2;
      for (std::size_t i = 0; i <= half_n; ++i) {
        const double psi = -0.5 * kPi + kPi * static_cast<double>(i) / static_cast<double>(half_n);
        arc_a.emplace_back(i == 0 ? w1 : i == half_n ? w2 : mid + d * (0.5 * std::tan(0.5 * psi)));
      }
      for (std::size_t i = 0; i <= n - half_n; ++i) {
        const double psi = 0.5 * kPi + kPi * static_cast<double>(i) / static_cast<double>(n - half_n);
        if (2 * i == n - half_n) {
          arc_b.emplace_back(std::nullopt);
        } else {
          arc_b.emplace_back(i == 0 ? w2 : i == n - half_n ? w1 : mid + d * (0.5 * std::tan(0.5 * psi)));
        }
      }
    } else {
      const double phi = -0.5 * kPi + kPi * static_cast<double>(j) / static_cast<double>(m);
      const GammaTrace tr = gamma_trace(GammaCircle(w1, w2, half * std::tan(phi)), n);
      for (std::size_t i = 0; i <= tr.w2_index; ++i) arc_a.emplace_back(tr.points[i]);
      for (std::size_t i = tr.w2_index; i < tr.points.size(); ++i) arc_b.emplace_back(tr.points[i]);
      arc_b.emplace_back(w1);
    }
    for (auto* arc : {&arc_a, &arc_b}) {
      detail::ArcScanner scanner(f, counter);
      if (scanner.scan(*arc)) {
        verdict.status = CoveringStatus::MultiplePreimage;
        verdict.witness = std::move(scanner.witness);
        return verdict;
      }
    }
  }
  return verdict;
}

/// t values for the Δ family: m values of ±tan(φ), φ on a midpoint grid of (0, π/2).
inline std::vector<double> delta_parameter_grid(std::size_t m) {
  std::vector<double> ts;
  const std::size_t neg = m / 2, pos = m - neg;
  for (std::size_t i = neg; i-- > 0;) ts.push_back(-std::tan(0.5 * kPi * (i + 0.5) / static_cast<double>(neg)));
  for (std::size_t i = 0; i < pos; ++i) ts.push_back(std::tan(0.5 * kPi * (i + 0.5) / static_cast<double>(pos)));
  return ts;
}

/// Corollary-2 hypothesis: every Δ(w1, w2) branch lying in f(U) has single preimages.
inline CoveringVerdict check_delta_covering(const RationalMap& f, DiskPoint z1, DiskPoint z2,
                                            CoveringResolution res = {}) {
  const std::size_t n = res.curve_samples, m = res.family_samples;
  if (n < 16 || m < 1) throw Error(ErrorKind::InvalidInput, "covering resolution too small");
  const auto [w1, w2] = detail::covering_setup(f, z1, z2, true);
  CoveringVerdict verdict;
  if (auto bad = detail::check_marked_points(f, w1, w2)) verdict = *bad;
  verdict.family = CurveFamily::Delta;
  verdict.curve_samples = n;
  verdict.family_samples = m;
  if (verdict.status != CoveringStatus::NoViolationFound) return verdict;

  const detail::PreimageCounter counter(f);
  std::vector<std::optional<Complex>> samples;
  samples.reserve(n);
  for (double t : delta_parameter_grid(m)) {
    for (DeltaBranch br : {DeltaBranch::Plus, DeltaBranch::Minus}) {
      const DeltaCurve curve(w1, w2, t, br);
      const DeltaRoot root(t, br);
      samples.clear();
      samples.emplace_back(br == DeltaBranch::Plus ? w2 : w1);
      for (std::size_t i = 1; i < n; ++i)
        samples.emplace_back(delta_point(curve, root, 2.0 * kPi * static_cast<double>(i) / static_cast<double>(n)));
      detail::ArcScanner scanner(f, counter);
      if (scanner.scan(samples)) {
        verdict.status = CoveringStatus::MultiplePreimage;
        verdict.witness = std::move(scanner.witness);
        return verdict;
      }
    }
  }
  return verdict;
}

inline CoveringVerdict check_covering(CurveFamily family, const RationalMap& f, DiskPoint z1, DiskPoint z2,
                                      CoveringResolution res = {}) {
  return family == CurveFamily::Gamma ? check_gamma_covering(f, z1, z2, res) : check_delta_covering(f, z1, z2, res);
}

}  // namespace twopoint
