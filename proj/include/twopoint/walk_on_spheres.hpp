#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <random>
#include <span>
#include <vector>

#include "twopoint/core.hpp"
#include "twopoint/disk_geometry.hpp"

namespace twopoint {

/// Monte-Carlo controls. Walks are grouped into fixed chunks; chunk k draws from
/// an engine seeded with (seed, k), so results do not depend on scheduling.
struct WalkBudget {
  std::uint64_t seed = 0x5eedULL;
  std::size_t walks = 200000;
  double tolerance = std::numeric_limits<double>::infinity();  // max accepted standard error
  double epsilon = 1e-6;                                       // absorbing shell width
  std::size_t max_steps = 100000;
};

struct MonteCarloEstimate {
  double value = 0.0;
  double std_error = 0.0;
  std::size_t walks = 0;
};

namespace detail {

inline constexpr std::size_t kWalkChunk = 4096;

struct RunningStats {
  double n = 0.0, mean = 0.0, m2 = 0.0;

  void add(double x) {
    n += 1.0;
    const double d = x - mean;
    mean += d / n;
    m2 += d * (x - mean);
  }
  static RunningStats merge(const RunningStats& a, const RunningStats& b) {
    if (a.n == 0.0) return b;
    if (b.n == 0.0) return a;
    RunningStats r;
    r.n = a.n + b.n;
    const double d = b.mean - a.mean;
    r.mean = a.mean + d * b.n / r.n;
    r.m2 = a.m2 + b.m2 + d * d * a.n * b.n / r.n;
    return r;
  }
};

inline RunningStats pairwise_merge(std::span<const RunningStats> s) {
  if (s.empty()) return {};
  if (s.size() == 1) return s[0];
  const std::size_t h = s.size() / 2;
  return RunningStats::merge(pairwise_merge(s.first(h)), pairwise_merge(s.subspan(h)));
}

}  // namespace detail

namespace detail {

/// Core loop: `distance` gives a ball contained in the domain, `exit_value`
/// evaluates the boundary data at the final position.
template <class Distance, class ExitValue>
MonteCarloEstimate walk_core(Complex start, Distance&& distance, ExitValue&& exit_value, const WalkBudget& budget) {
  if (budget.walks == 0) throw Error(ErrorKind::InvalidInput, "walk budget must be positive");
  const std::size_t chunks = (budget.walks + kWalkChunk - 1) / kWalkChunk;
  std::vector<RunningStats> stats(chunks);
  for (std::size_t c = 0; c < chunks; ++c) {
    std::seed_seq seq{static_cast<std::uint32_t>(budget.seed), static_cast<std::uint32_t>(budget.seed >> 32),
                      static_cast<std::uint32_t>(c), static_cast<std::uint32_t>(c >> 32)};
    std::mt19937_64 rng(seq);
    std::uniform_real_distribution<double> angle(0.0, 2.0 * kPi);
    const std::size_t count = std::min(kWalkChunk, budget.walks - c * kWalkChunk);
    for (std::size_t w = 0; w < count; ++w) {
      Complex x = start;
      for (std::size_t step = 0; step < budget.max_steps; ++step) {
        const double r = distance(x);
        if (r < budget.epsilon) break;
        x += std::polar(r, angle(rng));
      }
      stats[c].add(exit_value(x));
    }
  }
  const RunningStats total = pairwise_merge(stats);
  MonteCarloEstimate est;
  est.value = total.mean;
  est.walks = budget.walks;
  est.std_error = total.n > 1.0 ? std::sqrt(total.m2 / (total.n - 1.0) / total.n) : 0.0;
  return est;
}

}  // namespace detail

/// Estimates u(start) for the harmonic u with boundary data `boundary_value`.
/// Each step jumps to a uniform point on the largest circle known to lie in the
/// domain; walks stop inside the ε-shell. Green level subdomains are walked in
/// the canonical disk coordinate of their base (exit distributions are conformally
/// invariant), where the level set is the hyperbolic bisector of 0 and F(z2) and
/// distances are exact; exit points are mapped back before evaluating the data.
template <class BoundaryValue>
MonteCarloEstimate walk_on_spheres(const DomainSpec& domain, Complex start, BoundaryValue&& boundary_value,
                                   const WalkBudget& budget) {
  if (domain.kind != DomainSpec::Kind::GreenLevelSubdomain)
    return detail::walk_core(
        start, [&domain](Complex x) { return domain.boundary_distance(x); }, boundary_value, budget);
  const CanonicalMap F(*domain.base, domain.z1);
  const Complex a = F.value(domain.z2);
  return detail::walk_core(
      F.value(start),
      [a](Complex xi) { return std::min(1.0 - std::abs(xi), detail::bisector_distance(xi, a)); },
      [&F, &boundary_value](Complex xi) { return boundary_value(F.inverse(xi)); }, budget);
}

inline void require_interior(const DomainSpec& domain, Complex z) {
  if (!is_finite(z) || !domain.contains(z)) throw Error(ErrorKind::InvalidInput, "point is not interior to the domain");
}

/// g(z, z0) = -log|z - z0| + h(z), h harmonic with boundary values log|ζ - z0|.
inline MonteCarloEstimate green_numeric(const DomainSpec& domain, Complex z, Complex z0, const WalkBudget& budget) {
  require_interior(domain, z);
  require_interior(domain, z0);
  if (std::abs(z - z0) == 0.0) throw Error(ErrorKind::CoincidentPoints, "Green function at its pole");
  MonteCarloEstimate h =
      walk_on_spheres(domain, z, [z0](Complex x) { return std::log(std::abs(x - z0)); }, budget);
  if (h.std_error > budget.tolerance)
    throw Error(ErrorKind::BudgetExhausted, "Green function standard error above tolerance");
  h.value -= std::log(std::abs(z - z0));
  return h;
}

/// r(D, z) = exp(Robin constant). With the singularity split off, the regular
/// part h_z is harmonic at z itself, so log r = h_z(z) is estimated directly.
/// The standard error is reported for r (delta method).
inline MonteCarloEstimate inner_radius_numeric(const DomainSpec& domain, Complex z, const WalkBudget& budget) {
  require_interior(domain, z);
  MonteCarloEstimate h = walk_on_spheres(domain, z, [z](Complex x) { return std::log(std::abs(x - z)); }, budget);
  const double r = std::exp(h.value);
  MonteCarloEstimate out{r, r * h.std_error, h.walks};
  if (out.std_error > budget.tolerance)
    throw Error(ErrorKind::BudgetExhausted, "inner radius standard error above tolerance");
  return out;
}

/// log r(D, z) with the standard error of the log.
inline MonteCarloEstimate log_inner_radius_numeric(const DomainSpec& domain, Complex z, const WalkBudget& budget) {
  require_interior(domain, z);
  MonteCarloEstimate h = walk_on_spheres(domain, z, [z](Complex x) { return std::log(std::abs(x - z)); }, budget);
  if (h.std_error > budget.tolerance)
    throw Error(ErrorKind::BudgetExhausted, "log inner radius standard error above tolerance");
  return h;
}

}  // namespace twopoint
