#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "twopoint/core.hpp"
#include "twopoint/disk_geometry.hpp"
#include "twopoint/fd_solver.hpp"
#include "twopoint/inequalities.hpp"
#include "twopoint/rational_map.hpp"
#include "twopoint/walk_on_spheres.hpp"

namespace twopoint {

struct Plate {
  Complex center{};
  double radius = 0.0;
  double potential = 0.0;
};

/// Plane condenser: zero potential on the domain boundary, plate k held at its potential.
struct Condenser {
  DomainSpec domain;
  std::vector<Plate> plates;
};

enum class CapacityMethod { FiniteDifference, ClosedForm };

inline std::string_view to_string(CapacityMethod m) {
  return m == CapacityMethod::FiniteDifference ? "finite_difference" : "closed_form";
}

/// Grid controls. `cells` counts cells across the longer side of the
/// computational box. With `graded`, spacing shrinks geometrically toward each
/// plate center down to radius / cells_per_radius.
struct GridSpec {
  std::size_t cells = 1024;
  bool richardson = false;
  bool graded = false;
  double cells_per_radius = 8.0;
  double growth = 1.1;
  double box_factor = 8.0;  // half-plane truncation: box side / configuration diameter
};

struct GridLevel {
  std::size_t nx = 0, ny = 0;  // node counts
  double min_spacing = 0.0;
  double energy = 0.0;
  std::size_t iterations = 0;
};

struct CapacityEstimate {
  double value = 0.0;
  CapacityMethod method = CapacityMethod::FiniteDifference;
  std::string discretization;
  fd::Box box;
  std::vector<GridLevel> levels;  // fine first; two entries with Richardson extrapolation
  std::optional<double> error_bar;
};

namespace detail {

inline void validate_condenser(const Condenser& c) {
  if (!c.domain.is_closed_form())
    throw Error(ErrorKind::UnsupportedDomain, "finite differences need a closed-form domain");
  for (const Plate& p : c.plates) {
    if (!is_finite(p.center) || !std::isfinite(p.radius) || !(p.radius > 0.0) || !std::isfinite(p.potential))
      throw Error(ErrorKind::InvalidInput, "plate needs finite center, positive radius and finite potential");
    if (!c.domain.contains(p.center) || c.domain.boundary_distance(p.center) <= p.radius)
      throw Error(ErrorKind::PlateOutsideDomain, "plate is not strictly inside the domain");
  }
  for (std::size_t i = 0; i < c.plates.size(); ++i)
    for (std::size_t j = i + 1; j < c.plates.size(); ++j)
      if (std::abs(c.plates[i].center - c.plates[j].center) <= c.plates[i].radius + c.plates[j].radius)
        throw Error(ErrorKind::PlateOverlap, "plates intersect");
}

/// Computational box. Bounded domains use their bounding box; half-planes are
/// truncated to a square of side box_factor times the diameter of the plates
/// together with their nearest boundary points.
inline fd::Box condenser_box(const Condenser& c, double box_factor) {
  const DomainSpec& d = c.domain;
  switch (d.kind) {
    case DomainSpec::Kind::UnitDisk: return {-1.0, 1.0, -1.0, 1.0};
    case DomainSpec::Kind::Disk:
      return {d.center.real() - d.radius, d.center.real() + d.radius, d.center.imag() - d.radius,
              d.center.imag() + d.radius};
    case DomainSpec::Kind::HalfDisk:
      return d.side == HalfDiskSide::Left ? fd::Box{-1.0, 0.0, -1.0, 1.0} : fd::Box{0.0, 1.0, -1.0, 1.0};
    case DomainSpec::Kind::HalfPlane: {
      std::vector<Complex> pts;
      for (const Plate& p : c.plates) {
        for (Complex u : {Complex(1, 0), Complex(-1, 0), Complex(0, 1), Complex(0, -1)}) pts.push_back(p.center + p.radius * u);
        const double excess = (p.center * std::conj(d.normal)).real() - d.offset;  // < 0 inside
        pts.push_back(p.center - excess * d.normal);
      }
      if (pts.empty()) {
        const Complex foot = d.offset * d.normal;
        return {foot.real() - 1.0, foot.real() + 1.0, foot.imag() - 1.0, foot.imag() + 1.0};
      }
      double diam = 0.0;
      double x0 = pts[0].real(), x1 = x0, y0 = pts[0].imag(), y1 = y0;
      for (Complex a : pts) {
        x0 = std::min(x0, a.real());
        x1 = std::max(x1, a.real());
        y0 = std::min(y0, a.imag());
        y1 = std::max(y1, a.imag());
        for (Complex b : pts) diam = std::max(diam, std::abs(a - b));
      }
      const Complex mid(0.5 * (x0 + x1), 0.5 * (y0 + y1));
      const double half = 0.5 * box_factor * diam;
      return {mid.real() - half, mid.real() + half, mid.imag() - half, mid.imag() + half};
    }
    case DomainSpec::Kind::GreenLevelSubdomain: break;
  }
  throw Error(ErrorKind::UnsupportedDomain, "no computational box for this domain");
}

/// Largest cell adjacent to coordinate v.
inline double local_spacing(const std::vector<double>& axis, double v) {
  const auto it = std::lower_bound(axis.begin(), axis.end(), v);
  const std::size_t i = static_cast<std::size_t>(std::clamp<std::ptrdiff_t>(it - axis.begin(), 1, static_cast<std::ptrdiff_t>(axis.size()) - 1));
  double h = axis[i] - axis[i - 1];
  if (i + 1 < axis.size()) h = std::max(h, axis[i + 1] - axis[i]);
  return h;
}

inline std::size_t coarsening_multiple(std::size_t cells) {
  std::size_t m = 1;
  while (m * 2 * 8 <= cells) m *= 2;
  return m;
}

/// Plate center and characteristic radius used for grading and resolution checks.
struct FeatureSite {
  Complex center;
  double radius;
};

struct GridAxes {
  std::vector<double> x, y;
};

inline GridAxes make_grid(const fd::Box& box, std::span<const FeatureSite> sites, std::size_t cells, bool graded,
                          double cells_per_radius, double growth) {
  if (cells < 8) throw Error(ErrorKind::GridTooCoarse, "grid needs at least 8 cells");
  const double h = std::max(box.width(), box.height()) / static_cast<double>(cells);
  const std::size_t short_cells = static_cast<std::size_t>(std::round(std::min(box.width(), box.height()) / h));
  std::vector<fd::AxisRefinement> rx, ry;
  if (graded) {
    for (const FeatureSite& s : sites) {
      const double fine = s.radius / cells_per_radius;
      if (fine < h) {
        rx.push_back({s.center.real(), fine});
        ry.push_back({s.center.imag(), fine});
      }
    }
  }
  const std::size_t multiple = graded ? 64 : coarsening_multiple(std::max<std::size_t>(short_cells, 8));
  GridAxes g{fd::make_axis(box.x0, box.x1, h, rx, growth, multiple), fd::make_axis(box.y0, box.y1, h, ry, growth, multiple)};
  for (const FeatureSite& s : sites) {
    const double local = std::max(local_spacing(g.x, s.center.real()), local_spacing(g.y, s.center.imag()));
    if (s.radius < 3.0 * local) throw Error(ErrorKind::GridTooCoarse, "plate radius below three grid cells");
  }
  return g;
}

inline double min_spacing(const std::vector<double>& a) {
  double h = std::numeric_limits<double>::infinity();
  for (std::size_t i = 1; i < a.size(); ++i) h = std::min(h, a[i] - a[i - 1]);
  return h;
}

/// One or two grid levels plus Richardson extrapolation (second order assumed).
template <class Solve>
CapacityEstimate estimate_with_levels(const GridSpec& grid, Solve&& solve_at) {
  CapacityEstimate est;
  est.levels.push_back(solve_at(grid.cells, grid.cells_per_radius));
  est.value = est.levels[0].energy;
  if (grid.richardson) {
    est.levels.push_back(solve_at(grid.cells / 2, grid.cells_per_radius / 2.0));
    const double diff = est.levels[0].energy - est.levels[1].energy;
    est.value = est.levels[0].energy + diff / 3.0;
    est.error_bar = std::abs(diff) / 3.0;
  }
  return est;
}

inline std::string describe(const CapacityEstimate& e, const GridSpec& g) {
  std::string s = g.graded ? "fd graded" : "fd uniform";
  for (const GridLevel& l : e.levels) s += " " + std::to_string(l.nx - 1) + "x" + std::to_string(l.ny - 1);
  if (g.richardson) s += " richardson";
  char buf[160];
  std::snprintf(buf, sizeof buf, " box[%.6g,%.6g]x[%.6g,%.6g]", e.box.x0, e.box.x1, e.box.y0, e.box.y1);
  return s + buf;
}

inline fd::Problem condenser_problem(const Condenser& c, const fd::Box& box) {
  fd::Problem pb;
  pb.box = box;
  const DomainSpec dom = c.domain;
  pb.domain_inside = [dom, box](Complex z) {
    return z.real() > box.x0 && z.real() < box.x1 && z.imag() > box.y0 && z.imag() < box.y1 && dom.contains(z);
  };
  for (const Plate& p : c.plates) {
    const Complex ctr = p.center;
    const double r2 = p.radius * p.radius;
    pb.plates.push_back({[ctr, r2](Complex z) { return std::norm(z - ctr) <= r2; }, p.potential, p.center, p.radius});
  }
  return pb;
}

}  // namespace detail

/// Closed form for a single plate concentric with a disk domain: 2πδ²/log(R/r).
inline std::optional<CapacityEstimate> closed_form_capacity(const Condenser& c) {
  const bool disk = c.domain.kind == DomainSpec::Kind::UnitDisk || c.domain.kind == DomainSpec::Kind::Disk;
  if (!disk || c.plates.size() != 1) return std::nullopt;
  const Complex center = c.domain.kind == DomainSpec::Kind::Disk ? c.domain.center : Complex{};
  const double R = c.domain.kind == DomainSpec::Kind::Disk ? c.domain.radius : 1.0;
  const Plate& p = c.plates[0];
  if (std::abs(p.center - center) != 0.0 || !(p.radius < R)) return std::nullopt;
  CapacityEstimate e;
  e.method = CapacityMethod::ClosedForm;
  e.value = 2.0 * kPi * p.potential * p.potential / std::log(R / p.radius);
  e.discretization = "annulus 2*pi*delta^2/log(R/r)";
  return e;
}

struct CondenserField {
  CapacityEstimate estimate;
  fd::Solution field;  // finest grid
};

/// Dirichlet energy of the condenser potential by finite differences.
inline CondenserField solve_condenser_field(const Condenser& c, const GridSpec& grid = {}) {
  detail::validate_condenser(c);
  const fd::Box box = detail::condenser_box(c, grid.box_factor);
  CondenserField out;
  if (c.plates.empty()) {
    out.estimate.discretization = "no plates";
    out.estimate.box = box;
    return out;
  }
  const fd::Problem pb = detail::condenser_problem(c, box);
  std::vector<detail::FeatureSite> sites;
  for (const Plate& p : c.plates) sites.push_back({p.center, p.radius});
  bool first = true;
  out.estimate = detail::estimate_with_levels(grid, [&](std::size_t cells, double cpr) {
    auto axes = detail::make_grid(box, sites, cells, grid.graded, cpr, grid.growth);
    GridLevel level{axes.x.size(), axes.y.size(), std::min(detail::min_spacing(axes.x), detail::min_spacing(axes.y)), 0.0, 0};
    fd::Solution s = fd::solve(pb, std::move(axes.x), std::move(axes.y));
    level.energy = s.energy;
    level.iterations = s.iterations;
    if (first) out.field = std::move(s);
    first = false;
    return level;
  });
  out.estimate.box = box;
  out.estimate.discretization = detail::describe(out.estimate, grid);
  return out;
}

inline CapacityEstimate solve_condenser(const Condenser& c, const GridSpec& grid = {}) {
  return solve_condenser_field(c, grid).estimate;
}

/// Two-term small-plate asymptotics: -2πn/log r - 2π E (1/log r)², with E the
/// reduced energy of the plate centers. Assumes unit potentials |δ_k| = 1, as in
/// the four-plate construction (n = 4 gives -8π/log r).
inline double asymptotic_cap(std::span<const Complex> points, std::span<const double> potentials,
                             const RationalMap& f, double r) {
  if (!(r > 0.0 && r < 1.0)) throw Error(ErrorKind::ParameterOutOfRange, "plate radius must lie in (0, 1)");
  for (std::size_t k = 0; k < points.size(); ++k) {
    if (r >= 0.25 * (1.0 - std::abs(points[k])))
      throw Error(ErrorKind::RadiusTooLarge, "plate radius too large for the boundary distance");
    for (std::size_t l = k + 1; l < points.size(); ++l)
      if (r >= 0.25 * std::abs(points[k] - points[l]))
        throw Error(ErrorKind::RadiusTooLarge, "plate radius exceeds a quarter of the point separation");
  }
  const double E = reduced_energy(points, potentials, f);
  const double L = std::log(r);
  return -2.0 * kPi * static_cast<double>(points.size()) / L - 2.0 * kPi * E / (L * L);
}

/// Green function: closed form when available, walk-on-spheres otherwise.
inline double green(const DomainSpec& d, Complex z, Complex z0, const WalkBudget& budget = {}) {
  if (d.is_closed_form()) return *closed_form_invariants(d, z, z0).green;
  return green_numeric(d, z, z0, budget).value;
}

/// Two-plate asymptotics with plates of radius 2r(1-ρ) at Z1 and 2r(1+ρ) at Z2
/// carrying opposite unit potentials:
/// -4π/log r - 2π{log[r(H,Z1)/(2(1-ρ))] + log[r(H,Z2)/(2(1+ρ))] - 2g_H(Z1,Z2)}(1/log r)².
inline double asymptotic_cap_pair(double rho, double r, const DomainSpec& h, Complex Z1, Complex Z2,
                                  const WalkBudget& budget = {}) {
  if (!(rho > 0.0 && rho < 0.5)) throw Error(ErrorKind::ParameterOutOfRange, "ρ must lie in (0, 1/2)");
  if (!(r > 0.0 && r < 1.0)) throw Error(ErrorKind::ParameterOutOfRange, "r must lie in (0, 1)");
  require_interior(h, Z1);
  require_interior(h, Z2);
  if (std::abs(Z1 - Z2) == 0.0) throw Error(ErrorKind::CoincidentPoints, "Z1 = Z2");
  const double bracket = std::log(inner_radius(h, Z1, budget) / (2.0 * (1.0 - rho))) +
                         std::log(inner_radius(h, Z2, budget) / (2.0 * (1.0 + rho))) - 2.0 * green(h, Z1, Z2, budget);
  const double L = std::log(r);
  return -4.0 * kPi / L - 2.0 * kPi * bracket / (L * L);
}

struct GreenIdentity {
  double lhs = 0.0;  // log[r(H,Z1) r(H,Z2)] - 2 g_H(Z1,Z2)
  double rhs = 0.0;  // log[r(B1,Z1) r(B2,Z2)]
  double residual = 0.0;
  double rhs_std_error = 0.0;  // zero in closed form
};

/// Numeric pipeline: the level subdomains B1, B2 are only known implicitly, so
/// their inner radii come from walk-on-spheres. The left side uses closed forms
/// on closed-form bases. Both subdomain estimates share the budget.
inline GreenIdentity green_identity_residual(const DomainSpec& base, Complex Z1, Complex Z2,
                                             const WalkBudget& budget = {}) {
  require_interior(base, Z1);
  require_interior(base, Z2);
  if (std::abs(Z1 - Z2) == 0.0) throw Error(ErrorKind::CoincidentPoints, "Z1 = Z2");
  GreenIdentity out;
  out.lhs = std::log(inner_radius(base, Z1, budget) * inner_radius(base, Z2, budget)) - 2.0 * green(base, Z1, Z2, budget);
  WalkBudget second = budget;
  second.seed = budget.seed ^ 0x9e3779b97f4a7c15ULL;
  const auto b1 = log_inner_radius_numeric(DomainSpec::green_level(base, Z1, Z2, +1), Z1, budget);
  const auto b2 = log_inner_radius_numeric(DomainSpec::green_level(base, Z1, Z2, -1), Z2, second);
  out.rhs = b1.value + b2.value;
  out.rhs_std_error = std::hypot(b1.std_error, b2.std_error);
  out.residual = std::abs(out.lhs - out.rhs);
  return out;
}

/// Closed-form cross-check. The base is mapped onto U with Z1 -> 0; an automorphism
/// then sends the pair to (-λ, λ), where the level subdomains become the left and
/// right half-disks, whose inner radii are known. Conformal transport brings the
/// radii back to Z1, Z2.
inline GreenIdentity green_identity_closed_form(const DomainSpec& base, Complex Z1, Complex Z2) {
  if (!base.is_closed_form()) throw Error(ErrorKind::UnsupportedDomain, "closed form needs a closed-form base");
  require_interior(base, Z1);
  require_interior(base, Z2);
  if (std::abs(Z1 - Z2) == 0.0) throw Error(ErrorKind::CoincidentPoints, "Z1 = Z2");
  GreenIdentity out;
  const auto i1 = closed_form_invariants(base, Z1, Z2);
  const auto i2 = closed_form_invariants(base, Z2);
  out.lhs = std::log(i1.inner_radius * i2.inner_radius) - 2.0 * *i1.green;

  const CanonicalMap F(base, Z1);
  const auto [f1, d1] = F.jet(Z1);
  const auto [f2, d2] = F.jet(Z2);
  const NormalizedPair np = normalize_pair(f1, f2);
  const MobiusTransform back = np.phi.inverse();
  const double rl = closed_form_invariants(DomainSpec::half_disk(HalfDiskSide::Left), -np.lambda).inner_radius;
  const double rr = closed_form_invariants(DomainSpec::half_disk(HalfDiskSide::Right), np.lambda).inner_radius;
  out.rhs = std::log(rl / (std::abs(d1) * std::abs(back.derivative(f1)))) +
            std::log(rr / (std::abs(d2) * std::abs(back.derivative(f2))));
  out.residual = std::abs(out.lhs - out.rhs);
  return out;
}

/// p_k(w) = (-1)^k i w², mapping the quadrant D_k = {π(k-1)/2 < arg w < πk/2} onto Re ζ > 0.
inline Complex separating_transform(int k, Complex w) {
  if (k < 1 || k > 4) throw Error(ErrorKind::InvalidInput, "sector index must be 1..4");
  const double sign = k % 2 == 0 ? 1.0 : -1.0;
  return sign * Complex(0.0, 1.0) * w * w;
}

inline bool in_sector(int k, Complex w) {
  if (k < 1 || k > 4) throw Error(ErrorKind::InvalidInput, "sector index must be 1..4");
  if (std::abs(w) == 0.0) return false;
  double a = std::arg(w);
  if (a < 0.0) a += 2.0 * kPi;
  return a > 0.5 * kPi * (k - 1) && a < 0.5 * kPi * k;
}

/// Inverse of p_k on the closed right half-plane, landing in the closed quadrant.
inline Complex separating_inverse(int k, Complex zeta) {
  const double sign = k % 2 == 0 ? 1.0 : -1.0;
  const Complex w2 = zeta / (sign * Complex(0.0, 1.0));
  const double mid = kPi * (k - 1) + 0.5 * kPi;  // angle of w² at the sector bisector
  double a = std::arg(w2);
  while (a < mid - kPi) a += 2.0 * kPi;
  while (a > mid + kPi) a -= 2.0 * kPi;
  return std::polar(std::sqrt(std::abs(w2)), 0.5 * a);
}

namespace detail {

inline double distance_to_quadrant(int k, Complex c) {
  if (in_sector(k, c)) return 0.0;
  const double a0 = 0.5 * kPi * (k - 1), a1 = 0.5 * kPi * k;
  double d = std::abs(c);
  for (double a : {a0, a1}) {
    const Complex u = std::polar(1.0, a);
    const double t = (c * std::conj(u)).real();
    d = std::min(d, t > 0.0 ? std::abs(c - t * u) : std::abs(c));
  }
  return d;
}

/// max |w|² over the part of the computational box inside the domain
inline double sector_box_extent(const Condenser& c, const fd::Box& box) {
  switch (c.domain.kind) {
    case DomainSpec::Kind::UnitDisk:
    case DomainSpec::Kind::HalfDisk: return 1.0;
    case DomainSpec::Kind::Disk: return std::pow(std::abs(c.domain.center) + c.domain.radius, 2);
    default: break;
  }
  double m = 0.0;
  for (Complex z : {Complex(box.x0, box.y0), Complex(box.x0, box.y1), Complex(box.x1, box.y0), Complex(box.x1, box.y1)})
    m = std::max(m, std::norm(z));
  return m;
}

}  // namespace detail

struct SeparationCheck {
  double lhs = 0.0;                 // cap C
  double rhs = 0.0;                 // (1/2) Σ cap C_k
  std::array<double, 4> sector{};  // cap C_k
  CapacityEstimate whole;
  std::array<std::optional<CapacityEstimate>, 4> sectors;  // empty when the sector holds no plate
};

/// Separating transformation of a plane condenser. Sector k is unfolded by p_k
/// onto the right half-plane and reflected across the imaginary axis; plate j
/// contributes to sector k when it meets the closed quadrant. Plates may straddle
/// the real axis but not the imaginary axis, as in the four-plate configuration.
inline SeparationCheck separation_inequality_check(const Condenser& c, const GridSpec& grid = {}) {
  detail::validate_condenser(c);
  for (const Plate& p : c.plates)
    if (std::abs(p.center.real()) <= p.radius) throw Error(ErrorKind::PlateOnAxis, "plate meets the imaginary axis");
  SeparationCheck out;
  out.whole = solve_condenser(c, grid);
  out.lhs = out.whole.value;
  const fd::Box wbox = detail::condenser_box(c, grid.box_factor);
  const double m = detail::sector_box_extent(c, wbox);
  const fd::Box zbox{-m, m, -m, m};
  for (int k = 1; k <= 4; ++k) {
    auto unfold = [k](Complex z) { return separating_inverse(k, z.real() >= 0.0 ? z : -std::conj(z)); };
    fd::Problem pb;
    pb.box = zbox;
    const DomainSpec dom = c.domain;
    pb.domain_inside = [dom, wbox, unfold](Complex z) {
      const Complex w = unfold(z);
      return w.real() > wbox.x0 && w.real() < wbox.x1 && w.imag() > wbox.y0 && w.imag() < wbox.y1 && dom.contains(w);
    };
    std::vector<detail::FeatureSite> sites;
    for (const Plate& p : c.plates) {
      if (detail::distance_to_quadrant(k, p.center) > p.radius) continue;
      const Complex ctr = p.center;
      const double r2 = p.radius * p.radius;
      const Complex img = separating_transform(k, p.center);
      const double size = 2.0 * std::max(std::abs(p.center) - p.radius, 0.5 * std::abs(p.center)) * p.radius;
      pb.plates.push_back({[ctr, r2, unfold](Complex z) { return std::norm(unfold(z) - ctr) <= r2; }, p.potential, img, size});
      sites.push_back({img, size});
      sites.push_back({-std::conj(img), size});
    }
    if (pb.plates.empty()) continue;
    CapacityEstimate est = detail::estimate_with_levels(grid, [&](std::size_t cells, double cpr) {
      auto axes = detail::make_grid(zbox, sites, cells, grid.graded, cpr, grid.growth);
      GridLevel level{axes.x.size(), axes.y.size(), std::min(detail::min_spacing(axes.x), detail::min_spacing(axes.y)), 0.0, 0};
      const fd::Solution s = fd::solve(pb, std::move(axes.x), std::move(axes.y));
      level.energy = s.energy;
      level.iterations = s.iterations;
      return level;
    });
    est.box = zbox;
    est.discretization = detail::describe(est, grid);
    out.sector[static_cast<std::size_t>(k - 1)] = est.value;
    out.sectors[static_cast<std::size_t>(k - 1)] = std::move(est);
  }
  out.rhs = 0.5 * (out.sector[0] + out.sector[1] + out.sector[2] + out.sector[3]);
  return out;
}

}  // namespace twopoint
