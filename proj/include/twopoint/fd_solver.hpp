#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <fstream>
#include <functional>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "twopoint/core.hpp"

/// Five-point finite differences for Dirichlet problems with curved boundaries
/// on tensor-product grids.
///
/// The discrete problem minimizes the edge energy
///   E(u) = Σ_edges w_e (u_i - u_j)²,   w_e = (dual edge length) / (edge length),
/// which approximates ∬|∇u|². An edge from a free node to a fixed node is cut at
/// the boundary crossing (fraction θ of its length, found by bisection on the
/// region predicates) and contributes (w_e/θ)(u_i - b)², with b the boundary
/// value there. The resulting system is symmetric positive definite; it is solved
/// by conjugate gradients preconditioned with a geometric multigrid V-cycle
/// (red-black Gauss-Seidel smoothing, rediscretized coarse operators).
namespace twopoint::fd {

struct Box {
  double x0 = -1.0, x1 = 1.0, y0 = -1.0, y1 = 1.0;
  double width() const { return x1 - x0; }
  double height() const { return y1 - y0; }
};

struct PlateShape {
  std::function<bool(Complex)> inside;
  double potential = 0.0;
  Complex center{};
  double radius = 0.0;  // characteristic size, used for grading and resolution checks
};

struct Problem {
  Box box;
  std::function<bool(Complex)> domain_inside;  // open domain; box-edge nodes are always fixed at 0
  std::vector<PlateShape> plates;
};

struct AxisRefinement {
  double center = 0.0;
  double spacing = 0.0;
};

/// Node coordinates on [lo, hi]. Cell size is h_base away from refinement
/// centers and grows geometrically (ratio `growth`) from `spacing` at a center.
/// The cell count is rounded up to a multiple of `multiple`.
inline std::vector<double> make_axis(double lo, double hi, double h_base, std::span<const AxisRefinement> refine,
                                     double growth, std::size_t multiple) {
  auto spacing = [&](double x) {
    double h = h_base;
    for (const auto& r : refine) h = std::min(h, r.spacing + (growth - 1.0) * std::abs(x - r.center));
    return h;
  };
  std::vector<double> raw{lo};
  if (refine.empty()) {
    const auto cells = static_cast<std::size_t>(std::max(1.0, std::round((hi - lo) / h_base)));
    for (std::size_t i = 1; i <= cells; ++i) raw.push_back(lo + (hi - lo) * static_cast<double>(i) / cells);
  } else {
    while (raw.back() < hi) raw.push_back(raw.back() + spacing(raw.back()));
  }
  // fractional cell count with the last node clipped to hi
  const std::size_t k = raw.size() - 1;
  const double frac = static_cast<double>(k - 1) + (hi - raw[k - 1]) / (raw[k] - raw[k - 1]);
  raw.back() = hi;
  const std::size_t m = std::max<std::size_t>(multiple, 1);
  const auto cells = static_cast<std::size_t>(std::ceil(frac / static_cast<double>(m) - 1e-9)) * m;
  std::vector<double> out(cells + 1);
  for (std::size_t j = 0; j <= cells; ++j) {
    const double s = frac * static_cast<double>(j) / static_cast<double>(cells);
    const auto i = std::min(static_cast<std::size_t>(s), k - 1);
    const double a = s - static_cast<double>(i);
    const double right = i + 1 == k ? hi : raw[i + 1];
    out[j] = raw[i] + a * (right - raw[i]);
  }
  out.front() = lo;
  out.back() = hi;
  return out;
}

inline constexpr int kFree = -1;
inline constexpr int kExterior = 0;  // owners >= 1 are plates (index + 1)

/// Discretized operator on one tensor grid.
struct Level {
  std::vector<double> x, y;
  std::size_t nx = 0, ny = 0;  // node counts
  std::vector<int> owner;
  std::vector<double> diag, east, north;  // free-free couplings only
  std::vector<double> rhs;                // boundary contributions (finest level)

  struct CutEdge {
    std::size_t node;
    double weight;
    double value;
  };
  std::vector<CutEdge> cuts;
  double fixed_energy = 0.0;  // fixed-fixed edges with differing values

  std::size_t index(std::size_t i, std::size_t j) const { return j * nx + i; }
  bool is_free(std::size_t k) const { return owner[k] == kFree; }
};

inline int classify(const Problem& pb, Complex p) {
  if (!pb.domain_inside(p)) return kExterior;
  for (std::size_t k = 0; k < pb.plates.size(); ++k)
    if (pb.plates[k].inside(p)) return static_cast<int>(k) + 1;
  return kFree;
}

inline double owner_value(const Problem& pb, int owner) {
  return owner >= 1 ? pb.plates[static_cast<std::size_t>(owner - 1)].potential : 0.0;
}

/// Fraction along a -> b (a free) where the classification first changes.
inline std::pair<double, int> crossing(const Problem& pb, Complex a, Complex b, int owner_b) {
  double lo = 0.0, hi = 1.0;
  int hit = owner_b;
  for (int it = 0; it < 52; ++it) {
    const double mid = 0.5 * (lo + hi);
    const int o = classify(pb, a + mid * (b - a));
    if (o == kFree) {
      lo = mid;
    } else {
      hi = mid;
      hit = o;
    }
  }
  return {hi, hit};
}

inline Level build_level(const Problem& pb, std::vector<double> xs, std::vector<double> ys, bool with_rhs) {
  Level L;
  L.x = std::move(xs);
  L.y = std::move(ys);
  L.nx = L.x.size();
  L.ny = L.y.size();
  const std::size_t n = L.nx * L.ny;
  L.owner.assign(n, kFree);
  for (std::size_t j = 0; j < L.ny; ++j)
    for (std::size_t i = 0; i < L.nx; ++i) {
      const bool edge = i == 0 || j == 0 || i + 1 == L.nx || j + 1 == L.ny;
      L.owner[L.index(i, j)] = edge ? kExterior : classify(pb, {L.x[i], L.y[j]});
    }
  L.diag.assign(n, 0.0);
  L.east.assign(n, 0.0);
  L.north.assign(n, 0.0);
  if (with_rhs) L.rhs.assign(n, 0.0);

  auto dual = [](const std::vector<double>& c, std::size_t i) {
    const double left = i > 0 ? c[i] - c[i - 1] : 0.0;
    const double right = i + 1 < c.size() ? c[i + 1] - c[i] : 0.0;
    return 0.5 * (left + right);
  };
  constexpr double kMinFraction = 1e-3;
  auto couple = [&](std::size_t a, std::size_t b, double w, double& offdiag) {
    const int oa = L.owner[a], ob = L.owner[b];
    if (oa == kFree && ob == kFree) {
      L.diag[a] += w;
      L.diag[b] += w;
      offdiag = w;
      return;
    }
    if (oa != kFree && ob != kFree) {
      if (with_rhs) {
        const double d = owner_value(pb, oa) - owner_value(pb, ob);
        L.fixed_energy += w * d * d;
      }
      return;
    }
    const std::size_t f = oa == kFree ? a : b;
    const std::size_t g = oa == kFree ? b : a;
    const Complex pf{L.x[f % L.nx], L.y[f / L.nx]};
    const Complex pg{L.x[g % L.nx], L.y[g / L.nx]};
    const auto [theta, hit] = crossing(pb, pf, pg, L.owner[g]);
    const double weight = w / std::max(theta, kMinFraction);
    L.diag[f] += weight;
    if (with_rhs) {
      const double value = owner_value(pb, hit);
      L.rhs[f] += weight * value;
      L.cuts.push_back({f, weight, value});
    }
  };
  for (std::size_t j = 0; j < L.ny; ++j)
    for (std::size_t i = 0; i < L.nx; ++i) {
      const std::size_t k = L.index(i, j);
      if (i + 1 < L.nx) couple(k, k + 1, dual(L.y, j) / (L.x[i + 1] - L.x[i]), L.east[k]);
      if (j + 1 < L.ny) couple(k, k + L.nx, dual(L.x, i) / (L.y[j + 1] - L.y[j]), L.north[k]);
    }
  return L;
}

/// y = A x on free nodes (fixed entries of y are zero).
inline void apply(const Level& L, const std::vector<double>& x, std::vector<double>& y) {
  const std::size_t nx = L.nx;
  for (std::size_t k = 0; k < x.size(); ++k) {
    if (!L.is_free(k)) {
      y[k] = 0.0;
      continue;
    }
    double s = L.diag[k] * x[k];
    s -= L.east[k] * x[k + 1] + L.east[k - 1] * x[k - 1];
    s -= L.north[k] * x[k + nx] + L.north[k - nx] * x[k - nx];
    y[k] = s;
  }
}

inline void gauss_seidel_color(const Level& L, std::vector<double>& x, const std::vector<double>& b, int color) {
  const std::size_t nx = L.nx;
  for (std::size_t j = 1; j + 1 < L.ny; ++j) {
    const std::size_t start = 1 + ((j + 1 + static_cast<std::size_t>(color)) & 1U);
    for (std::size_t i = start; i + 1 < nx; i += 2) {
      const std::size_t k = j * nx + i;
      if (!L.is_free(k)) continue;
      const double s = b[k] + L.east[k] * x[k + 1] + L.east[k - 1] * x[k - 1] + L.north[k] * x[k + nx] +
                       L.north[k - nx] * x[k - nx];
      x[k] = s / L.diag[k];
    }
  }
}

/// 1-D interpolation stencil from a coarse axis (every other node) to the fine axis.
struct AxisTransfer {
  std::vector<std::size_t> lo;
  std::vector<double> wlo;  // weight of coarse node lo; lo + 1 gets 1 - wlo

  explicit AxisTransfer(const std::vector<double>& fine) {
    lo.resize(fine.size());
    wlo.resize(fine.size());
    for (std::size_t i = 0; i < fine.size(); ++i) {
      if (i % 2 == 0) {
        lo[i] = i / 2;
        wlo[i] = 1.0;
      } else {
        lo[i] = (i - 1) / 2;
        wlo[i] = (fine[i + 1] - fine[i]) / (fine[i + 1] - fine[i - 1]);
      }
    }
  }
};

class Multigrid {
 public:
  Multigrid(const Problem& pb, std::vector<double> xs, std::vector<double> ys) {
    levels_.push_back(build_level(pb, std::move(xs), std::move(ys), true));
    while (true) {
      const Level& f = levels_.back();
      const std::size_t cx = f.nx - 1, cy = f.ny - 1;
      if (cx % 2 != 0 || cy % 2 != 0 || cx < 8 || cy < 8 || count_free(f) < 64) break;
      std::vector<double> xc, yc;
      for (std::size_t i = 0; i < f.nx; i += 2) xc.push_back(f.x[i]);
      for (std::size_t j = 0; j < f.ny; j += 2) yc.push_back(f.y[j]);
      levels_.push_back(build_level(pb, std::move(xc), std::move(yc), false));
    }
    for (std::size_t l = 0; l + 1 < levels_.size(); ++l)
      transfers_.push_back({AxisTransfer(levels_[l].x), AxisTransfer(levels_[l].y)});
    factor_coarsest();
    work_.resize(levels_.size());
    for (std::size_t l = 0; l < levels_.size(); ++l) {
      const std::size_t n = levels_[l].nx * levels_[l].ny;
      work_[l].x.assign(n, 0.0);
      work_[l].b.assign(n, 0.0);
      work_[l].r.assign(n, 0.0);
    }
  }

  const Level& finest() const { return levels_.front(); }
  std::size_t depth() const { return levels_.size(); }

  /// z = M^{-1} r, one symmetric V-cycle.
  void precondition(const std::vector<double>& r, std::vector<double>& z) {
    work_[0].b = r;
    vcycle(0);
    z = work_[0].x;
  }

 private:
  struct Work {
    std::vector<double> x, b, r;
  };
  struct Transfer {
    AxisTransfer x, y;
  };

  static std::size_t count_free(const Level& L) {
    return static_cast<std::size_t>(std::count(L.owner.begin(), L.owner.end(), kFree));
  }

  void factor_coarsest() {
    const Level& L = levels_.back();
    coarse_index_.assign(L.nx * L.ny, -1);
    int n = 0;
    for (std::size_t k = 0; k < L.owner.size(); ++k)
      if (L.is_free(k)) coarse_index_[k] = n++;
    if (n > kMaxDirect) return;  // smoothed instead, see vcycle
    Eigen::MatrixXd A = Eigen::MatrixXd::Zero(n, n);
    for (std::size_t k = 0; k < L.owner.size(); ++k) {
      if (!L.is_free(k)) continue;
      const int a = coarse_index_[k];
      A(a, a) = L.diag[k];
      auto link = [&](std::size_t other, double w) {
        if (w != 0.0) {
          A(a, coarse_index_[other]) -= w;
          A(coarse_index_[other], a) -= w;
        }
      };
      link(k + 1, L.east[k]);
      link(k + L.nx, L.north[k]);
    }
    coarse_solver_ = std::make_unique<Eigen::LDLT<Eigen::MatrixXd>>(A);
  }

  void vcycle(std::size_t l) {
    const Level& L = levels_[l];
    Work& w = work_[l];
    if (l + 1 == levels_.size() && !coarse_solver_) {
      std::fill(w.x.begin(), w.x.end(), 0.0);
      for (int s = 0; s < kCoarseSweeps; ++s) {
        gauss_seidel_color(L, w.x, w.b, 0);
        gauss_seidel_color(L, w.x, w.b, 1);
      }
      for (int s = 0; s < kCoarseSweeps; ++s) {
        gauss_seidel_color(L, w.x, w.b, 1);
        gauss_seidel_color(L, w.x, w.b, 0);
      }
      return;
    }
    if (l + 1 == levels_.size()) {
      Eigen::VectorXd b(coarse_solver_->rows());
      for (std::size_t k = 0; k < L.owner.size(); ++k)
        if (coarse_index_[k] >= 0) b(coarse_index_[k]) = w.b[k];
      const Eigen::VectorXd x = coarse_solver_->solve(b);
      for (std::size_t k = 0; k < L.owner.size(); ++k) w.x[k] = coarse_index_[k] >= 0 ? x(coarse_index_[k]) : 0.0;
      return;
    }
    std::fill(w.x.begin(), w.x.end(), 0.0);
    for (int s = 0; s < kSweeps; ++s) {
      gauss_seidel_color(L, w.x, w.b, 0);
      gauss_seidel_color(L, w.x, w.b, 1);
    }
    apply(L, w.x, w.r);
    for (std::size_t k = 0; k < w.r.size(); ++k) w.r[k] = L.is_free(k) ? w.b[k] - w.r[k] : 0.0;
    restrict_residual(l);
    vcycle(l + 1);
    prolong_add(l);
    for (int s = 0; s < kSweeps; ++s) {
      gauss_seidel_color(L, w.x, w.b, 1);
      gauss_seidel_color(L, w.x, w.b, 0);
    }
  }

  void restrict_residual(std::size_t l) {
    const Level& F = levels_[l];
    const Level& C = levels_[l + 1];
    const Transfer& t = transfers_[l];
    std::vector<double>& bc = work_[l + 1].b;
    std::fill(bc.begin(), bc.end(), 0.0);
    const std::vector<double>& r = work_[l].r;
    for (std::size_t j = 0; j < F.ny; ++j) {
      const std::size_t J = t.y.lo[j];
      const double wy = t.y.wlo[j];
      for (std::size_t i = 0; i < F.nx; ++i) {
        const double v = r[j * F.nx + i];
        if (v == 0.0) continue;
        const std::size_t I = t.x.lo[i];
        const double wx = t.x.wlo[i];
        bc[J * C.nx + I] += wx * wy * v;
        if (wx < 1.0) bc[J * C.nx + I + 1] += (1.0 - wx) * wy * v;
        if (wy < 1.0) {
          bc[(J + 1) * C.nx + I] += wx * (1.0 - wy) * v;
          if (wx < 1.0) bc[(J + 1) * C.nx + I + 1] += (1.0 - wx) * (1.0 - wy) * v;
        }
      }
    }
    for (std::size_t k = 0; k < bc.size(); ++k)
      if (!C.is_free(k)) bc[k] = 0.0;
  }

  void prolong_add(std::size_t l) {
    const Level& F = levels_[l];
    const Level& C = levels_[l + 1];
    const Transfer& t = transfers_[l];
    const std::vector<double>& xc = work_[l + 1].x;
    std::vector<double>& x = work_[l].x;
    for (std::size_t j = 0; j < F.ny; ++j) {
      const std::size_t J = t.y.lo[j];
      const double wy = t.y.wlo[j];
      for (std::size_t i = 0; i < F.nx; ++i) {
        const std::size_t k = j * F.nx + i;
        if (!F.is_free(k)) continue;
        const std::size_t I = t.x.lo[i];
        const double wx = t.x.wlo[i];
        double v = wx * wy * xc[J * C.nx + I];
        if (wx < 1.0) v += (1.0 - wx) * wy * xc[J * C.nx + I + 1];
        if (wy < 1.0) {
          v += wx * (1.0 - wy) * xc[(J + 1) * C.nx + I];
          if (wx < 1.0) v += (1.0 - wx) * (1.0 - wy) * xc[(J + 1) * C.nx + I + 1];
        }
        x[k] += v;
      }
    }
  }

  static constexpr int kSweeps = 2;
  static constexpr int kCoarseSweeps = 20;
  static constexpr int kMaxDirect = 4096;
  std::vector<Level> levels_;
  std::vector<Transfer> transfers_;
  std::vector<Work> work_;
  std::vector<int> coarse_index_;
  std::unique_ptr<Eigen::LDLT<Eigen::MatrixXd>> coarse_solver_;
};

struct Solution {
  std::vector<double> x, y;
  std::vector<double> u;  // row-major (y index major), fixed nodes carry their values
  double energy = 0.0;
  std::size_t iterations = 0;
  double relative_residual = 0.0;
  std::size_t levels = 0;
};

struct SolveOptions {
  double relative_tolerance = 1e-10;
  std::size_t max_iterations = 2000;
};

namespace detail {

inline double pairwise_sum(std::span<const double> v) {
  if (v.size() <= 64) {
    double s = 0.0;
    for (double a : v) s += a;
    return s;
  }
  const std::size_t h = v.size() / 2;
  return pairwise_sum(v.first(h)) + pairwise_sum(v.subspan(h));
}

inline double dot(const std::vector<double>& a, const std::vector<double>& b, std::vector<double>& scratch) {
  scratch.resize(a.size());
  for (std::size_t k = 0; k < a.size(); ++k) scratch[k] = a[k] * b[k];
  return pairwise_sum(scratch);
}

}  // namespace detail

/// Edge energy of u (fixed nodes must already carry their boundary values).
inline double edge_energy(const Level& L, const std::vector<double>& u) {
  std::vector<double> row(L.ny, 0.0);
  for (std::size_t j = 0; j < L.ny; ++j) {
    double s = 0.0;
    for (std::size_t i = 0; i < L.nx; ++i) {
      const std::size_t k = L.index(i, j);
      if (L.east[k] != 0.0) {
        const double d = u[k] - u[k + 1];
        s += L.east[k] * d * d;
      }
      if (L.north[k] != 0.0) {
        const double d = u[k] - u[k + L.nx];
        s += L.north[k] * d * d;
      }
    }
    row[j] = s;
  }
  double total = detail::pairwise_sum(row) + L.fixed_energy;
  std::vector<double> cut(L.cuts.size());
  for (std::size_t c = 0; c < L.cuts.size(); ++c) {
    const double d = u[L.cuts[c].node] - L.cuts[c].value;
    cut[c] = L.cuts[c].weight * d * d;
  }
  return total + detail::pairwise_sum(cut);
}

inline Solution solve(const Problem& pb, std::vector<double> xs, std::vector<double> ys, SolveOptions opt = {}) {
  Multigrid mg(pb, std::move(xs), std::move(ys));
  const Level& L = mg.finest();
  const std::size_t n = L.nx * L.ny;
  std::vector<double> u(n, 0.0), r = L.rhs, z(n), p(n), q(n), scratch;
  const double bnorm = std::sqrt(detail::dot(r, r, scratch));
  Solution sol;
  sol.levels = mg.depth();
  if (bnorm > 0.0) {
    mg.precondition(r, z);
    p = z;
    double rz = detail::dot(r, z, scratch);
    for (std::size_t it = 1; it <= opt.max_iterations; ++it) {
      apply(L, p, q);
      const double alpha = rz / detail::dot(p, q, scratch);
      for (std::size_t k = 0; k < n; ++k) {
        u[k] += alpha * p[k];
        r[k] -= alpha * q[k];
      }
      sol.iterations = it;
      sol.relative_residual = std::sqrt(detail::dot(r, r, scratch)) / bnorm;
      if (sol.relative_residual <= opt.relative_tolerance) break;
      mg.precondition(r, z);
      const double rz_new = detail::dot(r, z, scratch);
      const double beta = rz_new / rz;
      rz = rz_new;
      for (std::size_t k = 0; k < n; ++k) p[k] = z[k] + beta * p[k];
    }
  }
  for (std::size_t k = 0; k < n; ++k)
    if (!L.is_free(k)) u[k] = owner_value(pb, L.owner[k]);
  sol.energy = edge_energy(L, u);
  sol.x = L.x;
  sol.y = L.y;
  sol.u = std::move(u);
  return sol;
}

/// Flat binary field dump: int64 nx, int64 ny, nx x-coordinates, ny y-coordinates,
/// then nx*ny values row-major (row = fixed y). All little-endian IEEE-754 doubles
/// on the platforms we target.
inline void write_field(const std::string& path, const Solution& s) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorKind::IoError, "cannot open field dump " + path);
  const std::int64_t nx = static_cast<std::int64_t>(s.x.size()), ny = static_cast<std::int64_t>(s.y.size());
  out.write(reinterpret_cast<const char*>(&nx), sizeof nx);
  out.write(reinterpret_cast<const char*>(&ny), sizeof ny);
  out.write(reinterpret_cast<const char*>(s.x.data()), static_cast<std::streamsize>(s.x.size() * sizeof(double)));
  out.write(reinterpret_cast<const char*>(s.y.data()), static_cast<std::streamsize>(s.y.size() * sizeof(double)));
  out.write(reinterpret_cast<const char*>(s.u.data()), static_cast<std::streamsize>(s.u.size() * sizeof(double)));
  if (!out) throw Error(ErrorKind::IoError, "failed writing field dump " + path);
}

}  // namespace twopoint::fd
