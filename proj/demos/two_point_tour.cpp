// Walks through the library: extremal maps, a covering check, a condenser and a picture.
#include <cstdio>

#include "twopoint/twopoint.hpp"

using namespace twopoint;

int main(int argc, char** argv) {
  const std::string svg_path = argc > 1 ? argv[1] : "delta_family.svg";

  std::printf("lambda   schwarzian slack   goluzin slack\n");
  for (int k = 1; k <= 9; k += 2) {
    const double l = k / 10.0;
    const double s = schwarzian_report(extremal_schwarzian_map(l), DiskPoint(-l), DiskPoint(l)).slack;
    const double g = goluzin_report(goluzin_extremal_map(l, -1.0, 1.0), DiskPoint(-l), DiskPoint(l)).slack;
    std::printf("%.1f      % .3e         % .3e\n", l, s, g);
  }

  const RationalMap square = RationalMap::polynomial(Polynomial{0.0, 0.0, 1.0});
  const CoveringVerdict v = check_delta_covering(square, DiskPoint(0.5), DiskPoint(Complex(0.0, 0.5)));
  std::printf("\nz^2 at (0.5, 0.5i): %s", std::string(to_string(v.status)).c_str());
  if (v.witness) std::printf(" at w = %.4f%+.4fi", v.witness->w.real(), v.witness->w.imag());
  std::printf("\n");

  const double r = 0.01;
  Condenser c{DomainSpec::unit_disk(), {{-0.8, r, -1.0}, {-0.6, r, 1.0}, {0.6, r, 1.0}, {0.8, r, -1.0}}};
  GridSpec grid;
  grid.cells = 256;
  grid.graded = true;
  grid.cells_per_radius = 16;
  grid.growth = 1.05;
  const CapacityEstimate e = solve_condenser(c, grid);
  const std::vector<Complex> centers{-0.8, -0.6, 0.6, 0.8};
  const std::vector<double> deltas{-1.0, 1.0, 1.0, -1.0};
  std::printf("\nfour plates, r = %.2g: finite differences %.5f, two-term asymptotics %.5f\n", r, e.value,
              asymptotic_cap(centers, deltas, RationalMap::identity(), r));

  Scene scene;
  for (double t : {-2.0, -1.0, -0.5, 0.5, 1.0, 2.0})
    for (DeltaBranch b : {DeltaBranch::Plus, DeltaBranch::Minus})
      scene.curves.push_back({delta_trace(DeltaCurve(-1.0, 1.0, t, b), 256), true, t > 0 ? "#1f4e9c" : "#b0521f"});
  scene.points = {{-1.0}, {1.0}};
  emit_svg(scene, svg_path);
  std::printf("\nDelta(-1, 1) family written to %s\n", svg_path.c_str());
}
