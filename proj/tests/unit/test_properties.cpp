#include <gtest/gtest.h>

#include <random>

#include "random_maps.hpp"
#include "twopoint/inequalities.hpp"

using namespace twopoint;
using namespace twopoint::testing;

TEST(Properties, SchwarzianMatchesFiniteDifferences) {
  std::mt19937_64 rng(20240607);
  for (int i = 0; i < 100; ++i) {
    const RationalMap f = random_rational_map(rng, 3);
    const Complex z = admissible_point(rng, f);
    const Complex exact = schwarzian_at(f, z);
    const Complex fd = finite_difference_schwarzian(f, z, 0.02 * std::min(distance_to_poles(f, z), 1.0));
    EXPECT_LT(std::abs(exact - fd), 1e-6 * std::max(std::abs(exact), 1.0)) << "map " << i;
  }
}

TEST(Properties, SchwarzianIsMobiusInvariant) {
  std::mt19937_64 rng(11);
  for (int i = 0; i < 30; ++i) {
    const RationalMap f = random_rational_map(rng, 3);
    const MobiusTransform m{Complex(1.0, 0.5), Complex(-0.3, 0.2), Complex(0.4, -0.1), Complex(0.7, 0.0)};
    const RationalMap g = compose(m.to_rational_map(), f);
    const Complex z = admissible_point(rng, f);
    if (g.has_pole_near(z, 0.05)) continue;
    const Complex s = schwarzian_at(f, z);
    EXPECT_LT(std::abs(schwarzian_at(g, z) - s), 1e-8 * std::max(std::abs(s), 1.0));
  }
}

TEST(Properties, SchwarzianChainRule) {
  std::mt19937_64 rng(12);
  for (int i = 0; i < 30; ++i) {
    const RationalMap f = random_rational_map(rng, 2);
    const MobiusTransform phi = random_automorphism(rng);
    const RationalMap g = compose(f, phi.to_rational_map());
    const Complex z = random_disk_point(rng, 0.8);
    const Complex w = phi(z);
    if (f.has_pole_near(w, 0.1) || std::abs(jet_eval(f, w).f1) < 1e-2) continue;
    const Complex d = phi.derivative(z);
    const Complex expected = schwarzian_at(f, w) * d * d;
    EXPECT_LT(std::abs(schwarzian_at(g, z) - expected), 1e-7 * std::max(std::abs(expected), 1.0));
  }
}

TEST(Properties, GoluzinInvariantUnderPrecomposition) {
  std::mt19937_64 rng(13);
  const RationalMap f(Polynomial{0.0, 1.0}, Polynomial{1.0, 0.0, -1.0});
  for (int i = 0; i < 50; ++i) {
    const MobiusTransform phi = random_automorphism(rng);
    const Complex z1 = random_disk_point(rng, 0.8), z2 = random_disk_point(rng, 0.8);
    const BoundReport a = goluzin_report(f, DiskPoint(phi(z1)), DiskPoint(phi(z2)));
    const BoundReport b = goluzin_report(compose(f, phi.to_rational_map()), DiskPoint(z1), DiskPoint(z2));
    EXPECT_NEAR(a.lhs, b.lhs, 1e-9 * std::max(a.lhs, 1.0));
    EXPECT_NEAR(a.rhs, b.rhs, 1e-9 * std::max(a.rhs, 1.0));
  }
}

TEST(Properties, AffineImagesScaleGoluzinBothSides) {
  std::mt19937_64 rng(14);
  for (int i = 0; i < 50; ++i) {
    const RationalMap f = random_automorphism(rng).to_rational_map();
    const Complex a = Complex(0.5 + i * 0.1, -0.3), b(2.0, 1.0);
    const DiskPoint z1(random_disk_point(rng, 0.9)), z2(random_disk_point(rng, 0.9));
    const BoundReport r = goluzin_report(f, z1, z2);
    const BoundReport s = goluzin_report(affine_image(f, a, b), z1, z2);
    EXPECT_NEAR(s.lhs, std::norm(a) * r.lhs, 1e-9 * s.lhs + 1e-15);
    EXPECT_NEAR(s.rhs, std::norm(a) * r.rhs, 1e-9 * s.rhs + 1e-15);
    EXPECT_GE(s.slack, -1e-10);
  }
}

TEST(Properties, AutomorphismsSatisfyBothBounds) {
  std::mt19937_64 rng(15);
  for (int i = 0; i < 100; ++i) {
    const RationalMap f = random_automorphism(rng).to_rational_map();
    const DiskPoint z1(random_disk_point(rng, 0.95)), z2(random_disk_point(rng, 0.95));
    EXPECT_GE(goluzin_report(f, z1, z2).slack, -1e-10);
    EXPECT_GE(schwarzian_report(f, z1, z2).slack, -1e-10);
  }
}

TEST(Properties, HyperbolicDistanceIsAutomorphismInvariant) {
  std::mt19937_64 rng(16);
  for (int i = 0; i < 100; ++i) {
    const MobiusTransform phi = random_automorphism(rng);
    const Complex a = random_disk_point(rng, 0.95), b = random_disk_point(rng, 0.95), c = random_disk_point(rng, 0.95);
    EXPECT_NEAR(hyp_distance(phi(a), phi(b)), hyp_distance(a, b), 1e-9);
    EXPECT_LE(hyp_distance(a, c), hyp_distance(a, b) + hyp_distance(b, c) + 1e-12);
  }
}
