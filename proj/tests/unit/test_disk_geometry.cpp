#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "twopoint/disk_geometry.hpp"

using namespace twopoint;

TEST(HypDistance, SymmetricPair) { EXPECT_NEAR(hyp_distance(-0.5, 0.5), std::atanh(0.8), 1e-15); }
TEST(HypDistance, SamePoint) { EXPECT_EQ(hyp_distance(Complex(0.3, 0.2), Complex(0.3, 0.2)), 0.0); }
TEST(HypDistance, FromOrigin) { EXPECT_NEAR(hyp_distance(0.0, 0.5), 0.5493061443340548, 1e-15); }

TEST(Mobius, AutomorphismProperties) {
  const auto T = MobiusTransform::disk_automorphism(Complex(0.3, -0.4), 1.2);
  EXPECT_TRUE(T.is_disk_automorphism());
  EXPECT_LT(std::abs(T(Complex(0.3, -0.4))), 1e-15);
  const Complex z(0.1, 0.6);
  EXPECT_LT(std::abs(T.inverse()(T(z)) - z), 1e-14);
  const double h = 1e-6;
  const Complex fd = (T(z + h) - T(z - h)) / (2.0 * h);
  EXPECT_LT(std::abs(fd - T.derivative(z)), 1e-8);
}

TEST(NormalizePair, AlreadySymmetric) {
  const NormalizedPair n = normalize_pair(-0.5, 0.5);
  EXPECT_NEAR(n.lambda, 0.5, 1e-15);
  for (Complex z : {Complex(0.2, 0.3), Complex(-0.7, 0.1)}) EXPECT_LT(std::abs(n.phi(z) - z), 1e-15);
}

TEST(NormalizePair, OriginAndPointEight) {
  const NormalizedPair n = normalize_pair(0.0, 0.8);
  EXPECT_NEAR(n.lambda, 0.5, 1e-15);
  EXPECT_LT(std::abs(n.phi(-0.5)), 1e-15);
  EXPECT_LT(std::abs(n.phi(0.5) - 0.8), 1e-15);
  const Complex z(0.1, -0.2);
  EXPECT_LT(std::abs(n.phi(z) - (z + 0.5) / (1.0 + 0.5 * z)), 1e-15);
}

TEST(NormalizePair, RandomPairsPreserveDistance) {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> r(0.0, 0.95), a(-kPi, kPi);
  for (int i = 0; i < 200; ++i) {
    const Complex z1 = std::polar(r(rng), a(rng)), z2 = std::polar(r(rng), a(rng));
    const NormalizedPair n = normalize_pair(z1, z2);
    EXPECT_NEAR(hyp_distance(-n.lambda, n.lambda), hyp_distance(z1, z2), 1e-12);
    EXPECT_LT(std::abs(n.phi(-n.lambda) - z1), 1e-12);
    EXPECT_LT(std::abs(n.phi(n.lambda) - z2), 1e-12);
    EXPECT_TRUE(n.phi.is_disk_automorphism());
  }
}

TEST(NormalizePair, RejectsCoincidentPoints) { EXPECT_THROW(normalize_pair(0.3, 0.3), Error); }

TEST(Domains, Contains) {
  EXPECT_TRUE(DomainSpec::unit_disk().contains(0.99));
  EXPECT_FALSE(DomainSpec::unit_disk().contains(1.0));
  EXPECT_TRUE(DomainSpec::half_plane(1.0, 0.0).contains(-0.1));
  EXPECT_FALSE(DomainSpec::half_plane(1.0, 0.0).contains(0.1));
  const DomainSpec left = DomainSpec::half_disk(HalfDiskSide::Left);
  EXPECT_TRUE(left.contains(-0.5));
  EXPECT_FALSE(left.contains(0.5));
  EXPECT_FALSE(left.contains(-1.5));
  const DomainSpec b1 = DomainSpec::green_level(DomainSpec::unit_disk(), -0.4, 0.4, +1);
  EXPECT_TRUE(b1.contains(-0.4));
  EXPECT_FALSE(b1.contains(0.4));
}

TEST(Domains, BoundaryDistanceIsExactForClosedForms) {
  EXPECT_NEAR(DomainSpec::unit_disk().boundary_distance(0.25), 0.75, 1e-15);
  EXPECT_NEAR(DomainSpec::disk(Complex(1, 1), 2.0).boundary_distance(Complex(1.5, 1)), 1.5, 1e-15);
  EXPECT_NEAR(DomainSpec::half_plane(Complex(0, 1), 1.0).boundary_distance(Complex(3, -2)), 3.0, 1e-15);
  EXPECT_NEAR(DomainSpec::half_disk(HalfDiskSide::Left).boundary_distance(Complex(-0.5, 0)), 0.5, 1e-15);
  EXPECT_NEAR(DomainSpec::half_disk(HalfDiskSide::Left).boundary_distance(Complex(-0.1, 0)), 0.1, 1e-15);
}

TEST(ClosedForm, DiskInnerRadiusAtCenter) {
  EXPECT_NEAR(closed_form_invariants(DomainSpec::unit_disk(), 0.0).inner_radius, 1.0, 1e-15);
  EXPECT_NEAR(closed_form_invariants(DomainSpec::disk(Complex(2, 0), 3.0), Complex(2, 0)).inner_radius, 3.0, 1e-14);
}

TEST(ClosedForm, HalfDiskInnerRadius) {
  EXPECT_NEAR(closed_form_invariants(DomainSpec::half_disk(HalfDiskSide::Left), -0.5).inner_radius, 0.6, 1e-14);
  EXPECT_NEAR(closed_form_invariants(DomainSpec::half_disk(HalfDiskSide::Right), 0.4).inner_radius, 0.5793103448275862, 1e-14);
}

TEST(ClosedForm, HalfPlaneInnerRadiusIsTwiceDistance) {
  EXPECT_NEAR(closed_form_invariants(DomainSpec::half_plane(1.0, 0.0), -1.0).inner_radius, 2.0, 1e-14);
  EXPECT_NEAR(closed_form_invariants(DomainSpec::half_plane(Complex(1, 1), 0.5), Complex(-1, 0.2)).inner_radius,
              2.0 * (0.5 - (Complex(-1, 0.2) * std::conj(Complex(1, 1) / std::sqrt(2.0))).real()), 1e-14);
}

TEST(ClosedForm, DiskGreenFunction) {
  const auto inv = closed_form_invariants(DomainSpec::unit_disk(), -0.4, Complex(0.4));
  ASSERT_TRUE(inv.green.has_value());
  EXPECT_NEAR(*inv.green, 0.37156355643248301, 1e-15);
}

TEST(ClosedForm, HalfPlaneGreenByReflection) {
  const auto inv = closed_form_invariants(DomainSpec::half_plane(1.0, 0.0), -1.0, Complex(-2.0));
  EXPECT_NEAR(*inv.green, std::log(3.0), 1e-15);
}

TEST(ClosedForm, GreenIsSymmetric) {
  const DomainSpec d = DomainSpec::half_disk(HalfDiskSide::Right);
  const Complex a(0.3, 0.2), b(0.6, -0.1);
  EXPECT_NEAR(*closed_form_invariants(d, a, b).green, *closed_form_invariants(d, b, a).green, 1e-14);
}

TEST(ClosedForm, RejectsLevelSubdomains) {
  const DomainSpec b1 = DomainSpec::green_level(DomainSpec::unit_disk(), -0.4, 0.4, +1);
  EXPECT_THROW(closed_form_invariants(b1, -0.4), Error);
}

TEST(CanonicalMap, InverseRoundTrips) {
  for (const DomainSpec& d : {DomainSpec::unit_disk(), DomainSpec::disk(Complex(1, -1), 0.5),
                              DomainSpec::half_plane(Complex(1, 2), 0.3), DomainSpec::half_disk(HalfDiskSide::Left),
                              DomainSpec::half_disk(HalfDiskSide::Right)}) {
    Complex pole = d.kind == DomainSpec::Kind::Disk ? Complex(1.1, -0.9) : Complex(0.0);
    if (d.kind == DomainSpec::Kind::HalfPlane) pole = Complex(-1.0, 0.2);
    if (d.kind == DomainSpec::Kind::HalfDisk) pole = d.side == HalfDiskSide::Left ? Complex(-0.4, 0.1) : Complex(0.5, -0.2);
    const CanonicalMap F(d, pole);
    EXPECT_LT(std::abs(F.value(pole)), 1e-14);
    for (Complex xi : {Complex(0.3, 0.4), Complex(-0.6, 0.1), Complex(0.05, -0.9)}) {
      const Complex z = F.inverse(xi);
      EXPECT_TRUE(d.contains(z));
      EXPECT_LT(std::abs(F.value(z) - xi), 1e-12);
    }
  }
}
