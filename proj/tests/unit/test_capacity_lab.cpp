#include <gtest/gtest.h>

#include <cmath>

#include "twopoint/capacity_lab.hpp"

using namespace twopoint;

namespace {

const Complex I(0.0, 1.0);

double annulus_exact(double r) { return 2.0 * kPi / std::log(1.0 / r); }

GridSpec cells(std::size_t n) {
  GridSpec g;
  g.cells = n;
  return g;
}

ErrorKind kind_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.kind();
  }
  ADD_FAILURE() << "no error thrown";
  return ErrorKind::InvalidInput;
}

Condenser four_plates(double r) {
  return {DomainSpec::unit_disk(), {{-0.8, r, -1.0}, {-0.6, r, 1.0}, {0.6, r, 1.0}, {0.8, r, -1.0}}};
}

}  // namespace

TEST(ClosedFormCapacity, Annulus) {
  const auto e = closed_form_capacity({DomainSpec::unit_disk(), {{0.0, 0.1, 1.0}}});
  ASSERT_TRUE(e.has_value());
  EXPECT_NEAR(e->value, 2.728752707683683, 1e-14);
  EXPECT_EQ(e->method, CapacityMethod::ClosedForm);
  EXPECT_FALSE(closed_form_capacity(four_plates(0.05)).has_value());
}

TEST(SolveCondenser, AnnulusAndRichardson) {
  const Condenser c{DomainSpec::unit_disk(), {{0.0, 0.1, 1.0}}};
  const auto plain = solve_condenser(c, cells(512));
  EXPECT_NEAR(plain.value, annulus_exact(0.1), 0.01 * annulus_exact(0.1));
  GridSpec g = cells(512);
  g.richardson = true;
  const auto rich = solve_condenser(c, g);
  ASSERT_EQ(rich.levels.size(), 2u);
  ASSERT_TRUE(rich.error_bar.has_value());
  EXPECT_LT(std::abs(rich.value - annulus_exact(0.1)), 0.5 * std::abs(plain.value - annulus_exact(0.1)));
  EXPECT_EQ(rich.method, CapacityMethod::FiniteDifference);
}

TEST(SolveCondenser, SimilarityInvariance) {
  const auto a = solve_condenser({DomainSpec::unit_disk(), {{0.3, 0.1, 1.0}}}, cells(256));
  const auto b = solve_condenser({DomainSpec::disk(Complex(5, -2), 3.0), {{Complex(5.9, -2), 0.3, 1.0}}}, cells(256));
  EXPECT_NEAR(a.value, b.value, 1e-9 * a.value);
}

TEST(SolveCondenser, EmptyPlateListHasZeroCapacity) {
  EXPECT_EQ(solve_condenser({DomainSpec::unit_disk(), {}}, cells(64)).value, 0.0);
}

TEST(SolveCondenser, FourPlatesBetweenCoarseAndAsymptotic) {
  // monotone in plate size
  const double small = solve_condenser(four_plates(0.03), cells(512)).value;
  const double large = solve_condenser(four_plates(0.06), cells(512)).value;
  EXPECT_GT(large, small);
}

TEST(SolveCondenser, Validation) {
  EXPECT_EQ(kind_of([] { solve_condenser({DomainSpec::unit_disk(), {{0.0, 0.2, 1.0}, {0.3, 0.2, -1.0}}}, cells(64)); }),
            ErrorKind::PlateOverlap);
  EXPECT_EQ(kind_of([] { solve_condenser({DomainSpec::unit_disk(), {{0.9, 0.2, 1.0}}}, cells(64)); }),
            ErrorKind::PlateOutsideDomain);
  EXPECT_EQ(kind_of([] {
              solve_condenser({DomainSpec::green_level(DomainSpec::unit_disk(), -0.4, 0.4, 1), {{-0.4, 0.1, 1.0}}},
                              cells(64));
            }),
            ErrorKind::UnsupportedDomain);
  EXPECT_EQ(kind_of([] { solve_condenser({DomainSpec::unit_disk(), {{0.0, 0.01, 1.0}}}, cells(64)); }),
            ErrorKind::GridTooCoarse);
  EXPECT_EQ(kind_of([] { solve_condenser({DomainSpec::unit_disk(), {{0.0, -0.1, 1.0}}}, cells(64)); }),
            ErrorKind::InvalidInput);
}

TEST(SolveCondenser, GradedGridResolvesSmallPlate) {
  GridSpec g = cells(256);
  g.graded = true;
  g.cells_per_radius = 16;
  g.growth = 1.05;
  const auto e = solve_condenser({DomainSpec::unit_disk(), {{0.0, 1e-3, 1.0}}}, g);
  EXPECT_NEAR(e.value, annulus_exact(1e-3), 0.02 * annulus_exact(1e-3));
}

TEST(SolveCondenser, HalfPlaneBoxGrowsWithFactor) {
  const Condenser c{DomainSpec::half_plane(1.0, 0.0), {{Complex(-1, 0.3), 0.1, 1.0}, {Complex(-1, -0.3), 0.1, -1.0}}};
  GridSpec g = cells(512);
  g.box_factor = 4;
  const auto small = solve_condenser(c, g);
  g.box_factor = 8;
  const auto large = solve_condenser(c, g);
  EXPECT_NEAR(large.box.width(), 2.0 * small.box.width(), 1e-12);
  // a larger box moves the truncation boundary away; the dipole barely notices
  EXPECT_NEAR(large.value, small.value, 0.02 * large.value);
}

TEST(AsymptoticCap, SinglePlateMatchesSolver) {
  const std::vector<Complex> pts{0.0};
  const std::vector<double> d{1.0};
  const double a = asymptotic_cap(pts, d, RationalMap::identity(), 1e-3);
  EXPECT_NEAR(a, annulus_exact(1e-3), 1e-14);
  GridSpec g = cells(256);
  g.graded = true;
  g.cells_per_radius = 16;
  g.growth = 1.05;
  EXPECT_NEAR(solve_condenser({DomainSpec::unit_disk(), {{0.0, 1e-3, 1.0}}}, g).value, a, 0.02 * a);
}

TEST(AsymptoticCap, SignFlipInvariance) {
  const std::vector<Complex> pts{-0.8, -0.6, 0.6, 0.8};
  const std::vector<double> d{-1, 1, 1, -1}, md{1, -1, -1, 1};
  EXPECT_EQ(asymptotic_cap(pts, d, RationalMap::identity(), 1e-3), asymptotic_cap(pts, md, RationalMap::identity(), 1e-3));
}

TEST(AsymptoticCap, FrozenFourPointValue) {
  const std::vector<Complex> pts{-0.8, -0.6, 0.6, 0.8};
  const std::vector<double> d{-1, 1, 1, -1};
  const double L = std::log(1e-2);
  EXPECT_NEAR(asymptotic_cap(pts, d, RationalMap::identity(), 1e-2),
              -8.0 * kPi / L - 2.0 * kPi * (-6.680490373961034) / (L * L), 1e-12);
}

TEST(AsymptoticCap, Validation) {
  const std::vector<Complex> pts{-0.8, -0.6};
  const std::vector<double> d{-1, 1};
  EXPECT_EQ(kind_of([&] { asymptotic_cap(pts, d, RationalMap::identity(), 0.06); }), ErrorKind::RadiusTooLarge);
  EXPECT_EQ(kind_of([&] { asymptotic_cap(pts, d, RationalMap::identity(), 1.5); }), ErrorKind::ParameterOutOfRange);
}

TEST(AsymptoticCapPair, HalfPlaneClosedFormAndContinuity) {
  const DomainSpec h = DomainSpec::half_plane(1.0, 0.0);
  const Complex Z1(-1.0, 0.4), Z2(-0.7, -0.5);
  const double rho = 0.1, r = 1e-3;
  // r(H, x) = 2|Re x| on Re z < 0; g is symmetric
  const double bracket = std::log(2.0 * 0.7 / (2.0 * (1.0 + rho))) + std::log(2.0 * 1.0 / (2.0 * (1.0 - rho))) -
                         2.0 * *closed_form_invariants(h, Z2, Z1).green;
  const double L = std::log(r);
  EXPECT_NEAR(asymptotic_cap_pair(rho, r, h, Z1, Z2), -4.0 * kPi / L - 2.0 * kPi * bracket / (L * L), 1e-13);
  EXPECT_NEAR(asymptotic_cap_pair(1e-6, r, h, Z1, Z2), asymptotic_cap_pair(2e-6, r, h, Z1, Z2), 1e-6);
  EXPECT_EQ(kind_of([&] { asymptotic_cap_pair(0.6, r, h, Z1, Z2); }), ErrorKind::ParameterOutOfRange);
}

TEST(AsymptoticCapPair, TracksTwoPlateSolver) {
  const DomainSpec h = DomainSpec::half_plane(1.0, 0.0);
  const Complex Z1(-1.0, 0.5), Z2(-1.0, -0.5);
  const double rho = 0.2;
  GridSpec g = cells(256);
  g.graded = true;
  g.cells_per_radius = 16;
  g.growth = 1.05;
  double prev = 1e9;
  for (double r : {1e-2, 1e-3}) {
    const Condenser c{h, {{Z1, 2.0 * r * (1.0 - rho), 1.0}, {Z2, 2.0 * r * (1.0 + rho), -1.0}}};
    const double L = std::log(r);
    const double scaled = std::abs(solve_condenser(c, g).value - asymptotic_cap_pair(rho, r, h, Z1, Z2)) * L * L;
    EXPECT_LT(scaled, prev) << r;
    prev = scaled;
  }
}

TEST(GreenIdentity, ClosedFormDiskPair) {
  const GreenIdentity g = green_identity_closed_form(DomainSpec::unit_disk(), -0.4, 0.4);
  EXPECT_LT(g.residual, 1e-12);
  EXPECT_NEAR(g.rhs, 2.0 * std::log(0.5793103448275862), 1e-12);
  EXPECT_EQ(g.rhs_std_error, 0.0);
}

TEST(GreenIdentity, ClosedFormGeneralPairs) {
  EXPECT_LT(green_identity_closed_form(DomainSpec::unit_disk(), 0.2 * I, -0.2 * I).residual, 1e-12);
  EXPECT_LT(green_identity_closed_form(DomainSpec::unit_disk(), Complex(0.1, 0.5), Complex(-0.6, 0.2)).residual, 1e-12);
  EXPECT_LT(green_identity_closed_form(DomainSpec::half_plane(1.0, 0.0), Complex(-1, 0.3), Complex(-0.5, -0.2)).residual,
            1e-12);
  EXPECT_LT(green_identity_closed_form(DomainSpec::half_disk(HalfDiskSide::Right), Complex(0.3, 0.2), Complex(0.5, -0.3))
                .residual,
            1e-12);
}

TEST(GreenIdentity, NumericRotatedDiskPair) {
  WalkBudget b;
  b.walks = 1500000;
  const GreenIdentity g = green_identity_residual(DomainSpec::unit_disk(), 0.2 * I, -0.2 * I, b);
  EXPECT_LT(g.residual, 1e-3);
  EXPECT_LT(g.rhs_std_error, 1e-3);
}

TEST(GreenIdentity, NumericHalfPlanePair) {
  WalkBudget b;
  b.walks = 1500000;
  const GreenIdentity g = green_identity_residual(DomainSpec::half_plane(1.0, 0.0), Complex(-1, 0.5), Complex(-1, -0.5), b);
  EXPECT_LT(g.residual, 1e-3);
}

TEST(SeparatingTransform, Examples) {
  EXPECT_LT(std::abs(separating_transform(1, std::polar(1.0, kPi / 4.0)) - 1.0), 1e-15);
  EXPECT_LT(std::abs(separating_transform(2, std::polar(1.0, 3.0 * kPi / 4.0)) - 1.0), 1e-15);
  for (int k = 1; k <= 4; ++k) {
    for (double t : {0.3, 0.8}) {
      EXPECT_NEAR(separating_transform(k, std::polar(t, 0.5 * kPi * (k - 1))).real(), 0.0, 1e-15);
      EXPECT_NEAR(separating_transform(k, std::polar(t, 0.5 * kPi * k)).real(), 0.0, 1e-15);
      const Complex w = std::polar(t, 0.5 * kPi * (k - 1) + 0.3);
      EXPECT_TRUE(in_sector(k, w));
      EXPECT_GT(separating_transform(k, w).real(), 0.0);
      EXPECT_LT(std::abs(separating_inverse(k, separating_transform(k, w)) - w), 1e-14);
    }
  }
  EXPECT_THROW(separating_transform(0, 1.0), Error);
}

TEST(Separation, SymmetricFourPlates) {
  const SeparationCheck s = separation_inequality_check(four_plates(0.05), cells(512));
  EXPECT_GE(s.lhs, s.rhs * (1.0 - 0.03));
  for (double v : s.sector) EXPECT_GT(v, 0.0);
  EXPECT_NEAR(s.sector[0], s.sector[3], 1e-6 * s.sector[0]);
}

TEST(Separation, EmptySectorContributesZero) {
  const Condenser c{DomainSpec::unit_disk(), {{Complex(0.5, 0.3), 0.1, 1.0}}};
  const SeparationCheck s = separation_inequality_check(c, cells(256));
  EXPECT_GT(s.sector[0], 0.0);
  EXPECT_EQ(s.sector[1], 0.0);
  EXPECT_EQ(s.sector[2], 0.0);
  EXPECT_EQ(s.sector[3], 0.0);
  EXPECT_FALSE(s.sectors[1].has_value());
  EXPECT_GE(s.lhs, s.rhs * 0.97);
}

TEST(Separation, PlateOnImaginaryAxisRejected) {
  const Condenser c{DomainSpec::unit_disk(), {{Complex(0.05, 0.3), 0.1, 1.0}}};
  EXPECT_EQ(kind_of([&] { separation_inequality_check(c, cells(64)); }), ErrorKind::PlateOnAxis);
}
