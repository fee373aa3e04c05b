#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "twopoint/covering.hpp"
#include "twopoint/disk_geometry.hpp"
#include "twopoint/inequalities.hpp"

using namespace twopoint;

namespace {

RationalMap square() { return RationalMap::polynomial(Polynomial{0.0, 0.0, 1.0}); }

void expect_double_cover_witness(const CoveringVerdict& v, const RationalMap& f) {
  ASSERT_EQ(v.status, CoveringStatus::MultiplePreimage);
  ASSERT_TRUE(v.witness.has_value());
  ASSERT_FALSE(v.witness->w_is_infinite);
  ASSERT_GE(v.witness->preimages.size(), 2u);
  for (Complex z : v.witness->preimages) {
    EXPECT_LT(std::abs(z), 1.0);
    EXPECT_LT(std::abs(f(z) - v.witness->w), 1e-9);
  }
}

}  // namespace

TEST(GammaCovering, MobiusMapsPass) {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(-0.6, 0.6);
  for (int i = 0; i < 5; ++i) {
    const RationalMap f = MobiusTransform::disk_automorphism(Complex(u(rng), u(rng)), 3.0 * u(rng)).to_rational_map();
    const auto v = check_gamma_covering(f, DiskPoint(Complex(u(rng), u(rng))), DiskPoint(Complex(u(rng), u(rng))));
    EXPECT_EQ(v.status, CoveringStatus::NoViolationFound);
    EXPECT_FALSE(v.witness.has_value());
  }
}

TEST(GammaCovering, SquareIsFlagged) {
  const auto v = check_gamma_covering(square(), DiskPoint(0.5), DiskPoint(Complex(0.0, 0.5)));
  expect_double_cover_witness(v, square());
  EXPECT_EQ(v.family, CurveFamily::Gamma);
  EXPECT_EQ(v.curve_samples, 512u);
  EXPECT_EQ(v.family_samples, 257u);
}

TEST(GammaCovering, KoebeLikeMapPasses) {
  const RationalMap f(Polynomial{0.0, 1.0}, Polynomial{1.0, 0.0, -1.0});
  EXPECT_EQ(check_gamma_covering(f, DiskPoint(-0.5), DiskPoint(0.5)).status, CoveringStatus::NoViolationFound);
}

TEST(DeltaCovering, ExtremalMapPasses) {
  EXPECT_EQ(check_delta_covering(extremal_schwarzian_map(0.5), DiskPoint(-0.5), DiskPoint(0.5)).status,
            CoveringStatus::NoViolationFound);
}

TEST(DeltaCovering, SquareIsFlagged) {
  const auto v = check_delta_covering(square(), DiskPoint(0.5), DiskPoint(Complex(0.0, 0.5)));
  expect_double_cover_witness(v, square());
  EXPECT_EQ(v.family, CurveFamily::Delta);
  // antipodal points share their image, so no curve family is defined
  EXPECT_THROW(check_delta_covering(square(), DiskPoint(Complex(-0.3, 0.2)), DiskPoint(Complex(0.3, -0.2))), Error);
}

TEST(DeltaCovering, MobiusMapsPass) {
  const RationalMap f = MobiusTransform::disk_automorphism(Complex(0.3, 0.2), 0.5).to_rational_map();
  EXPECT_EQ(check_delta_covering(f, DiskPoint(Complex(-0.1, 0.4)), DiskPoint(Complex(0.5, 0.1))).status,
            CoveringStatus::NoViolationFound);
}

TEST(Covering, DispatchMatchesFamily) {
  const auto g = check_covering(CurveFamily::Gamma, square(), DiskPoint(0.5), DiskPoint(Complex(0.0, 0.5)));
  const auto d = check_covering(CurveFamily::Delta, square(), DiskPoint(0.5), DiskPoint(Complex(0.0, 0.5)));
  EXPECT_EQ(g.family, CurveFamily::Gamma);
  EXPECT_EQ(d.family, CurveFamily::Delta);
}

TEST(Covering, RejectsCoincidentImages) {
  try {
    check_gamma_covering(square(), DiskPoint(0.5), DiskPoint(-0.5));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::CoincidentImages);
  }
}

TEST(Covering, ResolutionIsRecorded) {
  const auto v = check_gamma_covering(RationalMap::identity(), DiskPoint(-0.2), DiskPoint(0.3), {64, 17});
  EXPECT_EQ(v.curve_samples, 64u);
  EXPECT_EQ(v.family_samples, 17u);
}

TEST(PreimageCounter, MatchesGuardedPreimages) {
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> u(-1.2, 1.2);
  const RationalMap maps[] = {square(), extremal_schwarzian_map(0.3),
                              RationalMap(Polynomial{0.0, 1.0}, Polynomial{1.0, 0.0, -1.0}),
                              MobiusTransform::disk_automorphism(Complex(0.2, 0.1)).to_rational_map()};
  for (const RationalMap& f : maps) {
    const detail::PreimageCounter count(f);
    for (int i = 0; i < 200; ++i) {
      const Complex w(u(rng), u(rng));
      EXPECT_EQ(count(w), detail::guarded_preimages(f, w).size());
    }
    EXPECT_EQ(count(std::nullopt), detail::guarded_preimages(f, std::nullopt).size());
  }
}
