#include <gtest/gtest.h>

#include <cmath>
#include <limits>

#include "fewbody/errors.hpp"
#include "fewbody/model.hpp"

using namespace fewbody;

TEST(Threshold, HydrogenIonNatural) {
  const auto th = threshold_for(SystemSpec::atom(1.0));
  EXPECT_DOUBLE_EQ(th.e_ground, -0.5);
  EXPECT_DOUBLE_EQ(th.relevant(Sector::kNatural), -0.5);
  EXPECT_DOUBLE_EQ(th.mu, 1.0);
  EXPECT_NE(th.label.find("1s"), std::string::npos);
}

TEST(Threshold, HydrogenIonUnnaturalUsesTwoP) {
  const auto spec = SystemSpec::atom(1.0, +1, Sector::kUnnatural);
  EXPECT_DOUBLE_EQ(threshold_for(spec).relevant(spec.sector), -0.125);
}

TEST(Threshold, PositroniumMolecule) {
  const auto th = threshold_for(SystemSpec::four_body(1, 1, 1, 1));
  EXPECT_DOUBLE_EQ(th.e_ground, -0.5);
  EXPECT_DOUBLE_EQ(th.mu, 0.5);
}

TEST(Threshold, PositroniumIon) {
  EXPECT_DOUBLE_EQ(threshold_for(SystemSpec::three_body(1.0, 1.0)).e_ground, -0.25);
}

TEST(Threshold, FourBodyTakesLowerPairing) {
  // (M+, m+, M-, m-): pairing (13)(24) puts the heavy particles together.
  const auto th = threshold_for(SystemSpec::four_body(0.2, 1.8, 0.2, 1.8));
  const double p1 = two_body_energy(0.2, 0.2) + two_body_energy(1.8, 1.8);
  const double p2 = 2.0 * two_body_energy(0.2, 1.8);
  EXPECT_DOUBLE_EQ(th.e_ground, std::min(p1, p2));
  EXPECT_EQ(th.label, "atom(13) + atom(24)");
}

TEST(Threshold, TwoPIsQuarterOfGround) {
  for (double z : {0.5, 1.0, 2.0, 7.3})
    for (double inv_m : {0.0, 0.01, 1.0}) {
      const auto th = threshold_for(SystemSpec::three_body(z, inv_m));
      EXPECT_DOUBLE_EQ(th.e_2p / th.e_ground, 0.25);
      EXPECT_DOUBLE_EQ(th.mu, 1.0 / (inv_m + 1.0));
    }
}

TEST(Threshold, MonotoneInReducedMass) {
  double previous = 0.0;
  for (double inv_m : {10.0, 3.0, 1.0, 0.1, 0.0}) {
    const double e = threshold_for(SystemSpec::three_body(1.0, inv_m)).e_ground;
    EXPECT_LT(e, previous);
    previous = e;
  }
}

TEST(Threshold, EqualMassConcavity) {
  // E2(M, M) + E2(m, m) <= 2 E2(mu, mu) at fixed average inverse mass.
  for (double inv_big = 0.05; inv_big <= 1.0; inv_big += 0.05) {
    const double inv_small = 2.0 - inv_big;
    const double lhs = two_body_energy(inv_big, inv_big) + two_body_energy(inv_small, inv_small);
    EXPECT_LE(lhs, 2.0 * two_body_energy(1.0, 1.0) + 1e-15) << inv_big;
  }
}

TEST(Units, NaturalToElectronVolt) {
  EXPECT_NEAR(natural_to_ev(-0.5), -13.6055, 1e-12);
  EXPECT_DOUBLE_EQ(natural_to_ev(0.0), 0.0);
  EXPECT_DOUBLE_EQ(natural_to_ev(1.0), 27.211);
}

TEST(Spec, RejectsInvalid) {
  EXPECT_THROW(SystemSpec::three_body(1.0, -1.0), DomainError);
  EXPECT_THROW(SystemSpec::three_body(0.0, 0.0), DomainError);
  EXPECT_THROW(SystemSpec::three_body(1.0, 0.0, 0.0), DomainError);
  EXPECT_THROW(SystemSpec::atom(1.0, 0), DomainError);
  EXPECT_THROW(SystemSpec::four_body(1, 1, std::numeric_limits<double>::infinity(), 1), DomainError);
  SystemSpec s = SystemSpec::four_body(1, 1, 1, 1);
  s.charges = {1, -1, 1, -1};
  EXPECT_THROW(s.validate(), DomainError);
  s.charges = {1, 1, 1, -1};
  EXPECT_THROW(s.validate(), DomainError);
}

TEST(Stability, VerdictFollowsThreshold) {
  const auto spec = SystemSpec::atom(1.0);
  VariationalResult r;
  r.energy = -0.51;
  apply_threshold(r, spec);
  EXPECT_TRUE(r.stable);
  EXPECT_NEAR(r.margin, 0.02, 1e-12);
  r.energy = -0.5 - 0.5 * kStabilityTolerance;
  apply_threshold(r, spec);
  EXPECT_FALSE(r.stable);
  r.energy = -0.49;
  apply_threshold(r, spec);
  EXPECT_FALSE(r.stable);
  EXPECT_LT(r.margin, 0.0);
}
