#include <gtest/gtest.h>

#include <random>

#include "fewbody/errors.hpp"
#include "fewbody/matel3.hpp"
#include "fewbody/matel4.hpp"
#include "fewbody/oracle.hpp"
#include "support.hpp"

using namespace fewbody;
using namespace fewbody::oracle;
using fewbody::test_support::rel_error;

TEST(Quad3, UnitRanges) {
  EXPECT_NEAR(quad3_monomial(0, 0, 0, {1, 1, 1}).value, 0.5, 1e-9);
}

TEST(Quad3, NodeDoublingIsStable) {
  QuadOptions o;
  o.check = true;
  for (auto [i, j, k] : {std::array{0, 0, 0}, std::array{1, 1, 1}, std::array{3, 0, 2}, std::array{2, 3, 1}}) {
    const auto r = quad3_monomial(i, j, k, {1.3, 0.7, -0.2}, o);
    EXPECT_TRUE(r.converged);
    EXPECT_LT(r.rel_change, kConvergenceTolerance);
  }
}

TEST(Quad3, DivergentWeightThrows) {
  EXPECT_THROW(quad3_monomial(0, 0, 0, {1, -1, 0.5}), DomainError);
}

TEST(Quad4, NodeDoublingIsStable) {
  QuadOptions o{16, true};
  const auto inv_r12 = [](const Distances4& r) { return 1.0 / r.r12; };
  const auto r = quad4(inv_r12, 1, 2, 1, 2, 0, o);
  EXPECT_TRUE(r.converged) << r.rel_change;
  EXPECT_NEAR(r.value, matel4::f4(1, 2, 1, 2, 0), 1e-7 * r.value);
}

TEST(Quad4, RelabelingSymmetry) {
  const auto w = [](const Distances4& r) { return r.r13 * r.r23 * r.r14 * r.r24 / r.r12; };
  const double x = quad4(w, 1.0, 0.5, 0.7, 0.9, 0).value;
  const double y = quad4(w, 0.5, 1.0, 0.9, 0.7, 0).value;
  EXPECT_LT(rel_error(x, y), 1e-9);
}

TEST(ZExpansion, PartialSums) {
  EXPECT_NEAR(zexp_partial(2, 1).energy, -2.75, 1e-12);
  EXPECT_NEAR(zexp_partial(2, 4).energy, -2.90354, 5e-6);
  EXPECT_FALSE(zexp_partial(2, 4).near_radius);
  const auto z1 = zexp_partial(1, 4);
  EXPECT_NEAR(z1.energy, -(1 - 0.625 + 0.157666429 - 0.008699032 + 0.000888707), 1e-12);
  EXPECT_TRUE(z1.near_radius);
  EXPECT_THROW(zexp_partial(2, 5), OrderError);
  EXPECT_THROW(zexp_partial(0, 1), DomainError);
}

TEST(GaussShell, FirstOrderRepulsion) {
  EXPECT_NEAR(gauss_shell_e1(2), 1.25, 1e-9);
  EXPECT_NEAR(gauss_shell_e1(1), 0.625, 1e-9);
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(0.2, 6.0);
  for (int n = 0; n < 5; ++n) {
    const double z = u(rng);
    EXPECT_LT(rel_error(gauss_shell_e1(z), 5.0 * z / 8.0), 1e-9) << z;
  }
}

TEST(Manifest, CoversEveryElementFamily) {
  std::vector<std::string> names;
  for (const auto& c : manifest()) names.push_back(c.name);
  for (const char* family : {"quad3.f3", "quad3.g3", "quad3.minmax", "matel3.natural", "matel3.unnatural",
                             "quad4.f4", "quad4.norm", "quad4.v12", "matel4.overlap", "matel4.grad", "shell.e1"}) {
    bool found = false;
    for (const auto& n : names) found = found || n.rfind(family, 0) == 0;
    EXPECT_TRUE(found) << family;
  }
}

TEST(Manifest, AllCasesPass) {
  const auto reports = run_validation();
  ASSERT_EQ(reports.size(), manifest().size());
  for (const auto& r : reports) {
    EXPECT_TRUE(r.passed) << format_report(r);
    const bool four_body = r.name.find('4') != std::string::npos;
    EXPECT_LE(r.tolerance, four_body ? 1e-6 : 1e-8) << r.name;
  }
}

TEST(Manifest, Filtering) {
  EXPECT_TRUE(case_matches("quad4.f4_u", ""));
  EXPECT_TRUE(case_matches("quad4.f4_u", "f4*"));
  EXPECT_TRUE(case_matches("quad4.f4_u", "quad4.*"));
  EXPECT_TRUE(case_matches("matel3.natural.grad1", "natural"));
  EXPECT_FALSE(case_matches("quad3.f3_unit", "f4*"));
  EXPECT_FALSE(case_matches("quad3.f3_unit", "4"));
  EXPECT_EQ(run_validation("f4*").size(), 3u);
  EXPECT_TRUE(run_validation("no-such-case").empty());
}
