#include <gtest/gtest.h>

#include <array>
#include <cmath>

#include "fewbody/errors.hpp"
#include "fewbody/matel4.hpp"
#include "fewbody/oracle.hpp"
#include "fewbody/solve.hpp"
#include "support.hpp"

using namespace fewbody;
using namespace fewbody::matel4;
using fewbody::test_support::rel_error;

namespace {

using P5 = std::array<double, 5>;

double f4_of(const P5& p) { return f4(p[0], p[1], p[2], p[3], p[4]); }

double reduced(const MatBlock& m) {
  return solve::virial_reduce(m.n_mat(0, 0), m.t_mat(0, 0), m.v_mat(0, 0)).energy;
}

const SystemSpec kPs2 = SystemSpec::four_body(1, 1, 1, 1);

}  // namespace

TEST(F4, ClosedFormValue) {
  EXPECT_NEAR(f4(1, 2, 1, 2, 0), 16.0 / 9.0 * std::log(9.0 / 8.0), 1e-15);
}

TEST(F4, RelabelingSymmetry) {
  for (P5 p : {P5{1, 2, 1, 2, 0}, P5{0.8, 0.5, 0.9, 0.3, 0.4}, P5{2.0, 0.3, 0.3, 1.8, 0.1}, P5{1, 1.02, 0.6, 0.2, 0}})
    EXPECT_LT(rel_error(f4(p[1], p[0], p[3], p[2], p[4]), f4_of(p)), 1e-14);
}

TEST(F4, DegenerateLimitMatchesQuadrature) {
  const auto inv_r12 = [](const oracle::Distances4& r) { return 1.0 / r.r12; };
  EXPECT_LT(rel_error(f4(1, 1, 0.6, 0.2, 0), oracle::quad4(inv_r12, 1, 1, 0.6, 0.2, 0).value), 1e-7);
  EXPECT_LT(rel_error(f4(0.7, 0.7, 0.4, 0.4, 0), oracle::quad4(inv_r12, 0.7, 0.7, 0.4, 0.4, 0).value), 1e-7);
}

TEST(F4, BranchesAgreeAtSwitchPoint) {
  // Separation |a - b| / (a + b + c + d) just below and just above the
  // series threshold; both sides must match the quadrature.
  const auto inv_r12 = [](const oracle::Distances4& r) { return 1.0 / r.r12; };
  for (double rho : {0.249, 0.251}) {
    const double diff = rho * 3.0;
    const double a = 1.0 + diff / 2, b = 1.0 - diff / 2;
    EXPECT_LT(rel_error(f4(a, b, 0.5, 0.5, 0), oracle::quad4(inv_r12, a, b, 0.5, 0.5, 0).value), 1e-7) << rho;
  }
}

TEST(F4, NonPositiveLogArgumentThrows) { EXPECT_THROW(f4(1, -1, 0.5, 2, 0), DomainError); }

TEST(G4, MatchesFiniteDifferencesUpToOrderThree) {
  const std::function<double(const P5&)> f = f4_of;
  // Closed-form branch, mixed, and both series branches.
  const std::array<P5, 4> points{
      {{2.0, 0.3, 0.3, 1.8, 0}, {2.0, 0.3, 0.7, 0.6, 0}, {1.0, 1.05, 0.6, 0.2, 0}, {0.8, 0.8, 0.5, 0.5, 0}}};
  for (const P5& p : points) {
    for (int ia = 0; ia <= 3; ++ia)
      for (int ib = 0; ia + ib <= 3; ++ib)
        for (int ic = 0; ia + ib + ic <= 3; ++ic)
          for (int id = 0; ia + ib + ic + id <= 3; ++id)
            for (int iu = 0; ia + ib + ic + id + iu <= 3; ++iu) {
              const int n = ia + ib + ic + id + iu;
              const double fd =
                  (n % 2 ? -1.0 : 1.0) * test_support::richardson_difference<5>(f, p, {ia, ib, ic, id, iu}, 1e-2);
              const double g = g4({ia, ib, ic, id, iu}, p[0], p[1], p[2], p[3]);
              EXPECT_LT(rel_error(g, fd), 1e-5) << "orders " << ia << ib << ic << id << iu << " at " << p[0] << ","
                                                << p[1] << "," << p[2] << "," << p[3];
            }
  }
}

TEST(G4, OrderLimit) {
  EXPECT_THROW(g4({kMaxOrder, 1, 0, 0, 0}, 1, 0.5, 0.5, 1), OrderError);
  EXPECT_THROW(g4({0, -1, 0, 0, 0}, 1, 0.5, 0.5, 1), OrderError);
}

TEST(PairElements4, ConjugationMapsR12ToR34) {
  for (auto [t, tp] : {std::pair{ExpTerm4{0.7, 0.4, 0.5, 0.6}, ExpTerm4{0.5, 0.3, 0.6, 0.8}},
                       std::pair{ExpTerm4{1.1, 0.2, 0.3, 0.9}, ExpTerm4{0.6, 0.6, 0.2, 0.7}}}) {
    const auto e = pair_elements4(t, tp);
    const auto c = pair_elements4(t.conjugate(), tp.conjugate());
    EXPECT_LT(rel_error(e.inv_r34, c.inv_r12), 1e-13);
    EXPECT_LT(rel_error(e.inv_r12, c.inv_r34), 1e-13);
    EXPECT_LT(rel_error(e.overlap, c.overlap), 1e-13);
  }
}

TEST(PairElements4, RelabelingInvariance) {
  const ExpTerm4 t{0.9, 0.35, 0.55, 0.7}, tp{0.6, 0.45, 0.8, 0.3};
  const auto e = pair_elements4(t, tp);
  for (auto map : {&ExpTerm4::swap_positive, &ExpTerm4::swap_negative, &ExpTerm4::conjugate}) {
    const auto m = pair_elements4((t.*map)(), (tp.*map)());
    EXPECT_LT(rel_error(m.overlap, e.overlap), 1e-13);
    EXPECT_LT(rel_error(m.potential(), e.potential()), 1e-13);
  }
}

TEST(PairElements4, Hermitian) {
  const ExpTerm4 t{0.9, 0.35, 0.55, 0.7}, tp{0.6, 0.45, 0.8, 0.3};
  const auto x = pair_elements4(t, tp);
  const auto y = pair_elements4(tp, t);
  EXPECT_LT(rel_error(x.overlap, y.overlap), 1e-13);
  for (int i = 0; i < 4; ++i) EXPECT_LT(rel_error(x.grad[i], y.grad[i]), 1e-13);
  EXPECT_LT(rel_error(x.potential(), y.potential()), 1e-13);
}

TEST(HylleraasOre, ZeroBetaLimit) {
  const HylleraasOre h = ho_ntv(0.0);
  EXPECT_NEAR(h.n, 33.0 / 8.0, 1e-14);
  EXPECT_NEAR(h.t, 21.0 / 4.0, 1e-14);
  EXPECT_NEAR(h.v, 19.0 / 3.0, 1e-14);
  EXPECT_NEAR(h.reduced_energy(), -2888.0 / 6237.0, 1e-8);
  EXPECT_NEAR(ho_ntv(1e-3).reduced_energy(), h.reduced_energy(), 1e-5);
}

TEST(HylleraasOre, DomainChecked) {
  EXPECT_THROW(ho_ntv(1.0), DomainError);
  EXPECT_THROW(ho_ntv(-0.1), DomainError);
}

TEST(HylleraasOre, MatchesGeneralAssembly) {
  for (double beta : {0.05, 0.0999, 0.1001, 0.2, 0.5, 0.8}) {
    const HylleraasOre h = ho_ntv(beta);
    const MatBlock m = assemble4({hylleraas_ore_term(beta)}, kPs2);
    EXPECT_LT(rel_error(m.n_mat(0, 0), kHylleraasOreScale * h.n), 1e-10) << beta;
    EXPECT_LT(rel_error(m.t_mat(0, 0), kHylleraasOreScale * h.t), 1e-10) << beta;
    EXPECT_LT(rel_error(m.v_mat(0, 0), -kHylleraasOreScale * h.v), 1e-10) << beta;
  }
}

TEST(HylleraasOre, OptimumBindsWithinVariationalBounds) {
  const auto r = solve::optimize_ps2();
  EXPECT_NEAR(r.energy, -0.5042, 5e-4);
  EXPECT_GE(r.energy, -0.516);
  EXPECT_LT(r.energy, -0.5);
  EXPECT_TRUE(r.stable);
}

TEST(Assemble4, AntisymmetricEqualRangesVanish) {
  SystemSpec spec = kPs2;
  spec.epsilon = -1;
  const MatBlock m = assemble4({{0.5, 0.5, 0.5, 0.5}}, spec);
  const MatBlock p = assemble4({{0.5, 0.5, 0.5, 0.5}}, kPs2);
  EXPECT_LT(std::abs(m.n_mat(0, 0)), 1e-14 * p.n_mat(0, 0));
}

TEST(Assemble4, HeavyPositiveChargesBindDeeper) {
  const SystemSpec hydrogen = SystemSpec::four_body(0, 0, 1, 1);
  for (double beta : {0.2, 0.5}) {
    const auto t = hylleraas_ore_term(beta);
    EXPECT_LT(reduced(assemble4({t}, hydrogen)), reduced(assemble4({t}, kPs2))) << beta;
  }
}

TEST(Assemble4, ReducedEnergyIsScaleInvariant) {
  const ExpTerm4 t{0.8, 0.3, 0.25, 0.75};
  const SystemSpec spec = SystemSpec::four_body(0.4, 1.6, 0.4, 1.6);
  const double e = reduced(assemble4({t}, spec));
  for (double lambda : {0.4, 2.5}) EXPECT_LT(rel_error(reduced(assemble4({t.scaled(lambda)}, spec)), e), 1e-12);
}

TEST(Assemble4, SymmetricAndPositiveDefinite) {
  const std::vector<ExpTerm4> terms{{0.8, 0.3, 0.25, 0.75}, {1.2, 0.2, 0.4, 0.9}, {0.6, 0.5, 0.3, 0.5}};
  for (const SystemSpec& spec : {kPs2, SystemSpec::four_body(0.5, 1.5, 0.5, 1.5)}) {
    const MatBlock m = assemble4(terms, spec);
    EXPECT_LT((m.n_mat - m.n_mat.transpose()).norm(), 1e-13 * m.n_mat.norm());
    EXPECT_LT((m.t_mat - m.t_mat.transpose()).norm(), 1e-13 * m.t_mat.norm());
    EXPECT_LT((m.v_mat - m.v_mat.transpose()).norm(), 1e-13 * m.v_mat.norm());
    EXPECT_EQ(Eigen::LLT<Eigen::MatrixXd>(m.n_mat).info(), Eigen::Success);
  }
}

TEST(Assemble4, SymmetryImagesFollowEqualMasses) {
  const ExpTerm4 t{0.8, 0.3, 0.25, 0.75};
  EXPECT_EQ(symmetry_images(t, kPs2).size(), 4u);
  EXPECT_EQ(symmetry_images(t, SystemSpec::four_body(0.5, 0.5, 1.5, 1.5)).size(), 4u);
  EXPECT_EQ(symmetry_images(t, SystemSpec::four_body(0.5, 1.5, 0.5, 1.5)).size(), 1u);
}
