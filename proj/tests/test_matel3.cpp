#include <gtest/gtest.h>

#include <algorithm>
#include <array>
#include <random>

#include "fewbody/errors.hpp"
#include "fewbody/jet.hpp"
#include "fewbody/matel3.hpp"
#include "fewbody/oracle.hpp"
#include "fewbody/solve.hpp"
#include "support.hpp"

using namespace fewbody;
using namespace fewbody::matel3;
using fewbody::test_support::rel_error;

namespace {

using P3 = std::array<double, 3>;

double f3_of(const P3& p) { return f3(p[0], p[1], p[2]); }

std::vector<P3> sample_points() {
  std::vector<P3> pts{{1.0, 1.0, 1.0}, {1.3, 0.7, -0.2}, {2.1, 0.4, 0.9}, {0.6, 1.5, 0.05}};
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(0.2, 3.0);
  for (int n = 0; n < 4; ++n) pts.push_back({u(rng), u(rng), u(rng)});
  return pts;
}

}  // namespace

TEST(Jet, ReciprocalAndLogDerivatives) {
  using J = Jet<2, 4>;
  const J x = J::variable(0, 0.7);
  const J y = J::variable(1, 1.9);
  const J r = reciprocal(x + y);
  const J l = log(x * y);
  const double s = 2.6;
  // d^4/dx^2 dy^2 of 1/(x + y) = 24 / s^5
  EXPECT_NEAR(r.derivative({2, 2}), 24.0 / std::pow(s, 5), 1e-12);
  EXPECT_NEAR(r.derivative({1, 0}), -1.0 / (s * s), 1e-14);
  EXPECT_NEAR(l.derivative({3, 0}), 2.0 / std::pow(0.7, 3), 1e-11);
  EXPECT_NEAR(l.derivative({1, 1}), 0.0, 1e-14);
  EXPECT_NEAR(pow(x, 3).derivative({2, 0}), 6.0 * 0.7, 1e-14);
}

TEST(F3, Values) {
  EXPECT_DOUBLE_EQ(f3(1, 1, 1), 0.5);
  EXPECT_DOUBLE_EQ(f3(2, 2, 0), 0.25);
  EXPECT_NEAR(f3(1, 2, 3), 4.0 / 60.0, 1e-16);
}

TEST(F3, DivergentPairSumThrows) {
  EXPECT_THROW(f3(1, -1, 2), DomainError);
  EXPECT_THROW(f3(0, 0, 1), DomainError);
}

TEST(F3, TotallySymmetric) {
  for (P3 p : sample_points()) {
    const double ref = f3_of(p);
    std::sort(p.begin(), p.end());
    do {
      EXPECT_NEAR(f3_of(p), ref, 1e-15 * ref);
    } while (std::next_permutation(p.begin(), p.end()));
  }
}

TEST(G3, ZeroOrderIsF3) {
  EXPECT_DOUBLE_EQ(g3({0, 0, 0}, 1, 1, 1), 0.5);
  for (const P3& p : sample_points()) EXPECT_NEAR(g3({0, 0, 0}, p[0], p[1], p[2]), f3_of(p), 1e-15 * f3_of(p));
}

TEST(G3, MatchesFiniteDifferencesUpToOrderThree) {
  const std::function<double(const P3&)> f = f3_of;
  for (const P3& p : sample_points()) {
    for (int i = 0; i <= 3; ++i)
      for (int j = 0; i + j <= 3; ++j)
        for (int k = 0; i + j + k <= 3; ++k) {
          const int n = i + j + k;
          const double fd = (n % 2 ? -1.0 : 1.0) * test_support::richardson_difference<3>(f, p, {i, j, k}, 1e-2);
          EXPECT_LT(rel_error(g3({i, j, k}, p[0], p[1], p[2]), fd), 1e-6)
              << "order (" << i << "," << j << "," << k << ") at " << p[0] << "," << p[1] << "," << p[2];
        }
  }
}

TEST(G3, MatchesQuadrature) {
  const double q = oracle::quad3_monomial(1, 1, 1, {2, 2, 2}).value;
  EXPECT_LT(rel_error(g3({1, 1, 1}, 2, 2, 2), q), 1e-8);
  const double q2 = oracle::quad3_monomial(2, 0, 3, {0.9, 1.4, 0.3}).value;
  EXPECT_LT(rel_error(g3({2, 0, 3}, 0.9, 1.4, 0.3), q2), 1e-8);
}

TEST(G3, OrderLimit) {
  EXPECT_THROW(g3({kMaxOrder, 1, 0}, 1, 1, 1), OrderError);
  EXPECT_THROW(g3({-1, 0, 0}, 1, 1, 1), OrderError);
}

TEST(Overlap3, DefinitionAndSymmetry) {
  EXPECT_DOUBLE_EQ(overlap3({1, 1, 0}, {1, 1, 0}), g3({1, 1, 1}, 2, 2, 0));
  EXPECT_DOUBLE_EQ(overlap3({1, 2, 3}, {3, 2, 1}), overlap3({3, 2, 1}, {1, 2, 3}));
}

TEST(Coulomb3, RepulsionOnProductState) {
  for (double z : {1.0, 2.0, 3.5}) {
    const ExpTerm3 t{z, z, 0};
    EXPECT_NEAR(coulomb3(Pair::k12, t, t) / overlap3(t, t), 5.0 * z / 8.0, 1e-14 * z);
  }
  EXPECT_DOUBLE_EQ(coulomb3(Pair::k12, {1, 1, 1}, {1, 1, 1}), g3({1, 1, 0}, 2, 2, 2));
}

TEST(Coulomb3, HydrogenicNuclearAttraction) {
  for (double a : {0.3, 1.0, 2.5}) {
    const ExpTerm3 t{a, 0.8, 0};
    EXPECT_NEAR(coulomb3(Pair::k13, t, t) / overlap3(t, t), a, 1e-14 * a);
    EXPECT_NEAR(coulomb3(Pair::k23, t, t) / overlap3(t, t), 0.8, 1e-14);
  }
}

TEST(Coulomb3, AgreesWithShellIntegral) {
  for (double z : {1.0, 2.0}) {
    const ExpTerm3 t{z, z, 0};
    EXPECT_NEAR(coulomb3(Pair::k12, t, t) / overlap3(t, t), oracle::gauss_shell_e1(z), 1e-9);
  }
}

TEST(Kinetic3, HydrogenicIdentity) {
  for (double a : {0.4, 1.0, 3.0}) {
    const ExpTerm3 t{a, 1.1, 0};
    EXPECT_NEAR(kinetic3(Particle::kElectron1, t, t) / overlap3(t, t), a * a, 1e-13 * a * a);
  }
}

TEST(Kinetic3, GenericTermMatchesQuadrature) {
  const ExpTerm3 t{1.0, 0.5, 0.3};
  const auto q = oracle::quad_pair_elements3(plain(t), plain(t), Sector::kNatural);
  EXPECT_LT(rel_error(kinetic3(Particle::kElectron1, t, t), q.grad1), 1e-8);
  EXPECT_LT(rel_error(kinetic3(Particle::kElectron2, t, t), q.grad2), 1e-8);
}

TEST(Kinetic3, Hermitian) {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(0.1, 2.0);
  for (int n = 0; n < 10; ++n) {
    const ExpTerm3 t{u(rng), u(rng), u(rng) - 0.09};
    const ExpTerm3 tp{u(rng), u(rng), u(rng) - 0.09};
    for (Particle p : {Particle::kElectron1, Particle::kElectron2, Particle::kCentral})
      EXPECT_NEAR(kinetic3(p, t, tp), kinetic3(p, tp, t), 1e-13 * std::abs(kinetic3(p, t, tp)));
  }
}

TEST(HughesEckart, VanishesWithoutCorrelation) {
  EXPECT_NEAR(hughes_eckart3({1.0, 0.3, 0.0}, {1.0, 0.3, 0.0}), 0.0, 1e-14);
  EXPECT_NEAR(hughes_eckart3({1.0, 0.3, 0.0}, {0.3, 1.0, 0.0}), 0.0, 1e-14);
}

TEST(Elements3, RandomPairsMatchQuadrature) {
  const std::array<std::pair<ExpTerm3, ExpTerm3>, 2> pairs{{
      {{0.9, 0.35, 0.12}, {1.4, 0.6, -0.05}},
      {{0.7, 0.7, 0.3}, {0.45, 1.2, 0.0}},
  }};
  for (Sector sector : {Sector::kNatural, Sector::kUnnatural}) {
    for (const auto& [t, tp] : pairs) {
      const auto f = symmetrized(t, +1);
      const auto g = symmetrized(tp, +1);
      const auto a = pair_elements(f, g, sector);
      const auto q = oracle::quad_pair_elements3(f, g, sector);
      EXPECT_LT(rel_error(a.overlap, q.overlap), 1e-8);
      EXPECT_LT(rel_error(a.inv_r1, q.inv_r1), 1e-8);
      EXPECT_LT(rel_error(a.inv_r2, q.inv_r2), 1e-8);
      EXPECT_LT(rel_error(a.inv_r12, q.inv_r12), 1e-8);
      EXPECT_LT(rel_error(a.grad1, q.grad1), 1e-8);
      EXPECT_LT(rel_error(a.grad2, q.grad2), 1e-8);
      EXPECT_LT(std::abs(a.grad12 - q.grad12), 1e-8 * std::max(1.0, std::abs(q.grad12)));
    }
  }
}

TEST(Chandrasekhar, UnitRanges) {
  const NTV e = chandrasekhar_ntv(1, 1, 1, +1);
  EXPECT_DOUBLE_EQ(e.n, 0.25);
  EXPECT_DOUBLE_EQ(e.t, 0.25);
  EXPECT_NEAR(e.energy(), -0.375, 1e-15);
}

TEST(Chandrasekhar, MatchesGeneralAssembly) {
  for (int eps : {+1, -1})
    for (auto [a, b] : {std::pair{1.04, 0.28}, std::pair{2.0, 0.7}}) {
      const NTV c = chandrasekhar_ntv(a, b, 2.0, eps);
      const MatBlock m = natural_matblock({{a, b, 0}}, SystemSpec::atom(2.0, eps));
      EXPECT_LT(rel_error(m.n_mat(0, 0), c.n), 1e-13);
      EXPECT_LT(rel_error(m.t_mat(0, 0), c.t), 1e-13);
      EXPECT_LT(rel_error(m.v_mat(0, 0), c.v), 1e-13);
    }
}

TEST(Chandrasekhar, ExchangeSymmetry) {
  for (int eps : {+1, -1}) {
    const NTV x = chandrasekhar_ntv(1.3, 0.4, 1.0, eps);
    const NTV y = chandrasekhar_ntv(0.4, 1.3, 1.0, eps);
    EXPECT_DOUBLE_EQ(x.n, y.n);
    EXPECT_DOUBLE_EQ(x.t, y.t);
    EXPECT_NEAR(x.v, y.v, 1e-15 * std::abs(x.v));
  }
  for (double a : {0.5, 1.0, 2.0}) EXPECT_EQ(chandrasekhar_ntv(a, a, 1.0, -1).n, 0.0);
}

TEST(Chandrasekhar, EqualRangesReduceToEffectiveCharge) {
  for (double z : {1.0, 2.0})
    for (double alpha : {0.5, 1.0, z - 5.0 / 16.0}) {
      const double expected = alpha * alpha - 2 * z * alpha + 5 * alpha / 8;
      EXPECT_NEAR(chandrasekhar_ntv(alpha, alpha, z, +1).energy(), expected, 1e-13);
    }
  EXPECT_NEAR(chandrasekhar_ntv(2 - 5.0 / 16, 2 - 5.0 / 16, 2, +1).energy(), -std::pow(2 - 5.0 / 16, 2), 1e-13);
}

TEST(Chandrasekhar, ReducedEnergyIsScaleInvariant) {
  for (double lambda : {0.3, 1.7, 12.0}) {
    const NTV e = chandrasekhar_ntv(1.1, 0.3, 1.0, +1);
    const NTV s = chandrasekhar_ntv(1.1 * lambda, 0.3 * lambda, 1.0, +1);
    EXPECT_LT(rel_error(solve::virial_reduce(s.n, s.t, s.v).energy, solve::virial_reduce(e.n, e.t, e.v).energy),
              1e-13);
  }
  const MatBlock b1 = natural_matblock({{0.9, 0.3, 0.2}}, SystemSpec::atom(1.0));
  const MatBlock b2 = natural_matblock({{2.7, 0.9, 0.6}}, SystemSpec::atom(1.0));
  const double e1 = solve::virial_reduce(b1.n_mat(0, 0), b1.t_mat(0, 0), b1.v_mat(0, 0)).energy;
  const double e2 = solve::virial_reduce(b2.n_mat(0, 0), b2.t_mat(0, 0), b2.v_mat(0, 0)).energy;
  EXPECT_LT(rel_error(e2, e1), 1e-13);
}

TEST(ClosedForms, EffectiveCharge) {
  EXPECT_NEAR(energy_effective_charge(2).energy, -2.84765625, 1e-12);
  EXPECT_NEAR(energy_effective_charge(1).energy, -0.47265625, 1e-12);
  EXPECT_DOUBLE_EQ(energy_effective_charge(2).alpha, 2 - 5.0 / 16);
  // Binding E < -Z^2/2 starts near Z = 1.067.
  EXPECT_GT(energy_effective_charge(1.066).energy, -0.5 * 1.066 * 1.066);
  EXPECT_LT(energy_effective_charge(1.068).energy, -0.5 * 1.068 * 1.068);
}

TEST(ClosedForms, Perturbative) {
  EXPECT_DOUBLE_EQ(perturbative_e(2), -2.75);
  EXPECT_DOUBLE_EQ(perturbative_e(1), -0.375);
  EXPECT_GT(perturbative_e(1.249), -0.5 * 1.249 * 1.249);
  EXPECT_LT(perturbative_e(1.251), -0.5 * 1.251 * 1.251);
}

TEST(ShellModel, UnrestrictedNotAboveRestricted) {
  for (double z : {2.0, 3.0, 4.0, 8.0})
    EXPECT_LE(solve::optimize_shellmodel_unrestricted(z).energy, solve::optimize_shellmodel(z).energy + 1e-12) << z;
}

TEST(ShellModel, NormalizedAndAboveTripletLimit) {
  // With a = b the normalized 1s and 2s orbitals are orthogonal, so the
  // norm does not depend on the common range.
  const NTV e = shellmodel_ntv(2.0, 2.0, 2.0);
  const NTV f = shellmodel_ntv(1.0, 1.0, 2.0);
  EXPECT_LT(rel_error(e.n, f.n), 1e-12);
  EXPECT_GT(e.energy(), -2.17523);
  EXPECT_THROW(shellmodel_ntv(0.0, 1.0, 2.0), DomainError);
}

TEST(MinMax, EqualRangesReduceToProduct) {
  for (double alpha : {0.6, 1.0, 1.7}) {
    const NTV e = minmax_ntv(alpha, alpha, 1.0);
    EXPECT_NEAR(e.energy(), alpha * alpha - 2 * alpha + 5 * alpha / 8, 1e-13);
  }
}

TEST(MinMax, NormAndPotentialMatchQuadrature) {
  const double a = 1.0, b = 0.3;
  const NTV e = minmax_ntv(a, b, 1.0);
  const oracle::Fn3 vol = [](double x, double y, double z) { return x * y * z; };
  const oracle::Fn3 pot = [](double x, double y, double z) { return x * y * z * (-1 / x - 1 / y + 1 / z); };
  const double n = oracle::quad3_split(vol, {2 * a, 2 * b, 0}, vol, {2 * b, 2 * a, 0}).value;
  const double v = oracle::quad3_split(pot, {2 * a, 2 * b, 0}, pot, {2 * b, 2 * a, 0}).value;
  EXPECT_LT(rel_error(e.n, n), 1e-8);
  EXPECT_LT(rel_error(e.v, v), 1e-8);
}

TEST(MinMax, OptimumAboveChandrasekhar) {
  const double e = solve::optimize_minmax(1.0).energy;
  EXPECT_NEAR(e, -0.506, 1e-3);
  EXPECT_GT(e, solve::optimize_chandrasekhar(1.0, +1).energy);
}

TEST(Unnatural, SingleTermNeverBinds) {
  const auto spec = SystemSpec::atom(1.0, +1, Sector::kUnnatural);
  for (ExpTerm3 t : {ExpTerm3{1.0, 0.3, 0.1}, ExpTerm3{0.5, 0.5, 0.0}, ExpTerm3{1.2, 0.25, -0.05},
                     ExpTerm3{1.0, 0.5, 0.02}}) {
    const MatBlock m = unnatural_matblock({t}, spec);
    EXPECT_GT(m.t_mat(0, 0) + m.v_mat(0, 0), -0.125 * m.n_mat(0, 0));
  }
}

TEST(Unnatural, RequiresUnnaturalSector) {
  EXPECT_THROW(unnatural_matblock({{1, 0.5, 0}}, SystemSpec::atom(1.0)), DomainError);
}

TEST(MatBlock, SymmetricAndPositiveDefinite) {
  const std::vector<ExpTerm3> terms{{1.2, 0.3, 0.1}, {0.8, 0.5, 0.0}, {2.0, 0.9, 0.4}};
  for (Sector sector : {Sector::kNatural, Sector::kUnnatural}) {
    const auto spec = SystemSpec::atom(1.0, +1, sector);
    const MatBlock m = sector == Sector::kNatural ? natural_matblock(terms, spec) : unnatural_matblock(terms, spec);
    EXPECT_LT((m.n_mat - m.n_mat.transpose()).norm(), 1e-14 * m.n_mat.norm());
    EXPECT_LT((m.t_mat - m.t_mat.transpose()).norm(), 1e-14 * m.t_mat.norm());
    EXPECT_LT((m.v_mat - m.v_mat.transpose()).norm(), 1e-14 * m.v_mat.norm());
    EXPECT_EQ(Eigen::LLT<Eigen::MatrixXd>(m.n_mat).info(), Eigen::Success);
  }
}
