#pragma once

// Closed-form three-body matrix elements.
//
// Every element is an integral over the interparticle distances
// x = r1, y = r2, z = r12 restricted by |x - y| <= z <= x + y, with the
// volume element x y z dx dy dz. The trivial angular factor 8 pi^2 is
// omitted everywhere; it cancels in every Rayleigh quotient.
//
// All integrals reduce to moments of the generating function
//   F3(alpha, beta, gamma) = 4 / ((alpha + beta)(beta + gamma)(gamma + alpha)),
// obtained exactly from a truncated Taylor jet of F3. F3 is twice the
// literal integral of exp(-alpha x - beta y - gamma z) over the domain; every
// moment G carries the same factor, which cancels like 8 pi^2.

#include <array>
#include <vector>

#include "fewbody/model.hpp"
#include "fewbody/poly3.hpp"

namespace fewbody::matel3 {

/// Highest total moment order available from a MomentTable.
inline constexpr int kMaxOrder = 9;

struct DerivIndex3 {
  int i = 0;
  int j = 0;
  int k = 0;
  int total() const { return i + j + k; }
};

double f3(double alpha, double beta, double gamma);

/// (-1)^(i+j+k) d^(i+j+k) F3 / d alpha^i d beta^j d gamma^k, i.e. the
/// moment of x^i y^j z^k e^{-alpha x - beta y - gamma z} over the domain.
double g3(DerivIndex3 idx, double alpha, double beta, double gamma);

/// All moments G(i, j, k) with i + j + k <= kMaxOrder at one point.
class MomentTable {
 public:
  MomentTable(double alpha, double beta, double gamma);
  double operator()(int i, int j, int k) const;
  /// Sum of coeff * G over the terms of `p`.
  double integrate(const Poly3& p) const;

 private:
  std::array<double, (kMaxOrder + 1) * (kMaxOrder + 1) * (kMaxOrder + 1)> g_{};
};

/// Polynomial-dressed exponential P(x, y, z) exp(-a x - b y - c z).
struct Dressed3 {
  Poly3 prefactor{1.0};
  ExpTerm3 range;
};

/// A basis function: sum of dressed exponentials.
using BasisFn3 = std::vector<Dressed3>;

/// Integrands (including the volume element) of every operator between two
/// dressed terms. The product exponential carries ranges f.range + g.range.
struct PairIntegrands {
  Poly3 overlap;
  Poly3 inv_r1;
  Poly3 inv_r2;
  Poly3 inv_r12;
  Poly3 grad1;   ///< grad_1 f . grad_1 g
  Poly3 grad2;   ///< grad_2 f . grad_2 g
  Poly3 grad12;  ///< grad_1 f . grad_2 g + grad_2 f . grad_1 g
};

/// In the unnatural sector both functions carry the vector prefactor
/// (r1 x r2)_i and the integrands are summed over the component i.
PairIntegrands pair_integrands(const Dressed3& f, const Dressed3& g, Sector sector);

/// Integrated operator elements between two basis functions.
struct PairElements {
  double overlap = 0.0;
  double inv_r1 = 0.0;
  double inv_r2 = 0.0;
  double inv_r12 = 0.0;
  double grad1 = 0.0;
  double grad2 = 0.0;
  double grad12 = 0.0;

  PairElements& operator+=(const PairElements& o);
  PairElements& operator*=(double s);
  /// Kinetic energy sum_i (1/(2 m_i)) <p_i^2> for the spec's masses.
  double kinetic(const SystemSpec& spec) const;
  double potential(const SystemSpec& spec) const;
};

PairElements pair_elements(const Dressed3& f, const Dressed3& g, Sector sector);
PairElements pair_elements(const BasisFn3& f, const BasisFn3& g, Sector sector);

enum class Pair { k13, k23, k12 };
enum class Particle { kElectron1, kElectron2, kCentral };

double overlap3(const ExpTerm3& t, const ExpTerm3& tp);
double coulomb3(Pair pair, const ExpTerm3& t, const ExpTerm3& tp);
/// <grad_p t | grad_p t'>, equal to <t|p^2|t'> for the gradient form.
double kinetic3(Particle particle, const ExpTerm3& t, const ExpTerm3& tp);
/// Symmetrized <p_x . p_y> cross term between two plain terms.
double hughes_eckart3(const ExpTerm3& t, const ExpTerm3& tp);

/// t + epsilon * exchanged(t) as a two-part basis function.
BasisFn3 symmetrized(const ExpTerm3& t, int epsilon);
BasisFn3 plain(const ExpTerm3& t);

MatBlock assemble3(const std::vector<BasisFn3>& basis, const SystemSpec& spec);
/// Exchange-symmetrized terms t + eps P t. Elements are normalized so that a
/// single term (a, b, 0) reproduces chandrasekhar_ntv exactly.
MatBlock natural_matblock(const std::vector<ExpTerm3>& terms, const SystemSpec& spec);
/// (r1 x r2)_i [t + P t], same normalization as natural_matblock.
MatBlock unnatural_matblock(const std::vector<ExpTerm3>& terms, const SystemSpec& spec);

/// Normalized <p_x . p_y> on the basis vector `coeffs`.
double hughes_eckart_expectation(const std::vector<BasisFn3>& basis, const Eigen::VectorXd& coeffs,
                                 Sector sector);

struct NTV {
  double n = 0.0;
  double t = 0.0;
  double v = 0.0;
  double energy() const { return (t + v) / n; }
};

/// Closed forms for exp(-a r1 - b r2) + eps exp(-b r1 - a r2).
NTV chandrasekhar_ntv(double a, double b, double z, int epsilon);

struct EffectiveCharge {
  double energy;
  double alpha;
};
EffectiveCharge energy_effective_charge(double z);
double perturbative_e(double z);

/// Antisymmetrized (1s)(2s) product with 1s range a and 2s range b.
NTV shellmodel_ntv(double a, double b, double z);
/// exp(-a min(r1, r2) - b max(r1, r2)).
NTV minmax_ntv(double a, double b, double z);

}  // namespace fewbody::matel3
