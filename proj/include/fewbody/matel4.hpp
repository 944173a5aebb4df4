#pragma once

// Four-body matrix elements for two positive (1, 2) and two negative (3, 4)
// unit charges.
//
// Integrals run over r12, r13, r23, r14, r24 with the volume element
// r13 r23 r14 r24 (the dihedral angle fixing r34 integrates trivially for
// operators independent of r34). Everything derives from
//
//   F4(a, b, c, d, u) = 16 / ((a - b)(a + b)(c - d)(c + d))
//                        * log[(b + c + u)(a + d + u) / ((a + c + u)(b + d + u))]
//
// which is the integral of exp(-a r13 - b r23 - c r14 - d r24 - u r12) / r12
// (times 4, the product of the two triangle normalizations). Note the
// argument order: F4 takes (r13, r23, r14, r24) while ExpTerm4 stores
// (r13, r14, r23, r24).
//
// The removable singularities at a = b and c = d are evaluated through a
// power series of the averaged kernel 1 / (S + p s + q t)^2, with
// S = (a + b + c + d)/2 + u, p = (a - b)/2, q = (c - d)/2, s, t in [-1, 1].

#include <array>
#include <vector>

#include "fewbody/model.hpp"

namespace fewbody::matel4 {

/// Highest total derivative order served by g4.
inline constexpr int kMaxOrder = 6;

/// Relative separation |a - b| / (2 S) below which the series branch is used.
inline constexpr double kSeriesThreshold = 0.25;

/// Derivative orders with respect to (a, b, c, d, u) of F4.
struct DerivIndex4 {
  int a = 0;
  int b = 0;
  int c = 0;
  int d = 0;
  int u = 0;
  int total() const { return a + b + c + d + u; }
};

double f4(double a, double b, double c, double d, double u = 0.0);

/// (-1)^total d^total F4 / da^. db^. dc^. dd^. du^. at u = 0: the moment of
/// r13^ia r23^ib r14^ic r24^id r12^(iu - 1) against the exponential.
double g4(DerivIndex4 idx, double a, double b, double c, double d);

/// Operator elements between two plain terms.
struct PairElements4 {
  double overlap = 0.0;
  std::array<double, 4> grad{};  ///< <grad_i t | grad_i t'> for particles 1..4
  double inv_r12 = 0.0;
  double inv_r34 = 0.0;
  double inv_r13 = 0.0;
  double inv_r14 = 0.0;
  double inv_r23 = 0.0;
  double inv_r24 = 0.0;

  PairElements4& operator+=(const PairElements4& o);
  PairElements4& operator*=(double s);
  double kinetic(const SystemSpec& spec) const;
  double potential() const;
};

PairElements4 pair_elements4(const ExpTerm4& t, const ExpTerm4& tp);

/// Images of `t` under the exchanges allowed by the spec's equal masses.
std::vector<ExpTerm4> symmetry_images(const ExpTerm4& t, const SystemSpec& spec);

/// Matrices over the symmetrized functions sum_g g t, g running over the
/// exchanges of equal-mass pairs (sign epsilon per exchange), divided by the
/// group order. With no equal-mass pair the terms are used as given.
MatBlock assemble4(const std::vector<ExpTerm4>& terms, const SystemSpec& spec);

/// assemble4 on hylleraas_ore_term(beta) for Ps2 gives
/// (N, T, V) = kHylleraasOreScale * (n, t, -v) of ho_ntv(beta).
inline constexpr double kHylleraasOreScale = 4.0;

/// v is the magnitude of the (negative) potential energy.
struct HylleraasOre {
  double n = 0.0;
  double t = 0.0;
  double v = 0.0;
  double reduced_energy() const { return -v * v / (4.0 * t * n); }
};

/// Normalization, kinetic and potential energy of
///   exp(-a r13 - b r14 - a r24 - b r23) + (a <-> b),  a + b = 1, a - b = beta.
HylleraasOre ho_ntv(double beta);

/// The Hylleraas-Ore term with a + b = 1 and a - b = beta, i.e.
/// ExpTerm4{a, b, b, a}.
ExpTerm4 hylleraas_ore_term(double beta);

}  // namespace fewbody::matel4
