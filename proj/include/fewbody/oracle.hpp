#pragma once

// Independent numerical checks: tensor-product quadrature of the few-body
// integrals, the 1/Z series and the Gauss-theorem shell integral.
//
// Quadrature results use the same normalization as the analytic generating
// functions: quad3 returns twice the integral over the triangle domain (so
// that quad3 of 1 with ranges (1, 1, 1) equals F3(1, 1, 1) = 1/2) and quad4
// returns four times the five-dimensional integral. Nothing here calls the
// jet machinery, so agreement with matel3/matel4 is a genuine cross-check.

#include <array>
#include <functional>
#include <string>
#include <vector>

#include "fewbody/matel3.hpp"
#include "fewbody/model.hpp"

namespace fewbody::oracle {

struct QuadOptions {
  int nodes = 64;      ///< nodes per dimension
  bool check = false;  ///< also evaluate with doubled nodes
};

struct QuadResult {
  double value = 0.0;
  double rel_change = 0.0;  ///< |Q(2n) - Q(n)| / |Q(2n)| when checked
  bool converged = true;    ///< rel_change <= kConvergenceTolerance
};

inline constexpr double kConvergenceTolerance = 1e-9;

/// f(x, y, z) is integrated against exp(-alpha x - beta y - gamma z) over
/// |x - y| <= z <= x + y (no volume element implied).
using Fn3 = std::function<double(double x, double y, double z)>;

QuadResult quad3(const Fn3& f, const std::array<double, 3>& ranges, QuadOptions opts = {});

/// Weights that differ on the two sides of x = y: `lower` with its ranges
/// on x < y, `upper` on x > y.
QuadResult quad3_split(const Fn3& lower, const std::array<double, 3>& lower_ranges, const Fn3& upper,
                       const std::array<double, 3>& upper_ranges, QuadOptions opts = {});

/// x^i y^j z^k against the exponential.
QuadResult quad3_monomial(int i, int j, int k, const std::array<double, 3>& ranges, QuadOptions opts = {});

struct Distances4 {
  double r12 = 0.0;
  double r13 = 0.0;
  double r23 = 0.0;
  double r14 = 0.0;
  double r24 = 0.0;
};

using Fn4 = std::function<double(const Distances4&)>;

/// f integrated against exp(-a r13 - b r23 - c r14 - d r24 - u r12) over the
/// two triangles sharing r12 (no volume element implied). Argument order
/// follows F4.
QuadResult quad4(const Fn4& f, double a, double b, double c, double d, double u, QuadOptions opts = {16, false});

/// Pointwise <grad f . grad g> integrands from Cartesian finite differences
/// on an explicit configuration with sides (x, y, z), exponentials included.
/// In the unnatural sector both functions carry (r1 x r2)_i summed over i.
struct Gradients3 {
  double grad1 = 0.0;
  double grad2 = 0.0;
  double grad12 = 0.0;  ///< grad_1 f . grad_2 g + grad_2 f . grad_1 g
};
Gradients3 cartesian_gradients3(const matel3::BasisFn3& f, const matel3::BasisFn3& g, Sector sector, double x,
                                double y, double z);

/// Pointwise f g (summed over (r1 x r2)_i in the unnatural sector),
/// exponentials included.
double cartesian_product3(const matel3::BasisFn3& f, const matel3::BasisFn3& g, Sector sector, double x, double y,
                          double z);

/// All operator elements of matel3::pair_elements, by quad3 of the
/// Cartesian integrands.
matel3::PairElements quad_pair_elements3(const matel3::BasisFn3& f, const matel3::BasisFn3& g, Sector sector,
                                         QuadOptions opts = {48, false});

/// <grad_i t . grad_i t'> for particle i in 0..3, from the explicit
/// Cartesian gradients averaged over the dihedral angle between the
/// triangles (1, 2, 3) and (1, 2, 4); exponentials excluded.
double cartesian_grad4(int particle, const ExpTerm4& t, const ExpTerm4& tp, const Distances4& r);

/// Elements of matel4::pair_elements4 by quad4. Gradients use the explicit
/// Cartesian form; 1/r34 is integrated in the frame built on the 3-4 axis.
struct QuadElements4 {
  double overlap = 0.0;
  std::array<double, 4> grad{};
  double inv_r12 = 0.0;
  double inv_r34 = 0.0;
  double inv_r13 = 0.0;
};
QuadElements4 quad_pair_elements4(const ExpTerm4& t, const ExpTerm4& tp, QuadOptions opts = {16, false});

struct ZExpansion {
  double energy = 0.0;
  bool near_radius = false;  ///< 1/Z within 10% of the radius of convergence
};

inline constexpr double kZExpansionRadius = 1.098;

/// -Z^2 sum_{k<=order} e_k Z^-k with the tabulated coefficients.
ZExpansion zexp_partial(double z, int order);

/// First-order electron repulsion <1/r12> for two hydrogenic 1s electrons
/// of charge z, from the radial shell integral with 1/max(r1, r2).
double gauss_shell_e1(double z);

/// One named analytic-versus-quadrature pairing.
struct ValidationCase {
  std::string name;
  std::string description;
  std::function<double()> analytic;
  std::function<double()> quadrature;
  double tolerance = 1e-8;  ///< relative
};

struct CaseReport {
  std::string name;
  double analytic = 0.0;
  double quadrature = 0.0;
  double rel_error = 0.0;
  double tolerance = 0.0;
  bool passed = false;
};

const std::vector<ValidationCase>& manifest();

/// True when `filter` is empty, a substring of `name`, or a glob matching
/// `name` or one of its dotted suffixes ("f4*" matches "quad4.f4_u").
bool case_matches(const std::string& name, const std::string& filter);

/// Runs the matching cases concurrently.
std::vector<CaseReport> run_validation(const std::string& filter = "");

/// "PASS name rel_err=... tol=..." style line.
std::string format_report(const CaseReport& r);

}  // namespace fewbody::oracle
