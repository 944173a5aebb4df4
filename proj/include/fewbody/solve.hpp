#pragma once

// Variational engine: virial reduction, derivative-free minimization, the
// generalized eigenproblem, multi-term optimization and stability scans.

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "fewbody/matel3.hpp"
#include "fewbody/model.hpp"

namespace fewbody::solve {

// ---------------------------------------------------------------- virial

struct VirialResult {
  double energy = 0.0;
  double scale = 1.0;  ///< lambda* multiplying every range parameter
};

/// min over lambda of (lambda^2 T + lambda V) / N: energy -V^2/(4 N T) at
/// lambda* = -V / (2 T). Throws VirialError unless N > 0, T > 0, V < 0.
VirialResult virial_reduce(double n, double t, double v);

// ------------------------------------------------------------- minimizer

enum class ConstraintMode { kReject, kPenalty };

struct MinimizerConfig {
  double f_tol = 1e-10;
  double x_tol = 1e-8;
  int max_iterations = 10000;
  int restarts = 5;
  ConstraintMode constraint_mode = ConstraintMode::kPenalty;
  std::uint64_t seed = 1;
  double initial_step = 0.1;  ///< simplex size relative to max(|x|, 0.1)
};

/// Returned by objectives (or substituted for thrown domain errors) at
/// infeasible points.
inline constexpr double kInfeasible = 1e10;

using Objective = std::function<double(const std::vector<double>&)>;

struct MinimizeResult {
  std::vector<double> params;
  double value = 0.0;
  int iterations = 0;
  bool converged = false;
};

/// Nelder-Mead simplex with restarts from jittered copies of the best point.
/// Objectives may throw DomainError/DegenerateBasisError/VirialError; such
/// points count as infeasible. Throws DomainError if x0 is infeasible.
MinimizeResult minimize(const Objective& objective, const std::vector<double>& x0, const MinimizerConfig& config = {});

/// Brent minimization on [lo, hi].
MinimizeResult minimize_1d(const std::function<double(double)>& objective, double lo, double hi, double x_tol = 1e-10);

// ---------------------------------------------------- generalized eigen

struct GenEigResult {
  Eigen::VectorXd eigenvalues;   ///< ascending
  Eigen::MatrixXd eigenvectors;  ///< columns N-normalized, in the original basis
  int dropped = -1;              ///< index of a term removed for collinearity
};

/// Condition number of the unit-diagonal overlap above which the most
/// collinear term is dropped.
inline constexpr double kMaxCondition = 1e12;

/// (T + V) c = E N c. Throws DegenerateBasisError if the overlap is not
/// positive definite even after dropping one term.
GenEigResult gen_eig(const MatBlock& block);

/// <T> and <V> of the normalized vector c.
struct Expectations {
  double t = 0.0;
  double v = 0.0;
};
Expectations expectations(const MatBlock& block, const Eigen::VectorXd& c);

// -------------------------------------------------- three-body schedules

/// Which of (a_i, b_i, c_i) share a value of the arithmetic series.
enum class TiePattern {
  kNone,       ///< a, b, c consecutive series values
  kBEqualsC,   ///< b_i = c_i
  kAEqualsB,   ///< a_i = b_i
};

/// Range parameters drawn from alpha0, alpha0 + beta0, alpha0 + 2 beta0, ...
struct Schedule {
  double alpha0 = 0.5;
  double beta0 = 0.5;
  int n_terms = 1;
  TiePattern tie_pattern = TiePattern::kNone;
};

inline constexpr int kMaxTerms = 8;

/// Terms of a schedule; a_i is placed on the larger series value so the
/// first electron is the inner one.
std::vector<ExpTerm3> schedule_terms(const Schedule& s);

/// Rows of the N = 1 part of the basis-family table.
enum class IonFamily {
  kFixedCharge,      ///< a = b = Z, c = 0
  kEffectiveCharge,  ///< a = b, c = 0
  kEqualCorrelated,  ///< a = b, c free
  kChandrasekhar,    ///< a != b, c = 0
  kFull,             ///< a != b, c free
};

struct IonOptions {
  int n_terms = 1;
  IonFamily family = IonFamily::kFull;  ///< used for n_terms = 1
  int root = 0;                          ///< 0 ground state, 1 first excitation
  bool refine = true;                    ///< free all parameters after the schedule search
  MinimizerConfig config;
};

/// Optimizes a three-body basis of n_terms exchange-symmetrized (or, in the
/// unnatural sector, (r1 x r2)-dressed) terms for the spec.
VariationalResult optimize_ion(const SystemSpec& spec, const IonOptions& options = {});

/// Matrices of the basis used by optimize_ion for parameters `params` laid
/// out as (a_1, b_1, c_1, a_2, ...).
MatBlock ion_block(const SystemSpec& spec, const std::vector<double>& params);

// ------------------------------------------------ closed-form optimizers

/// Chandrasekhar function with (a, b) = lambda* (1 + x, 1 - x), x in (0, 1).
VariationalResult optimize_chandrasekhar(double z, int epsilon);
/// exp(-a r_< - b r_>) with virial scaling.
VariationalResult optimize_minmax(double z);
/// Antisymmetrized (1s)(2s) with common range a (scale-closed, no search).
VariationalResult optimize_shellmodel(double z);
/// Same function with independent 1s range a and 2s range b.
VariationalResult optimize_shellmodel_unrestricted(double z);
/// Hylleraas-Ore Ps2 over beta; params = {beta}.
VariationalResult optimize_ps2();

// ------------------------------------------------------------------ scans

struct CurvePoint {
  double x = 0.0;
  double energy = 0.0;
};

struct FrozenScan {
  std::vector<CurvePoint> curve;
  CurvePoint minimum;
};

/// E(a = Z, b) on b in [b_lo, b_hi] with `points` samples; the minimum is
/// refined by Brent.
FrozenScan scan_frozen(double z, double b_lo = 0.02, double b_hi = 1.0, int points = 50);

struct ContourGrid {
  std::vector<double> a;
  std::vector<double> b;
  std::vector<std::vector<double>> energy;  ///< energy[i][j] at (a[i], b[j])
};

ContourGrid scan_contour(double z, double a_lo = 0.2, double a_hi = 2.0, double b_lo = 0.05, double b_hi = 1.2,
                         int na = 40, int nb = 40);

enum class ChargeBasis { kChandrasekhar, kEffectiveCharge, kPerturbative };

/// Z at which the optimized energy crosses the atom threshold -Z^2/2.
double scan_charge(ChargeBasis basis, double z_lo = 0.5, double z_hi = 2.0, double tol = 1e-12);

struct Mass3Point {
  double ratio = 0.0;  ///< M/m; infinity allowed
  double energy = 0.0;
  double scaled_reference = 0.0;  ///< (mu/m) E_infinity
  double threshold = 0.0;
  double margin = 0.0;
  double hughes_eckart = 0.0;
  std::vector<double> params;
};

/// Chandrasekhar function on (M+, m-, m-) with the full lab-frame kinetic
/// energy (Hughes-Eckart term included).
std::vector<Mass3Point> scan_mass3(const std::vector<double>& ratios);

struct Asym3Point {
  double inv_m1 = 0.0;
  double inv_m2 = 0.0;
  double energy = 0.0;
  double symmetric_energy = 0.0;  ///< same basis at the average inverse mass
  double threshold = 0.0;
  double margin = 0.0;
  bool stable = false;
};

/// (infinite M, m1, m2) with the two-term basis {e^{-a r1 - b r2}, e^{-b r1 - a r2}}.
std::vector<Asym3Point> scan_asym3(const std::vector<std::pair<double, double>>& inv_masses);

enum class BreakMode { kIdentity, kChargeConjugation };

struct Mass4Point {
  double ratio = 0.0;
  double energy = 0.0;
  double threshold = 0.0;
  double margin = 0.0;
  bool stable = false;
  std::vector<double> params;
};

/// Inverse masses at fixed average inverse mass 1/M + 1/m = 2:
/// identity breaking (M+, m+, M-, m-), charge-conjugation breaking
/// (M+, M+, m-, m-).
SystemSpec mass4_spec(double ratio, BreakMode mode);

VariationalResult optimize_molecule(const SystemSpec& spec, BreakMode mode, const std::vector<double>& start = {},
                                    const MinimizerConfig& config = {});

std::vector<Mass4Point> scan_mass4(const std::vector<double>& ratios, BreakMode mode);

/// Runs f(i) for i in [0, n) on a worker pool; results keep input order.
template <class T>
std::vector<T> parallel_map(std::size_t n, const std::function<T(std::size_t)>& f);

}  // namespace fewbody::solve

#include "fewbody/detail/parallel.hpp"
