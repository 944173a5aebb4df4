#pragma once

// Domain types shared by the matrix-element and solver modules.
//
// Natural units throughout: m = hbar = e^2 = 1, energies in units of
// m e^4 / hbar^2 and lengths in Bohr radii of a particle of mass m.
// An infinitely heavy particle is encoded by inverse mass 0.

#include <Eigen/Dense>

#include <optional>
#include <string>
#include <vector>

namespace fewbody {

inline constexpr double kHartreeEv = 27.211;

enum class Sector { kNatural, kUnnatural };

/// Hamiltonian instance.
///
/// Three-body: particle order [central, electron 1, electron 2]; the central
/// charge is +z_central, both electrons carry -1.
/// Four-body: particle order [+, +, -, -] with unit charges.
struct SystemSpec {
  std::optional<double> z_central;
  std::vector<double> inv_masses;
  int epsilon = +1;
  Sector sector = Sector::kNatural;
  std::vector<int> charges;

  static SystemSpec three_body(double z, double inv_mass_central, double inv_mass_1 = 1.0,
                               double inv_mass_2 = 1.0, int epsilon = +1,
                               Sector sector = Sector::kNatural);
  /// Fixed central charge with infinite mass and unit-mass electrons.
  static SystemSpec atom(double z, int epsilon = +1, Sector sector = Sector::kNatural) {
    return three_body(z, 0.0, 1.0, 1.0, epsilon, sector);
  }
  /// Particles (+, +, -, -) with the given inverse masses.
  static SystemSpec four_body(double inv_m1, double inv_m2, double inv_m3, double inv_m4);

  bool is_four_body() const { return inv_masses.size() == 4; }
  double z() const { return z_central.value_or(1.0); }

  /// Throws DomainError when an invariant is violated.
  void validate() const;
};

/// exp(-a r1 - b r2 - c r12): r1, r2 electron-center distances, r12 the
/// electron-electron distance.
struct ExpTerm3 {
  double a = 0.0;
  double b = 0.0;
  double c = 0.0;

  ExpTerm3 exchanged() const { return {b, a, c}; }
  ExpTerm3 scaled(double s) const { return {a * s, b * s, c * s}; }
  bool admissible() const { return a + b > 0.0 && b + c > 0.0 && c + a > 0.0; }
  friend ExpTerm3 operator+(const ExpTerm3& l, const ExpTerm3& r) { return {l.a + r.a, l.b + r.b, l.c + r.c}; }
  friend bool operator==(const ExpTerm3&, const ExpTerm3&) = default;
};

/// exp(-a r13 - b r14 - c r23 - d r24) with particles 1, 2 positive and
/// 3, 4 negative.
struct ExpTerm4 {
  double a = 0.0;
  double b = 0.0;
  double c = 0.0;
  double d = 0.0;

  ExpTerm4 scaled(double s) const { return {a * s, b * s, c * s, d * s}; }
  /// Image under exchange of the two positive particles.
  ExpTerm4 swap_positive() const { return {c, d, a, b}; }
  /// Image under exchange of the two negative particles.
  ExpTerm4 swap_negative() const { return {b, a, d, c}; }
  /// Image under the relabeling 1<->3, 2<->4 (positive and negative roles
  /// interchanged).
  ExpTerm4 conjugate() const { return {a, c, b, d}; }
  friend bool operator==(const ExpTerm4&, const ExpTerm4&) = default;
};

/// Overlap, kinetic and potential matrices over a basis.
struct MatBlock {
  Eigen::MatrixXd n_mat;
  Eigen::MatrixXd t_mat;
  Eigen::MatrixXd v_mat;

  explicit MatBlock(Eigen::Index size = 0)
      : n_mat(Eigen::MatrixXd::Zero(size, size)),
        t_mat(Eigen::MatrixXd::Zero(size, size)),
        v_mat(Eigen::MatrixXd::Zero(size, size)) {}
  Eigen::Index size() const { return n_mat.rows(); }
  Eigen::MatrixXd hamiltonian() const { return t_mat + v_mat; }
};

struct TwoBodyThreshold {
  double mu = 0.0;        ///< reduced mass of the binding pair
  double e_ground = 0.0;  ///< lowest dissociation energy, ground-state atom(s)
  double e_2p = 0.0;      ///< e_ground / 4
  std::string label;

  double relevant(Sector sector) const { return sector == Sector::kUnnatural ? e_2p : e_ground; }
};

struct VariationalResult {
  double energy = 0.0;
  std::vector<double> params;
  std::vector<double> coeffs;
  double virial_ratio = 0.0;
  TwoBodyThreshold threshold;
  double threshold_energy = 0.0;
  double margin = 0.0;
  bool stable = false;
  int iterations = 0;
  bool converged = true;
};

/// Energy must undercut the threshold by more than this to count as bound.
inline constexpr double kStabilityTolerance = 1e-6;

TwoBodyThreshold threshold_for(const SystemSpec& spec);

/// Two-body ground-state energy -q^2 mu / 2 for inverse masses inv_m1, inv_m2.
double two_body_energy(double inv_m1, double inv_m2, double charge_product = 1.0);

double natural_to_ev(double energy);

/// Fill threshold, margin and stability verdict from `energy`.
void apply_threshold(VariationalResult& result, const SystemSpec& spec);

}  // namespace fewbody
