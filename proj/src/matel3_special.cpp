#include <cmath>
#include <numbers>

#include "fewbody/errors.hpp"
#include "fewbody/matel3.hpp"

namespace fewbody::matel3 {

namespace {

double factorial(int n) {
  double f = 1.0;
  for (int i = 2; i <= n; ++i) f *= i;
  return f;
}

// Integral over 0 <= r1 <= r2 of r1^m r2^n exp(-alpha r1 - beta r2).
// Integrating r2 first gives a sum of positive terms.
double ordered_radial(int m, int n, double alpha, double beta) {
  double s = 0.0;
  for (int k = 0; k <= n; ++k)
    s += factorial(n) / (factorial(k) * std::pow(beta, n - k + 1)) * factorial(m + k) /
         std::pow(alpha + beta, m + k + 1);
  return s;
}

}  // namespace

NTV chandrasekhar_ntv(double a, double b, double z, int epsilon) {
  if (!(a > 0.0) || !(b > 0.0)) throw DomainError("chandrasekhar_ntv needs a > 0 and b > 0");
  const double e = epsilon;
  const double s = a + b;
  NTV r;
  r.n = 1.0 / (8.0 * std::pow(a * b, 3)) + 8.0 * e / std::pow(s, 6);
  r.t = 1.0 / (16.0 * a * b * b * b) + 1.0 / (16.0 * a * a * a * b) + 8.0 * a * b * e / std::pow(s, 6);
  r.v = -z / (8.0 * a * a * b * b * b) - z / (8.0 * a * a * a * b * b) - 8.0 * z * e / std::pow(s, 5) +
        5.0 * e / (2.0 * std::pow(s, 5)) + (a * a + 3.0 * a * b + b * b) / (8.0 * a * a * b * b * s * s * s);
  return r;
}

EffectiveCharge energy_effective_charge(double z) {
  const double alpha = z - 5.0 / 16.0;
  return {-alpha * alpha, alpha};
}

double perturbative_e(double z) { return -z * z + 5.0 * z / 8.0; }

NTV shellmodel_ntv(double a, double b, double z) {
  if (!(a > 0.0) || !(b > 0.0)) throw DomainError("shellmodel_ntv needs a > 0 and b > 0");
  // phi_1s(a, r) = a^{3/2}/sqrt(pi) e^{-a r}
  // phi_2s(b, r) = b^{3/2}/sqrt(8 pi) (1 - b r / 2) e^{-b r / 2}
  const double norm = std::pow(a, 1.5) / std::sqrt(std::numbers::pi) * std::pow(b, 1.5) /
                      std::sqrt(8.0 * std::numbers::pi) / std::sqrt(2.0);
  const Poly3 node_2 = Poly3(1.0) - 0.5 * b * Poly3::y();
  const Poly3 node_1 = Poly3(1.0) - 0.5 * b * Poly3::x();
  const BasisFn3 psi{
      Dressed3{norm * node_2, ExpTerm3{a, 0.5 * b, 0.0}},
      Dressed3{-norm * node_1, ExpTerm3{0.5 * b, a, 0.0}},
  };
  const SystemSpec spec = SystemSpec::atom(z, -1);
  const PairElements e = pair_elements(psi, psi, Sector::kNatural);
  if (e.overlap < 1e-12) throw DegenerateBasisError("shell-model norm below floor");
  return {e.overlap, e.kinetic(spec), e.potential(spec)};
}

NTV minmax_ntv(double a, double b, double z) {
  if (!(a > 0.0) || !(b > 0.0)) throw DomainError("minmax_ntv needs a > 0 and b > 0");
  // Region r1 < r2 (psi = e^{-a r1 - b r2}) doubled by symmetry; the
  // remaining factor 4 converts (4 pi)^2 radial integrals to the F3
  // normalization used by every other three-body element.
  const double alpha = 2.0 * a;
  const double beta = 2.0 * b;
  NTV r;
  r.n = 8.0 * ordered_radial(2, 2, alpha, beta);
  // Gradient form: |grad_1 psi|^2 + |grad_2 psi|^2 = (a^2 + b^2) psi^2 in
  // each region; the kink at r1 = r2 contributes nothing.
  r.t = 0.5 * (a * a + b * b) * r.n;
  const double nuclear = 8.0 * (ordered_radial(1, 2, alpha, beta) + ordered_radial(2, 1, alpha, beta));
  // Angular average of 1/r12 is 1/max(r1, r2) = 1/r2 in this region.
  const double repulsion = 8.0 * ordered_radial(2, 1, alpha, beta);
  r.v = -z * nuclear + repulsion;
  return r;
}

}  // namespace fewbody::matel3
