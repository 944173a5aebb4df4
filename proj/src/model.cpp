#include "fewbody/model.hpp"

#include <cmath>
#include <numeric>

#include "fewbody/errors.hpp"

namespace fewbody {

SystemSpec SystemSpec::three_body(double z, double inv_mass_central, double inv_mass_1,
                                  double inv_mass_2, int epsilon, Sector sector) {
  SystemSpec s;
  s.z_central = z;
  s.inv_masses = {inv_mass_central, inv_mass_1, inv_mass_2};
  s.epsilon = epsilon;
  s.sector = sector;
  s.validate();
  return s;
}

SystemSpec SystemSpec::four_body(double inv_m1, double inv_m2, double inv_m3, double inv_m4) {
  SystemSpec s;
  s.inv_masses = {inv_m1, inv_m2, inv_m3, inv_m4};
  s.charges = {+1, +1, -1, -1};
  s.validate();
  return s;
}

void SystemSpec::validate() const {
  if (epsilon != 1 && epsilon != -1) throw DomainError("epsilon must be +1 or -1");
  for (double m : inv_masses)
    if (!(m >= 0.0) || !std::isfinite(m)) throw DomainError("inverse masses must be finite and >= 0");
  if (inv_masses.size() == 3) {
    if (!z_central || !(*z_central > 0.0)) throw DomainError("three-body spec needs a positive central charge");
    if (inv_masses[1] == 0.0 || inv_masses[2] == 0.0) throw DomainError("electrons must have finite mass");
  } else if (inv_masses.size() == 4) {
    if (charges.size() != 4) throw DomainError("four-body spec needs four charges");
    if (std::accumulate(charges.begin(), charges.end(), 0) != 0) throw DomainError("four-body spec must be neutral");
    if (charges[0] != 1 || charges[1] != 1 || charges[2] != -1 || charges[3] != -1)
      throw DomainError("four-body particle order must be (+, +, -, -) with unit charges");
    if (sector != Sector::kNatural) throw DomainError("four-body unnatural sector is not supported");
  } else {
    throw DomainError("spec must have three or four particles");
  }
}

double two_body_energy(double inv_m1, double inv_m2, double charge_product) {
  const double inv_mu = inv_m1 + inv_m2;
  return -charge_product * charge_product / (2.0 * inv_mu);
}

TwoBodyThreshold threshold_for(const SystemSpec& spec) {
  spec.validate();
  TwoBodyThreshold th;
  if (!spec.is_four_body()) {
    const double z = spec.z();
    // The heavier electron (smaller inverse mass) binds more deeply.
    const int bound = spec.inv_masses[1] <= spec.inv_masses[2] ? 1 : 2;
    th.mu = 1.0 / (spec.inv_masses[0] + spec.inv_masses[bound]);
    th.e_ground = -z * z * th.mu / 2.0;
    th.e_2p = th.e_ground / 4.0;
    th.label = spec.sector == Sector::kUnnatural ? "atom(2p) + free electron" : "atom(1s) + free electron";
    return th;
  }
  const auto& m = spec.inv_masses;
  const double pair_13_24 = two_body_energy(m[0], m[2]) + two_body_energy(m[1], m[3]);
  const double pair_14_23 = two_body_energy(m[0], m[3]) + two_body_energy(m[1], m[2]);
  if (pair_13_24 <= pair_14_23) {
    th.e_ground = pair_13_24;
    th.mu = std::max(1.0 / (m[0] + m[2]), 1.0 / (m[1] + m[3]));
    th.label = "atom(13) + atom(24)";
  } else {
    th.e_ground = pair_14_23;
    th.mu = std::max(1.0 / (m[0] + m[3]), 1.0 / (m[1] + m[2]));
    th.label = "atom(14) + atom(23)";
  }
  th.e_2p = th.e_ground / 4.0;
  return th;
}

double natural_to_ev(double energy) { return energy * kHartreeEv; }

void apply_threshold(VariationalResult& result, const SystemSpec& spec) {
  result.threshold = threshold_for(spec);
  result.threshold_energy = result.threshold.relevant(spec.sector);
  result.margin = (result.threshold_energy - result.energy) / std::abs(result.threshold_energy);
  result.stable = result.energy < result.threshold_energy - kStabilityTolerance;
}

}  // namespace fewbody
