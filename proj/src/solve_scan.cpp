#include <cmath>
#include <limits>

#include "fewbody/errors.hpp"
#include "fewbody/matel4.hpp"
#include "fewbody/solve.hpp"

namespace fewbody::solve {

namespace {

double chandrasekhar_energy(double a, double b, double z) {
  const auto ntv = matel3::chandrasekhar_ntv(a, b, z, +1);
  return ntv.energy();
}

// Optimized energy of the basis family at charge z.
double family_energy(ChargeBasis basis, double z) {
  switch (basis) {
    case ChargeBasis::kChandrasekhar:
      return optimize_chandrasekhar(z, +1).energy;
    case ChargeBasis::kEffectiveCharge:
      return matel3::energy_effective_charge(z).energy;
    case ChargeBasis::kPerturbative:
      return matel3::perturbative_e(z);
  }
  throw DomainError("unknown basis");
}

}  // namespace

FrozenScan scan_frozen(double z, double b_lo, double b_hi, int points) {
  if (!(z > 0.0) || !(b_lo > 0.0) || !(b_hi > b_lo) || points < 2) throw DomainError("scan_frozen: bad grid");
  FrozenScan s;
  for (int i = 0; i < points; ++i) {
    const double b = b_lo + (b_hi - b_lo) * i / (points - 1);
    s.curve.push_back({b, chandrasekhar_energy(z, b, z)});
  }
  std::size_t best = 0;
  for (std::size_t i = 1; i < s.curve.size(); ++i)
    if (s.curve[i].energy < s.curve[best].energy) best = i;
  const double lo = s.curve[best == 0 ? 0 : best - 1].x;
  const double hi = s.curve[std::min(best + 1, s.curve.size() - 1)].x;
  const auto m = minimize_1d([z](double b) { return chandrasekhar_energy(z, b, z); }, lo, hi);
  s.minimum = {m.params[0], m.value};
  return s;
}

ContourGrid scan_contour(double z, double a_lo, double a_hi, double b_lo, double b_hi, int na, int nb) {
  if (!(z > 0.0) || !(a_lo > 0.0) || !(b_lo > 0.0) || !(a_hi > a_lo) || !(b_hi > b_lo) || na < 2 || nb < 2)
    throw DomainError("scan_contour: bad grid");
  ContourGrid g;
  for (int i = 0; i < na; ++i) g.a.push_back(a_lo + (a_hi - a_lo) * i / (na - 1));
  for (int j = 0; j < nb; ++j) g.b.push_back(b_lo + (b_hi - b_lo) * j / (nb - 1));
  g.energy = parallel_map<std::vector<double>>(g.a.size(), [&](std::size_t i) {
    std::vector<double> row;
    for (double b : g.b) row.push_back(chandrasekhar_energy(g.a[i], b, z));
    return row;
  });
  return g;
}

double scan_charge(ChargeBasis basis, double z_lo, double z_hi, double tol) {
  auto margin = [basis](double z) { return -z * z / 2.0 - family_energy(basis, z); };
  double lo = z_lo, hi = z_hi;
  if (!(margin(hi) > 0.0)) throw DomainError("scan_charge: basis does not bind at the upper charge");
  if (margin(lo) > 0.0) throw DomainError("scan_charge: basis still binds at the lower charge");
  while (hi - lo > tol) {
    const double mid = 0.5 * (lo + hi);
    (margin(mid) > 0.0 ? hi : lo) = mid;
  }
  return 0.5 * (lo + hi);
}

std::vector<Mass3Point> scan_mass3(const std::vector<double>& ratios) {
  const double e_inf = optimize_chandrasekhar(1.0, +1).energy;
  return parallel_map<Mass3Point>(ratios.size(), [&](std::size_t i) {
    const double ratio = ratios[i];
    if (!(ratio > 0.0)) throw DomainError("scan_mass3: mass ratio must be positive");
    const double inv_central = std::isinf(ratio) ? 0.0 : 1.0 / ratio;
    const SystemSpec spec = SystemSpec::three_body(1.0, inv_central, 1.0, 1.0, +1);
    IonOptions o;
    o.family = IonFamily::kChandrasekhar;
    const VariationalResult r = optimize_ion(spec, o);
    Mass3Point p;
    p.ratio = ratio;
    p.energy = r.energy;
    p.scaled_reference = e_inf / (1.0 + inv_central);
    p.threshold = r.threshold_energy;
    p.margin = r.margin;
    p.params = r.params;
    const std::vector<matel3::BasisFn3> basis{matel3::symmetrized({r.params[0], r.params[1], r.params[2]}, +1)};
    p.hughes_eckart = matel3::hughes_eckart_expectation(basis, Eigen::VectorXd::Ones(1), Sector::kNatural);
    return p;
  });
}

namespace {

// Lowest eigenvalue of {e^{-a r1 - b r2}, e^{-b r1 - a r2}} and the block.
MatBlock asym_block(const SystemSpec& spec, double a, double b) {
  const ExpTerm3 t{a, b, 0.0};
  return matel3::assemble3({matel3::plain(t), matel3::plain(t.exchanged())}, spec);
}

double asym_energy(const SystemSpec& spec, double a, double b) { return gen_eig(asym_block(spec, a, b)).eigenvalues(0); }

// Minimize over the ratio with virial scaling folded in: scaling both
// ranges by lambda is exact for this basis, so optimize lambda per shape.
std::pair<double, std::vector<double>> optimize_asym(const SystemSpec& spec, double x0) {
  auto shape = [&](double x) {
    // Inner Brent over the scale.
    const auto m = minimize_1d([&](double s) { return asym_energy(spec, s * (1.0 + x), s * (1.0 - x)); }, 0.2, 3.0);
    return std::pair{m.value, m.params[0]};
  };
  const double lo = std::max(1e-3, x0 - 0.3), hi = std::min(0.995, x0 + 0.3);
  const auto m = minimize_1d([&](double x) { return shape(x).first; }, lo, hi);
  const double x = m.params[0];
  const auto [e, s] = shape(x);
  return {e, {s * (1.0 + x), s * (1.0 - x)}};
}

}  // namespace

std::vector<Asym3Point> scan_asym3(const std::vector<std::pair<double, double>>& inv_masses) {
  const double x0 = 0.57;  // Chandrasekhar shape of H-, (a - b)/(a + b)
  return parallel_map<Asym3Point>(inv_masses.size(), [&](std::size_t i) {
    const auto [m1, m2] = inv_masses[i];
    if (!(m1 > 0.0) || !(m2 > 0.0)) throw DomainError("scan_asym3: inverse masses must be positive");
    const SystemSpec spec = SystemSpec::three_body(1.0, 0.0, m1, m2, +1);
    const double avg = 0.5 * (m1 + m2);
    const SystemSpec sym = SystemSpec::three_body(1.0, 0.0, avg, avg, +1);
    Asym3Point p;
    p.inv_m1 = m1;
    p.inv_m2 = m2;
    p.energy = optimize_asym(spec, x0).first;
    p.symmetric_energy = optimize_asym(sym, x0).first;
    VariationalResult r;
    r.energy = p.energy;
    apply_threshold(r, spec);
    p.threshold = r.threshold_energy;
    p.margin = r.margin;
    p.stable = r.stable;
    return p;
  });
}

SystemSpec mass4_spec(double ratio, BreakMode mode) {
  if (!(ratio > 0.0) || std::isinf(ratio)) throw DomainError("mass4_spec: ratio must be positive and finite");
  const double inv_big = 2.0 / (ratio + 1.0);  // 1/M
  const double inv_small = 2.0 * ratio / (ratio + 1.0);  // 1/m
  return mode == BreakMode::kIdentity ? SystemSpec::four_body(inv_big, inv_small, inv_big, inv_small)
                                      : SystemSpec::four_body(inv_big, inv_big, inv_small, inv_small);
}

namespace {

MatBlock molecule_block(const SystemSpec& spec, BreakMode mode, const std::vector<double>& p) {
  const ExpTerm4 t{p[0], p[1], p[2], p[3]};
  if (mode == BreakMode::kIdentity) return matel4::assemble4({t, t.swap_positive()}, spec);
  return matel4::assemble4({t}, spec);
}

}  // namespace

VariationalResult optimize_molecule(const SystemSpec& spec, BreakMode mode, const std::vector<double>& start,
                                    const MinimizerConfig& config) {
  if (!spec.is_four_body()) throw DomainError("optimize_molecule needs a four-body spec");
  std::vector<double> x0 = start;
  if (x0.empty()) {
    const VariationalResult ps2 = optimize_ps2();
    x0.assign(ps2.params.begin() + 1, ps2.params.end());
  }
  if (x0.size() != 4) throw DomainError("four-body start needs (a, b, c, d)");
  const Objective f = [&](const std::vector<double>& p) {
    return gen_eig(molecule_block(spec, mode, p)).eigenvalues(0);
  };
  const MinimizeResult m = minimize(f, x0, config);
  // Virial polish: rescale the ranges by lambda* of the optimal vector.
  std::vector<double> params = m.params;
  for (int k = 0; k < 20; ++k) {
    const MatBlock b = molecule_block(spec, mode, params);
    const GenEigResult e = gen_eig(b);
    const Expectations ex = expectations(b, e.eigenvectors.col(0));
    const double lambda = -ex.v / (2.0 * ex.t);
    if (std::abs(lambda - 1.0) < 1e-13) break;
    std::vector<double> trial = params;
    for (double& v : trial) v *= lambda;
    if (f(trial) > e.eigenvalues(0)) break;
    params = std::move(trial);
  }
  const MatBlock b = molecule_block(spec, mode, params);
  const GenEigResult e = gen_eig(b);
  Eigen::VectorXd c = e.eigenvectors.col(0);
  const Expectations ex = expectations(b, c);
  c /= std::sqrt(c.dot(b.n_mat * c));
  VariationalResult r;
  r.energy = e.eigenvalues(0);
  r.params = params;
  r.coeffs.assign(c.data(), c.data() + c.size());
  r.virial_ratio = -ex.v / (2.0 * ex.t);
  r.iterations = m.iterations;
  r.converged = m.converged;
  apply_threshold(r, spec);
  return r;
}

std::vector<Mass4Point> scan_mass4(const std::vector<double>& ratios, BreakMode mode) {
  // Sequential: each ratio starts from the previous optimum.
  std::vector<Mass4Point> out;
  std::vector<double> start;
  for (double ratio : ratios) {
    const VariationalResult r = optimize_molecule(mass4_spec(ratio, mode), mode, start);
    start = r.params;
    out.push_back({ratio, r.energy, r.threshold_energy, r.margin, r.stable, r.params});
  }
  return out;
}

}  // namespace fewbody::solve
