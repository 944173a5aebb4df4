#include <algorithm>
#include <cmath>
#include <limits>

#include "fewbody/errors.hpp"
#include "fewbody/matel4.hpp"
#include "fewbody/solve.hpp"

namespace fewbody::solve {

namespace {

// Largest ratio between pair sums accepted in the unnatural sector.
constexpr double kMaxPairSumRatio = 1e3;

// Coarse grid followed by Brent on the bracket around the best sample.
MinimizeResult grid_then_brent(const std::function<double(double)>& f, double lo, double hi, int samples = 24) {
  const Objective wrapped = [&](const std::vector<double>& p) { return f(p[0]); };
  int best = 0;
  double best_value = std::numeric_limits<double>::infinity();
  const double h = (hi - lo) / (samples - 1);
  for (int i = 0; i < samples; ++i) {
    double v;
    try {
      v = f(lo + i * h);
    } catch (const std::exception&) {
      v = kInfeasible;
    }
    if (v < best_value) {
      best_value = v;
      best = i;
    }
  }
  const double a = lo + std::max(best - 1, 0) * h;
  const double b = lo + std::min(best + 1, samples - 1) * h;
  return minimize_1d(f, a, b);
}

std::vector<ExpTerm3> to_terms(const std::vector<double>& p) {
  if (p.size() % 3 != 0) throw DomainError("three-body parameters must come in (a, b, c) triples");
  std::vector<ExpTerm3> t;
  for (std::size_t i = 0; i < p.size(); i += 3) t.push_back({p[i], p[i + 1], p[i + 2]});
  return t;
}

std::vector<double> to_params(const std::vector<ExpTerm3>& terms) {
  std::vector<double> p;
  for (const auto& t : terms) p.insert(p.end(), {t.a, t.b, t.c});
  return p;
}

double root_energy(const MatBlock& block, int root) {
  const GenEigResult e = gen_eig(block);
  if (root >= e.eigenvalues.size()) throw DegenerateBasisError("requested eigenvalue beyond basis size");
  return e.eigenvalues(root);
}

// Single-term virial-reduced energy for a shape term.
VirialResult shape_energy(const SystemSpec& spec, const ExpTerm3& shape) {
  const MatBlock m = ion_block(spec, {shape.a, shape.b, shape.c});
  return virial_reduce(m.n_mat(0, 0), m.t_mat(0, 0), m.v_mat(0, 0));
}

VariationalResult finish_single(const SystemSpec& spec, const ExpTerm3& shape, int iterations, bool converged) {
  const VirialResult vr = shape_energy(spec, shape);
  VariationalResult r;
  r.energy = vr.energy;
  r.params = {vr.scale * shape.a, vr.scale * shape.b, vr.scale * shape.c};
  r.coeffs = {1.0};
  r.virial_ratio = 1.0;
  r.iterations = iterations;
  r.converged = converged;
  apply_threshold(r, spec);
  return r;
}

// Rescale all ranges by the optimal lambda of the current eigenvector until
// the virial ratio settles, then fill the result.
VariationalResult polish(const SystemSpec& spec, std::vector<double> params, int root, int iterations,
                         bool converged) {
  for (int k = 0; k < 20; ++k) {
    const MatBlock m = ion_block(spec, params);
    const GenEigResult e = gen_eig(m);
    const Expectations ex = expectations(m, e.eigenvectors.col(root));
    const double lambda = -ex.v / (2.0 * ex.t);
    if (std::abs(lambda - 1.0) < 1e-13) break;
    // The scaled basis has energy lambda^2 T + lambda V <= E for the same
    // coefficients; accept only if the eigenvalue does not rise.
    std::vector<double> trial = params;
    for (double& v : trial) v *= lambda;
    if (root_energy(ion_block(spec, trial), root) > e.eigenvalues(root)) break;
    params = std::move(trial);
  }
  const MatBlock m = ion_block(spec, params);
  const GenEigResult e = gen_eig(m);
  Eigen::VectorXd c = e.eigenvectors.col(root);
  const Expectations ex = expectations(m, c);
  c /= std::sqrt(c.dot(m.n_mat * c));
  VariationalResult r;
  r.energy = e.eigenvalues(root);
  r.params = params;
  r.coeffs.assign(c.data(), c.data() + c.size());
  r.virial_ratio = -ex.v / (2.0 * ex.t);
  r.iterations = iterations;
  r.converged = converged;
  apply_threshold(r, spec);
  return r;
}

VariationalResult optimize_single(const SystemSpec& spec, const IonOptions& o) {
  const double z = spec.z();
  switch (o.family) {
    case IonFamily::kFixedCharge: {
      const MatBlock m = ion_block(spec, {z, z, 0.0});
      VariationalResult r;
      r.energy = (m.t_mat(0, 0) + m.v_mat(0, 0)) / m.n_mat(0, 0);
      r.params = {z, z, 0.0};
      r.coeffs = {1.0};
      r.virial_ratio = -m.v_mat(0, 0) / (2.0 * m.t_mat(0, 0));
      apply_threshold(r, spec);
      return r;
    }
    case IonFamily::kEffectiveCharge:
      return finish_single(spec, {1.0, 1.0, 0.0}, 0, true);
    case IonFamily::kEqualCorrelated: {
      const auto m = grid_then_brent([&](double g) { return shape_energy(spec, {1.0, 1.0, g}).energy; }, -0.9, 2.0);
      return finish_single(spec, {1.0, 1.0, m.params[0]}, m.iterations, m.converged);
    }
    case IonFamily::kChandrasekhar: {
      const auto m =
          grid_then_brent([&](double x) { return shape_energy(spec, {1.0 + x, 1.0 - x, 0.0}).energy; }, 1e-3, 0.995);
      return finish_single(spec, {1.0 + m.params[0], 1.0 - m.params[0], 0.0}, m.iterations, m.converged);
    }
    case IonFamily::kFull: {
      IonOptions c = o;
      c.family = IonFamily::kChandrasekhar;
      const VariationalResult seed = optimize_single(spec, c);
      const double x0 = (seed.params[0] - seed.params[1]) / (seed.params[0] + seed.params[1]);
      const Objective f = [&](const std::vector<double>& p) {
        return shape_energy(spec, {1.0 + p[0], 1.0 - p[0], p[1]}).energy;
      };
      MinimizeResult best;
      best.value = std::numeric_limits<double>::infinity();
      for (double g0 : {-0.05, 0.05, 0.2}) {
        try {
          MinimizeResult m = minimize(f, {x0, g0}, o.config);
          if (m.value < best.value) best = m;
        } catch (const DomainError&) {
          // infeasible start, e.g. b + c <= 0
        }
      }
      return finish_single(spec, {1.0 + best.params[0], 1.0 - best.params[0], best.params[1]}, best.iterations,
                           best.converged);
    }
  }
  throw DomainError("unknown basis family");
}

VariationalResult optimize_multi(const SystemSpec& spec, const IonOptions& o) {
  const double z = spec.z();
  // Best schedule of each tie pattern; every one seeds its own refinement
  // because the globally best schedule can sit in a valley that the full
  // parameter search cannot leave.
  std::vector<MinimizeResult> seeds;
  std::vector<std::vector<double>> seed_params;
  int iterations = 0;
  for (TiePattern tie : {TiePattern::kNone, TiePattern::kBEqualsC, TiePattern::kAEqualsB}) {
    auto energy = [&](double alpha0, double beta0) {
      const Schedule s{alpha0, beta0, o.n_terms, tie};
      return root_energy(ion_block(spec, to_params(schedule_terms(s))), o.root);
    };
    const Objective f = [&](const std::vector<double>& p) { return energy(p[0], p[1]); };
    // Coarse scan of the schedule plane, then a simplex from the best cell.
    std::vector<double> start;
    double start_value = kInfeasible;
    for (int i = 0; i <= 10; ++i) {
      for (int j = 1; j <= 10; ++j) {
        const std::vector<double> p{z * (-1.0 + 0.5 * i), z * 0.2 * j};
        double v;
        try {
          v = f(p);
        } catch (const std::exception&) {
          continue;
        }
        if (v < start_value) {
          start_value = v;
          start = p;
        }
      }
    }
    if (start.empty()) continue;
    MinimizeResult m = minimize(f, start, o.config);
    iterations += m.iterations;
    seed_params.push_back(to_params(schedule_terms({m.params[0], m.params[1], o.n_terms, tie})));
    seeds.push_back(std::move(m));
  }
  if (seeds.empty()) throw DegenerateBasisError("no admissible schedule found");
  std::size_t pick = 0;
  for (std::size_t i = 1; i < seeds.size(); ++i)
    if (seeds[i].value < seeds[pick].value) pick = i;
  double best_value = seeds[pick].value;
  std::vector<double> params = seed_params[pick];
  bool converged = seeds[pick].converged;
  if (o.refine) {
    const Objective f = [&](const std::vector<double>& p) { return root_energy(ion_block(spec, p), o.root); };
    for (const auto& start : seed_params) {
      MinimizeResult m = minimize(f, start, o.config);
      iterations += m.iterations;
      if (m.value < best_value) {
        best_value = m.value;
        params = m.params;
        converged = m.converged;
      }
    }
  }
  return polish(spec, params, o.root, iterations, converged);
}

}  // namespace

std::vector<ExpTerm3> schedule_terms(const Schedule& s) {
  if (s.n_terms < 1 || s.n_terms > kMaxTerms) throw DomainError("schedule: n_terms must be in 1..8");
  auto value = [&](int k) { return s.alpha0 + k * s.beta0; };
  std::vector<ExpTerm3> terms;
  for (int i = 0; i < s.n_terms; ++i) {
    ExpTerm3 t;
    switch (s.tie_pattern) {
      case TiePattern::kNone:
        t = {value(3 * i + 2), value(3 * i + 1), value(3 * i)};
        break;
      case TiePattern::kBEqualsC:
        t = {value(2 * i + 1), value(2 * i), value(2 * i)};
        break;
      case TiePattern::kAEqualsB:
        t = {value(2 * i + 1), value(2 * i + 1), value(2 * i)};
        break;
    }
    if (!t.admissible()) throw DomainError("schedule produces a term with a non-positive pair sum");
    terms.push_back(t);
  }
  return terms;
}

MatBlock ion_block(const SystemSpec& spec, const std::vector<double>& params) {
  const auto terms = to_terms(params);
  for (const auto& t : terms)
    if (!t.admissible()) throw DomainError("inadmissible range parameters");
  if (spec.sector == Sector::kUnnatural) {
    // The unnatural elements are differences of nearly equal terms once one
    // pair sum is tiny compared with another; such points are rejected.
    for (const auto& t : terms) {
      const double lo = std::min({t.a + t.b, t.b + t.c, t.c + t.a});
      const double hi = std::max({t.a + t.b, t.b + t.c, t.c + t.a});
      if (hi > kMaxPairSumRatio * lo) throw DomainError("ill-conditioned range parameters");
    }
  }
  return spec.sector == Sector::kUnnatural ? matel3::unnatural_matblock(terms, spec)
                                           : matel3::natural_matblock(terms, spec);
}

VariationalResult optimize_ion(const SystemSpec& spec, const IonOptions& options) {
  if (spec.is_four_body()) throw DomainError("optimize_ion needs a three-body spec");
  spec.validate();
  if (options.n_terms < 1 || options.n_terms > kMaxTerms) throw DomainError("n_terms must be in 1..8");
  if (options.root < 0 || options.root >= options.n_terms)
    throw DomainError("root must be below the number of terms");
  return options.n_terms == 1 ? optimize_single(spec, options) : optimize_multi(spec, options);
}

VariationalResult optimize_chandrasekhar(double z, int epsilon) {
  IonOptions o;
  o.family = IonFamily::kChandrasekhar;
  return optimize_ion(SystemSpec::atom(z, epsilon), o);
}

VariationalResult optimize_minmax(double z) {
  // Only the ratio b/a matters after virial scaling: (a, b) = (1 + x, 1 - x).
  auto energy = [z](double x) {
    const auto ntv = matel3::minmax_ntv(1.0 + x, 1.0 - x, z);
    return virial_reduce(ntv.n, ntv.t, ntv.v);
  };
  const auto m = grid_then_brent([&](double x) { return energy(x).energy; }, -0.99, 0.99);
  const double x = m.params[0];
  const VirialResult vr = energy(x);
  VariationalResult r;
  r.energy = vr.energy;
  r.params = {vr.scale * (1.0 + x), vr.scale * (1.0 - x)};
  r.coeffs = {1.0};
  r.virial_ratio = 1.0;
  r.iterations = m.iterations;
  r.converged = m.converged;
  apply_threshold(r, SystemSpec::atom(z));
  return r;
}

VariationalResult optimize_shellmodel(double z) {
  const auto ntv = matel3::shellmodel_ntv(1.0, 1.0, z);
  const VirialResult vr = virial_reduce(ntv.n, ntv.t, ntv.v);
  VariationalResult r;
  r.energy = vr.energy;
  r.params = {vr.scale, vr.scale};
  r.coeffs = {1.0};
  r.virial_ratio = 1.0;
  apply_threshold(r, SystemSpec::atom(z, -1));
  return r;
}

VariationalResult optimize_shellmodel_unrestricted(double z) {
  // Only the ratio b/a matters after virial scaling.
  auto energy = [z](double ratio) {
    const auto ntv = matel3::shellmodel_ntv(1.0, ratio, z);
    return virial_reduce(ntv.n, ntv.t, ntv.v).energy;
  };
  const auto m = grid_then_brent(energy, 0.05, 3.0, 60);
  const double ratio = m.params[0];
  const auto ntv = matel3::shellmodel_ntv(1.0, ratio, z);
  const VirialResult vr = virial_reduce(ntv.n, ntv.t, ntv.v);
  VariationalResult r;
  r.energy = vr.energy;
  r.params = {vr.scale, vr.scale * ratio};
  r.coeffs = {1.0};
  r.virial_ratio = 1.0;
  r.iterations = m.iterations;
  r.converged = m.converged;
  apply_threshold(r, SystemSpec::atom(z, -1));
  return r;
}

VariationalResult optimize_ps2() {
  const auto m = minimize_1d([](double beta) { return matel4::ho_ntv(beta).reduced_energy(); }, 0.0, 0.99);
  const double beta = m.params[0];
  const auto ho = matel4::ho_ntv(beta);
  const double scale = ho.v / (2.0 * ho.t);
  VariationalResult r;
  r.energy = ho.reduced_energy();
  const ExpTerm4 t = matel4::hylleraas_ore_term(beta).scaled(scale);
  r.params = {beta, t.a, t.b, t.c, t.d};
  r.coeffs = {1.0};
  r.virial_ratio = 1.0;
  r.iterations = m.iterations;
  r.converged = m.converged;
  apply_threshold(r, SystemSpec::four_body(1, 1, 1, 1));
  return r;
}

}  // namespace fewbody::solve
