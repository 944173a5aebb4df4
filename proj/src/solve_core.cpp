#include <gsl/gsl_errno.h>
#include <gsl/gsl_multimin.h>

#include <boost/math/tools/minima.hpp>
#include <cmath>
#include <limits>
#include <random>

#include "fewbody/errors.hpp"
#include "fewbody/solve.hpp"

namespace fewbody::solve {

VirialResult virial_reduce(double n, double t, double v) {
  if (!(n > 0.0)) throw VirialError("virial_reduce: norm must be positive");
  if (!(t > 0.0)) throw VirialError("virial_reduce: kinetic energy must be positive");
  if (!(v < 0.0)) throw VirialError("virial_reduce: potential energy is not attractive, no bound scale");
  return {-v * v / (4.0 * n * t), -v / (2.0 * t)};
}

namespace {

struct Context {
  const Objective* objective;
};

double guarded(const Objective& f, const std::vector<double>& x) {
  double value;
  try {
    value = f(x);
  } catch (const std::domain_error&) {  // DomainError, VirialError
    return kInfeasible;
  } catch (const DegenerateBasisError&) {
    return kInfeasible;
  }
  return std::isfinite(value) ? std::min(value, kInfeasible) : kInfeasible;
}

double gsl_objective(const gsl_vector* x, void* params) {
  const auto* ctx = static_cast<const Context*>(params);
  std::vector<double> p(x->size);
  for (std::size_t i = 0; i < x->size; ++i) p[i] = gsl_vector_get(x, i);
  return guarded(*ctx->objective, p);
}

// One simplex descent from x0.
MinimizeResult descend(const Objective& f, const std::vector<double>& x0, const MinimizerConfig& cfg) {
  const std::size_t n = x0.size();
  Context ctx{&f};
  gsl_multimin_function fn{&gsl_objective, n, &ctx};
  gsl_vector* x = gsl_vector_alloc(n);
  gsl_vector* step = gsl_vector_alloc(n);
  for (std::size_t i = 0; i < n; ++i) {
    gsl_vector_set(x, i, x0[i]);
    gsl_vector_set(step, i, cfg.initial_step * std::max(std::abs(x0[i]), 0.1));
  }
  gsl_multimin_fminimizer* s = gsl_multimin_fminimizer_alloc(gsl_multimin_fminimizer_nmsimplex2, n);
  gsl_multimin_fminimizer_set(s, &fn, x, step);

  MinimizeResult r;
  double window_best = s->fval;
  const int window = 50 * static_cast<int>(n);
  int it = 0;
  for (; it < cfg.max_iterations; ++it) {
    if (gsl_multimin_fminimizer_iterate(s) != GSL_SUCCESS) break;
    const double size = gsl_multimin_fminimizer_size(s);
    if (gsl_multimin_test_size(size, cfg.x_tol) == GSL_SUCCESS) {
      r.converged = true;
      break;
    }
    if ((it + 1) % window == 0) {
      if (window_best - s->fval < cfg.f_tol && size < 1e-4) {
        r.converged = true;
        break;
      }
      window_best = s->fval;
    }
  }
  r.iterations = it + 1;
  r.value = s->fval;
  r.params.resize(n);
  for (std::size_t i = 0; i < n; ++i) r.params[i] = gsl_vector_get(s->x, i);
  gsl_multimin_fminimizer_free(s);
  gsl_vector_free(x);
  gsl_vector_free(step);
  return r;
}

}  // namespace

MinimizeResult minimize(const Objective& objective, const std::vector<double>& x0, const MinimizerConfig& config) {
  if (x0.empty()) throw DomainError("minimize: no parameters");
  if (guarded(objective, x0) >= kInfeasible) throw DomainError("minimize: infeasible starting point");
  gsl_set_error_handler_off();
  std::mt19937_64 rng(config.seed);
  std::uniform_real_distribution<double> jitter(-1.0, 1.0);

  MinimizeResult best = descend(objective, x0, config);
  int total = best.iterations;
  for (int k = 0; k < config.restarts; ++k) {
    // Even restarts re-seed the simplex at the best point (Nelder-Mead can
    // collapse prematurely); odd restarts perturb it by up to 5%.
    std::vector<double> start = best.params;
    if (k % 2 == 1)
      for (double& v : start) v += 0.05 * std::max(std::abs(v), 0.1) * jitter(rng);
    if (guarded(objective, start) >= kInfeasible) continue;
    MinimizeResult r = descend(objective, start, config);
    total += r.iterations;
    if (r.value < best.value) {
      const bool stalled = best.value - r.value < config.f_tol;
      best = r;
      if (stalled && k % 2 == 0) break;
    } else if (k % 2 == 0 && r.converged) {
      best.converged = true;
    }
  }
  best.iterations = total;
  return best;
}

MinimizeResult minimize_1d(const std::function<double(double)>& objective, double lo, double hi, double x_tol) {
  const Objective wrapped = [&](const std::vector<double>& p) { return objective(p[0]); };
  auto f = [&](double x) { return guarded(wrapped, {x}); };
  const int bits = std::max(8, static_cast<int>(-std::log2(x_tol)));
  std::uintmax_t max_iter = 500;
  const auto [x, fx] = boost::math::tools::brent_find_minima(f, lo, hi, bits, max_iter);
  MinimizeResult r;
  r.params = {x};
  r.value = fx;
  r.iterations = static_cast<int>(max_iter);
  r.converged = max_iter < 500;
  return r;
}

namespace {

// Unit-diagonal overlap and its conditioning.
struct Conditioning {
  double condition = 0.0;
  Eigen::VectorXd weakest;  ///< eigenvector of the smallest eigenvalue
  bool definite = false;
};

Conditioning condition_of(const Eigen::MatrixXd& n) {
  Conditioning c;
  const Eigen::VectorXd d = n.diagonal();
  if ((d.array() <= 0.0).any()) {
    // A vanishing norm marks its own term as the one to drop.
    c.weakest = (d.array() <= 0.0).cast<double>().matrix();
    return c;
  }
  const Eigen::VectorXd s = d.cwiseSqrt().cwiseInverse();
  const Eigen::MatrixXd unit = s.asDiagonal() * n * s.asDiagonal();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(unit);
  const double lo = es.eigenvalues()(0);
  const double hi = es.eigenvalues()(es.eigenvalues().size() - 1);
  c.definite = lo > 0.0;
  c.condition = c.definite ? hi / lo : std::numeric_limits<double>::infinity();
  c.weakest = es.eigenvectors().col(0);
  return c;
}

MatBlock without(const MatBlock& b, Eigen::Index drop) {
  const Eigen::Index n = b.size();
  MatBlock r(n - 1);
  for (Eigen::Index i = 0, ri = 0; i < n; ++i) {
    if (i == drop) continue;
    for (Eigen::Index j = 0, rj = 0; j < n; ++j) {
      if (j == drop) continue;
      r.n_mat(ri, rj) = b.n_mat(i, j);
      r.t_mat(ri, rj) = b.t_mat(i, j);
      r.v_mat(ri, rj) = b.v_mat(i, j);
      ++rj;
    }
    ++ri;
  }
  return r;
}

}  // namespace

GenEigResult gen_eig(const MatBlock& block) {
  const Eigen::Index n = block.size();
  if (n == 0) throw DegenerateBasisError("gen_eig: empty basis");
  if (!block.n_mat.allFinite() || !block.t_mat.allFinite() || !block.v_mat.allFinite())
    throw DegenerateBasisError("gen_eig: non-finite matrix elements");
  GenEigResult out;
  MatBlock work = block;
  Conditioning c = condition_of(work.n_mat);
  if (!c.definite || c.condition > kMaxCondition) {
    if (n == 1) throw DegenerateBasisError("gen_eig: overlap is not positive");
    Eigen::Index drop = 0;
    c.weakest.cwiseAbs().maxCoeff(&drop);
    work = without(work, drop);
    out.dropped = static_cast<int>(drop);
    c = condition_of(work.n_mat);
    if (!c.definite || c.condition > kMaxCondition)
      throw DegenerateBasisError("gen_eig: overlap ill-conditioned after dropping a term");
  }
  Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> es(work.hamiltonian(), work.n_mat,
                                                               Eigen::ComputeEigenvectors | Eigen::Ax_lBx);
  if (es.info() != Eigen::Success) throw DegenerateBasisError("gen_eig: overlap is not positive definite");
  out.eigenvalues = es.eigenvalues();
  const Eigen::MatrixXd& vecs = es.eigenvectors();
  out.eigenvectors = Eigen::MatrixXd::Zero(n, vecs.cols());
  for (Eigen::Index i = 0, ri = 0; i < n; ++i) {
    if (i == out.dropped) continue;
    out.eigenvectors.row(i) = vecs.row(ri++);
  }
  return out;
}

Expectations expectations(const MatBlock& block, const Eigen::VectorXd& c) {
  const double norm = c.dot(block.n_mat * c);
  return {c.dot(block.t_mat * c) / norm, c.dot(block.v_mat * c) / norm};
}

}  // namespace fewbody::solve
