#include "fewbody/matel3.hpp"

#include <cmath>
#include <string>

#include "fewbody/errors.hpp"
#include "fewbody/jet.hpp"

namespace fewbody::matel3 {

namespace {

using Jet3 = Jet<3, kMaxOrder>;

void check_domain(double alpha, double beta, double gamma) {
  if (!(alpha + beta > 0.0) || !(beta + gamma > 0.0) || !(gamma + alpha > 0.0))
    throw DomainError("F3 diverges: pair sums must be positive (" + std::to_string(alpha) + ", " +
                      std::to_string(beta) + ", " + std::to_string(gamma) + ")");
}

// Taylor jet of 1/(s + e_u + e_v) where e_u, e_v are the displacements of
// variables u and v: coefficient of e_u^m e_v^n is (-1)^(m+n) C(m+n, m) / s^(m+n+1).
Jet3 pair_reciprocal(double s, int u, int v) {
  const auto& t = jet_detail::tables<3, kMaxOrder>();
  std::array<double, Jet3::kSize> c{};
  for (std::size_t idx = 0; idx < Jet3::kSize; ++idx) {
    const auto& e = t.exponents[idx];
    const int other = 3 - u - v;
    if (e[other] != 0) continue;
    const int m = e[u];
    const int n = e[v];
    double binom = 1.0;
    for (int q = 1; q <= n; ++q) binom = binom * (m + q) / q;
    c[idx] = ((m + n) % 2 ? -1.0 : 1.0) * binom / std::pow(s, m + n + 1);
  }
  return Jet3::from_coefficients(c);
}

Jet3 f3_jet(double alpha, double beta, double gamma) {
  check_domain(alpha, beta, gamma);
  return (pair_reciprocal(alpha + beta, 0, 1) * pair_reciprocal(beta + gamma, 1, 2)) *
         pair_reciprocal(gamma + alpha, 2, 0) * 4.0;
}

constexpr int kStride = kMaxOrder + 1;

// Geometry of the triangle (r1, r2, r12).
struct Geometry {
  Poly3 x = Poly3::x();
  Poly3 y = Poly3::y();
  Poly3 z = Poly3::z();
  Poly3 measure = x * y * z;
  Poly3 x2 = x * x;
  Poly3 y2 = y * y;
  Poly3 z2 = z * z;
  // x y z times the cosines between the unit vectors r1, r2 and
  // u = (r1 - r2)/r12.
  Poly3 cos_12 = 0.5 * z * (x2 + y2 - z2);  // r1^ . r2^
  Poly3 cos_1u = 0.5 * y * (x2 - y2 + z2);  // r1^ . u
  Poly3 cos_2u = 0.5 * x * (x2 - y2 - z2);  // r2^ . u
  Poly3 cos_2mu = 0.5 * x * (y2 - x2 + z2); // r2^ . (-u)
  Poly3 dot12 = 0.5 * (x2 + y2 - z2);       // r1 . r2
  Poly3 cross_sq = x2 * y2 - dot12 * dot12; // |r1 x r2|^2
};

const Geometry& geometry() {
  static const Geometry g;
  return g;
}

struct Partials {
  Poly3 f, fx, fy, fz;
};

Partials partials(const Dressed3& d) {
  const Poly3& p = d.prefactor;
  return {p, p.derivative(0) - d.range.a * p, p.derivative(1) - d.range.b * p, p.derivative(2) - d.range.c * p};
}

// Natural-sector gradient products times the volume element.
Poly3 grad1_natural(const Partials& f, const Partials& g, const Geometry& geo) {
  return (f.fx * g.fx + f.fz * g.fz) * geo.measure + (f.fx * g.fz + f.fz * g.fx) * geo.cos_1u;
}
Poly3 grad2_natural(const Partials& f, const Partials& g, const Geometry& geo) {
  return (f.fy * g.fy + f.fz * g.fz) * geo.measure + (f.fy * g.fz + f.fz * g.fy) * geo.cos_2mu;
}
// grad_1 f . grad_2 g with grad_1 = f_x r1^ + f_z u and grad_2 = g_y r2^ - g_z u.
Poly3 cross_natural(const Partials& f, const Partials& g, const Geometry& geo) {
  return f.fx * g.fy * geo.cos_12 - f.fx * g.fz * geo.cos_1u + f.fz * g.fy * geo.cos_2u - f.fz * g.fz * geo.measure;
}

}  // namespace

double f3(double alpha, double beta, double gamma) {
  check_domain(alpha, beta, gamma);
  return 4.0 / ((alpha + beta) * (beta + gamma) * (gamma + alpha));
}

double g3(DerivIndex3 idx, double alpha, double beta, double gamma) {
  if (idx.i < 0 || idx.j < 0 || idx.k < 0) throw OrderError("negative derivative order");
  if (idx.total() > kMaxOrder) throw OrderError("derivative order exceeds " + std::to_string(kMaxOrder));
  return MomentTable(alpha, beta, gamma)(idx.i, idx.j, idx.k);
}

MomentTable::MomentTable(double alpha, double beta, double gamma) {
  const Jet3 jet = f3_jet(alpha, beta, gamma);
  const auto& t = jet_detail::tables<3, kMaxOrder>();
  for (std::size_t idx = 0; idx < Jet3::kSize; ++idx) {
    const auto& e = t.exponents[idx];
    const double sign = t.degree[idx] % 2 ? -1.0 : 1.0;
    g_[(e[0] * kStride + e[1]) * kStride + e[2]] = sign * t.factorial_weight[idx] * jet.coefficient(idx);
  }
}

double MomentTable::operator()(int i, int j, int k) const {
  if (i < 0 || j < 0 || k < 0 || i + j + k > kMaxOrder)
    throw OrderError("moment (" + std::to_string(i) + "," + std::to_string(j) + "," + std::to_string(k) +
                     ") outside the table");
  return g_[(i * kStride + j) * kStride + k];
}

double MomentTable::integrate(const Poly3& p) const {
  double s = 0.0;
  for (const auto& [e, c] : p.terms()) s += c * (*this)(e[0], e[1], e[2]);
  return s;
}

PairIntegrands pair_integrands(const Dressed3& fd, const Dressed3& gd, Sector sector) {
  const Geometry& geo = geometry();
  const Partials f = partials(fd);
  const Partials g = partials(gd);
  const Poly3 fg = f.f * g.f;

  PairIntegrands r;
  if (sector == Sector::kNatural) {
    r.overlap = fg * geo.measure;
    r.inv_r1 = fg * geo.y * geo.z;
    r.inv_r2 = fg * geo.x * geo.z;
    r.inv_r12 = fg * geo.x * geo.y;
    r.grad1 = grad1_natural(f, g, geo);
    r.grad2 = grad2_natural(f, g, geo);
    r.grad12 = cross_natural(f, g, geo) + cross_natural(g, f, geo);
    return r;
  }

  // Vector prefactor W = r1 x r2, summed over components:
  //   sum_i |grad_1 W_i|^2 = 2 r2^2,  sum_i W_i grad_1 W_i = r2 x W,
  //   (r2 x W) . r1^ = |W|^2 / r1,    (r2 x W) . u = |W|^2 / r12,
  //   sum_i grad_1 W_i . grad_2 W_i = -2 r1 . r2.
  const Poly3& w2 = geo.cross_sq;
  r.overlap = w2 * fg * geo.measure;
  r.inv_r1 = w2 * fg * geo.y * geo.z;
  r.inv_r2 = w2 * fg * geo.x * geo.z;
  r.inv_r12 = w2 * fg * geo.x * geo.y;

  const Poly3 d_x = f.f * g.fx + f.fx * g.f;
  const Poly3 d_y = f.f * g.fy + f.fy * g.f;
  const Poly3 d_z = f.f * g.fz + f.fz * g.f;
  r.grad1 = 2.0 * geo.y2 * fg * geo.measure + w2 * (d_x * geo.y * geo.z + d_z * geo.x * geo.y) +
            w2 * grad1_natural(f, g, geo);
  r.grad2 = 2.0 * geo.x2 * fg * geo.measure + w2 * (d_y * geo.x * geo.z + d_z * geo.x * geo.y) +
            w2 * grad2_natural(f, g, geo);
  r.grad12 = -4.0 * geo.dot12 * fg * geo.measure - 2.0 * w2 * d_z * geo.x * geo.y +
             w2 * (cross_natural(f, g, geo) + cross_natural(g, f, geo));
  return r;
}

PairElements& PairElements::operator+=(const PairElements& o) {
  overlap += o.overlap;
  inv_r1 += o.inv_r1;
  inv_r2 += o.inv_r2;
  inv_r12 += o.inv_r12;
  grad1 += o.grad1;
  grad2 += o.grad2;
  grad12 += o.grad12;
  return *this;
}

PairElements& PairElements::operator*=(double s) {
  overlap *= s;
  inv_r1 *= s;
  inv_r2 *= s;
  inv_r12 *= s;
  grad1 *= s;
  grad2 *= s;
  grad12 *= s;
  return *this;
}

double PairElements::kinetic(const SystemSpec& spec) const {
  // p_1 = p_x, p_2 = p_y, p_central = -(p_x + p_y) on translation-invariant
  // functions.
  const double inv_c = spec.inv_masses[0];
  const double inv_1 = spec.inv_masses[1];
  const double inv_2 = spec.inv_masses[2];
  return 0.5 * ((inv_1 + inv_c) * grad1 + (inv_2 + inv_c) * grad2 + inv_c * grad12);
}

double PairElements::potential(const SystemSpec& spec) const {
  const double z = spec.z();
  return -z * (inv_r1 + inv_r2) + inv_r12;
}

PairElements pair_elements(const Dressed3& f, const Dressed3& g, Sector sector) {
  const ExpTerm3 sum = f.range + g.range;
  const MomentTable m(sum.a, sum.b, sum.c);
  const PairIntegrands in = pair_integrands(f, g, sector);
  PairElements e;
  e.overlap = m.integrate(in.overlap);
  e.inv_r1 = m.integrate(in.inv_r1);
  e.inv_r2 = m.integrate(in.inv_r2);
  e.inv_r12 = m.integrate(in.inv_r12);
  e.grad1 = m.integrate(in.grad1);
  e.grad2 = m.integrate(in.grad2);
  e.grad12 = m.integrate(in.grad12);
  return e;
}

PairElements pair_elements(const BasisFn3& f, const BasisFn3& g, Sector sector) {
  PairElements total;
  for (const auto& fp : f)
    for (const auto& gp : g) total += pair_elements(fp, gp, sector);
  return total;
}

double overlap3(const ExpTerm3& t, const ExpTerm3& tp) {
  const ExpTerm3 s = t + tp;
  return g3({1, 1, 1}, s.a, s.b, s.c);
}

double coulomb3(Pair pair, const ExpTerm3& t, const ExpTerm3& tp) {
  const ExpTerm3 s = t + tp;
  switch (pair) {
    case Pair::k13:
      return g3({0, 1, 1}, s.a, s.b, s.c);
    case Pair::k23:
      return g3({1, 0, 1}, s.a, s.b, s.c);
    case Pair::k12:
      return g3({1, 1, 0}, s.a, s.b, s.c);
  }
  return 0.0;
}

double kinetic3(Particle particle, const ExpTerm3& t, const ExpTerm3& tp) {
  const PairElements e = pair_elements(Dressed3{Poly3(1.0), t}, Dressed3{Poly3(1.0), tp}, Sector::kNatural);
  switch (particle) {
    case Particle::kElectron1:
      return e.grad1;
    case Particle::kElectron2:
      return e.grad2;
    case Particle::kCentral:
      return e.grad1 + e.grad2 + e.grad12;
  }
  return 0.0;
}

double hughes_eckart3(const ExpTerm3& t, const ExpTerm3& tp) {
  return 0.5 * pair_elements(Dressed3{Poly3(1.0), t}, Dressed3{Poly3(1.0), tp}, Sector::kNatural).grad12;
}

BasisFn3 symmetrized(const ExpTerm3& t, int epsilon) {
  return {Dressed3{Poly3(1.0), t}, Dressed3{Poly3(static_cast<double>(epsilon)), t.exchanged()}};
}

BasisFn3 plain(const ExpTerm3& t) { return {Dressed3{Poly3(1.0), t}}; }

MatBlock assemble3(const std::vector<BasisFn3>& basis, const SystemSpec& spec, Sector sector, double scale) {
  const auto n = static_cast<Eigen::Index>(basis.size());
  MatBlock block(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = i; j < n; ++j) {
      PairElements e = pair_elements(basis[i], basis[j], sector);
      e *= scale;
      block.n_mat(i, j) = block.n_mat(j, i) = e.overlap;
      block.t_mat(i, j) = block.t_mat(j, i) = e.kinetic(spec);
      block.v_mat(i, j) = block.v_mat(j, i) = e.potential(spec);
    }
  }
  return block;
}

MatBlock assemble3(const std::vector<BasisFn3>& basis, const SystemSpec& spec) {
  spec.validate();
  return assemble3(basis, spec, spec.sector, 1.0);
}

MatBlock natural_matblock(const std::vector<ExpTerm3>& terms, const SystemSpec& spec) {
  spec.validate();
  std::vector<BasisFn3> basis;
  for (const auto& t : terms) basis.push_back(symmetrized(t, spec.epsilon));
  // Divide out the two exchange images and the factor 2 carried by F3, so a
  // single term reproduces the textbook closed forms exactly.
  return assemble3(basis, spec, Sector::kNatural, 0.25);
}

MatBlock unnatural_matblock(const std::vector<ExpTerm3>& terms, const SystemSpec& spec) {
  spec.validate();
  if (spec.sector != Sector::kUnnatural) throw DomainError("unnatural_matblock needs the unnatural sector");
  std::vector<BasisFn3> basis;
  for (const auto& t : terms) basis.push_back(symmetrized(t, +1));
  return assemble3(basis, spec, Sector::kUnnatural, 0.25);
}

double hughes_eckart_expectation(const std::vector<BasisFn3>& basis, const Eigen::VectorXd& coeffs,
                                 Sector sector) {
  double num = 0.0;
  double norm = 0.0;
  for (std::size_t i = 0; i < basis.size(); ++i) {
    for (std::size_t j = 0; j < basis.size(); ++j) {
      const PairElements e = pair_elements(basis[i], basis[j], sector);
      const double w = coeffs(static_cast<Eigen::Index>(i)) * coeffs(static_cast<Eigen::Index>(j));
      num += w * 0.5 * e.grad12;
      norm += w * e.overlap;
    }
  }
  return num / norm;
}

}  // namespace fewbody::matel3
