#include "fewbody/oracle.hpp"

#include <gsl/gsl_integration.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>
#include <stdexcept>
#include <tuple>

#include "fewbody/errors.hpp"

namespace fewbody::oracle {

namespace {

struct Rule {
  std::vector<double> x;
  std::vector<double> w;
};

enum class Family { kLegendre01, kLegendreSym, kLaguerre };

// Gauss rules from GSL, cached per (family, n). Legendre on [0, 1] or
// [-1, 1]; Laguerre for weight e^-x on [0, inf).
const Rule& rule(Family family, int n) {
  static std::mutex mutex;
  static std::map<std::pair<Family, int>, std::unique_ptr<Rule>> cache;
  std::lock_guard<std::mutex> lock(mutex);
  auto& slot = cache[{family, n}];
  if (!slot) {
    const gsl_integration_fixed_type* type =
        family == Family::kLaguerre ? gsl_integration_fixed_laguerre : gsl_integration_fixed_legendre;
    const double lo = family == Family::kLegendreSym ? -1.0 : 0.0;
    const double hi = family == Family::kLaguerre ? 1.0 : 1.0;
    gsl_integration_fixed_workspace* ws = gsl_integration_fixed_alloc(type, static_cast<size_t>(n), lo, hi, 0.0, 0.0);
    if (!ws) throw std::runtime_error("quadrature rule allocation failed");
    auto r = std::make_unique<Rule>();
    const double* nodes = gsl_integration_fixed_nodes(ws);
    const double* weights = gsl_integration_fixed_weights(ws);
    r->x.assign(nodes, nodes + n);
    r->w.assign(weights, weights + n);
    gsl_integration_fixed_free(ws);
    slot = std::move(r);
  }
  return *slot;
}

// Integral over x < y of f e^{-alpha x - beta y - gamma z} with
// x = y s, z = y (1 - s + 2 s t); the Jacobian is 2 s y^2.
double half3(const Fn3& f, const std::array<double, 3>& r, int n) {
  const Rule& leg = rule(Family::kLegendre01, n);
  const Rule& lag = rule(Family::kLaguerre, n);
  double sum = 0.0;
  for (int i = 0; i < n; ++i) {
    const double s = leg.x[i];
    for (int j = 0; j < n; ++j) {
      const double t = leg.x[j];
      const double zeta = 1.0 - s + 2.0 * s * t;
      const double kappa = r[0] * s + r[1] + r[2] * zeta;
      double inner = 0.0;
      for (int k = 0; k < n; ++k) {
        const double y = lag.x[k] / kappa;
        inner += lag.w[k] * y * y * f(y * s, y, y * zeta);
      }
      sum += leg.w[i] * leg.w[j] * 2.0 * s * inner / kappa;
    }
  }
  return sum;
}

void check_ranges3(const std::array<double, 3>& r) {
  if (!(r[0] + r[1] > 0.0) || !(r[1] + r[2] > 0.0) || !(r[2] + r[0] > 0.0))
    throw DomainError("quad3: divergent exponential weight");
}

QuadResult with_check(const std::function<double(int)>& eval, QuadOptions opts) {
  QuadResult res;
  res.value = eval(opts.nodes);
  if (opts.check) {
    const double fine = eval(2 * opts.nodes);
    res.rel_change = std::abs(fine - res.value) / std::max(std::abs(fine), 1e-300);
    res.converged = res.rel_change <= kConvergenceTolerance;
  }
  return res;
}

// Cartesian configuration of the three-body triangle.
struct Config3 {
  std::array<double, 3> r1{};
  std::array<double, 3> r2{};
};

Config3 place3(double x, double y, double z) {
  const double c = std::clamp((x * x + y * y - z * z) / (2.0 * x * y), -1.0, 1.0);
  return {{x, 0.0, 0.0}, {y * c, y * std::sqrt(1.0 - c * c), 0.0}};
}

double norm3(const std::array<double, 3>& v) { return std::sqrt(v[0] * v[0] + v[1] * v[1] + v[2] * v[2]); }

// Components of a basis function at Cartesian positions: one component in
// the natural sector, three ((r1 x r2)_i) in the unnatural sector.
std::array<double, 3> components(const matel3::BasisFn3& f, Sector sector, const Config3& c) {
  const double x = norm3(c.r1);
  const double y = norm3(c.r2);
  const std::array<double, 3> d{c.r1[0] - c.r2[0], c.r1[1] - c.r2[1], c.r1[2] - c.r2[2]};
  const double z = norm3(d);
  double scalar = 0.0;
  for (const auto& part : f)
    scalar += part.prefactor.evaluate(x, y, z) * std::exp(-part.range.a * x - part.range.b * y - part.range.c * z);
  if (sector == Sector::kNatural) return {scalar, 0.0, 0.0};
  const auto& a = c.r1;
  const auto& b = c.r2;
  return {scalar * (a[1] * b[2] - a[2] * b[1]), scalar * (a[2] * b[0] - a[0] * b[2]),
          scalar * (a[0] * b[1] - a[1] * b[0])};
}

// Gradients of all components with respect to the coordinates of r1 (which
// = 0) or r2 (which = 1), five-point stencil.
std::array<std::array<double, 3>, 3> gradient(const matel3::BasisFn3& f, Sector sector, const Config3& c,
                                              int which) {
  constexpr double h = 1e-3;
  std::array<std::array<double, 3>, 3> g{};  // g[component][coordinate]
  for (int k = 0; k < 3; ++k) {
    auto at = [&](double delta) {
      Config3 p = c;
      (which == 0 ? p.r1 : p.r2)[k] += delta;
      return components(f, sector, p);
    };
    const auto m2 = at(-2 * h), m1 = at(-h), p1 = at(h), p2 = at(2 * h);
    for (int comp = 0; comp < 3; ++comp)
      g[comp][k] = (m2[comp] - 8.0 * m1[comp] + 8.0 * p1[comp] - p2[comp]) / (12.0 * h);
  }
  return g;
}

double contract(const std::array<std::array<double, 3>, 3>& u, const std::array<std::array<double, 3>, 3>& v) {
  double s = 0.0;
  for (int comp = 0; comp < 3; ++comp)
    for (int k = 0; k < 3; ++k) s += u[comp][k] * v[comp][k];
  return s;
}

// Component-wise smallest ranges of a basis function, used as the
// quadrature weight; the remaining exponential decay stays in the integrand.
ExpTerm3 min_range(const matel3::BasisFn3& f) {
  ExpTerm3 m = f.front().range;
  for (const auto& part : f) {
    m.a = std::min(m.a, part.range.a);
    m.b = std::min(m.b, part.range.b);
    m.c = std::min(m.c, part.range.c);
  }
  return m;
}

struct Points4 {
  std::array<double, 3> p1{}, p2{}, p3{}, p4{};
};

double dist(const std::array<double, 3>& u, const std::array<double, 3>& v) {
  return norm3({u[0] - v[0], u[1] - v[1], u[2] - v[2]});
}

// Particle 1 at the origin, 2 on the x axis, 3 in the xy plane, 4 rotated
// by the dihedral angle phi about the 1-2 axis.
Points4 place4(const Distances4& r, double phi) {
  auto foot = [&](double ra, double rb) {
    const double xi = (ra * ra - rb * rb + r.r12 * r.r12) / (2.0 * r.r12);
    return std::pair{xi, std::sqrt(std::max(ra * ra - xi * xi, 0.0))};
  };
  const auto [x3, h3] = foot(r.r13, r.r23);
  const auto [x4, h4] = foot(r.r14, r.r24);
  return {{0, 0, 0}, {r.r12, 0, 0}, {x3, h3, 0}, {x4, h4 * std::cos(phi), h4 * std::sin(phi)}};
}

// Gradient of -log of exp(-a r13 - b r14 - c r23 - d r24) with respect to
// particle `i`.
std::array<double, 3> log_gradient(int i, const ExpTerm4& t, const Points4& p) {
  const std::array<const std::array<double, 3>*, 4> pos{&p.p1, &p.p2, &p.p3, &p.p4};
  // (pair, range) for the four exponentials: 13 a, 14 b, 23 c, 24 d.
  const std::array<std::tuple<int, int, double>, 4> pairs{
      std::tuple{0, 2, t.a}, std::tuple{0, 3, t.b}, std::tuple{1, 2, t.c}, std::tuple{1, 3, t.d}};
  std::array<double, 3> g{};
  for (const auto& [u, v, range] : pairs) {
    if (u != i && v != i) continue;
    const auto& self = *pos[i];
    const auto& other = *pos[u == i ? v : u];
    const double r = dist(self, other);
    for (int k = 0; k < 3; ++k) g[k] += range * (self[k] - other[k]) / r;
  }
  return g;
}

constexpr int kDihedralNodes = 8;

}  // namespace

QuadResult quad3(const Fn3& f, const std::array<double, 3>& ranges, QuadOptions opts) {
  return quad3_split(f, ranges, f, ranges, opts);
}

QuadResult quad3_split(const Fn3& lower, const std::array<double, 3>& lower_ranges, const Fn3& upper,
                       const std::array<double, 3>& upper_ranges, QuadOptions opts) {
  check_ranges3(lower_ranges);
  check_ranges3(upper_ranges);
  // The x > y half is the x < y half of the mirrored problem.
  const Fn3 mirrored = [&upper](double x, double y, double z) { return upper(y, x, z); };
  const std::array<double, 3> mirrored_ranges{upper_ranges[1], upper_ranges[0], upper_ranges[2]};
  return with_check(
      [&](int n) { return 2.0 * (half3(lower, lower_ranges, n) + half3(mirrored, mirrored_ranges, n)); }, opts);
}

QuadResult quad3_monomial(int i, int j, int k, const std::array<double, 3>& ranges, QuadOptions opts) {
  return quad3([=](double x, double y, double z) { return std::pow(x, i) * std::pow(y, j) * std::pow(z, k); },
               ranges, opts);
}

QuadResult quad4(const Fn4& f, double a, double b, double c, double d, double u, QuadOptions opts) {
  if (!(a + b > 0.0) || !(c + d > 0.0) || !(std::min(a, b) + std::min(c, d) + u > 0.0))
    throw DomainError("quad4: divergent exponential weight");
  // r13 = (s3 + t3)/2, r23 = (s3 - t3)/2 with s3 = rho + w3, t3 = rho tau3,
  // and likewise for particle 4. The exponent becomes
  // x (rho + w3) + p rho tau3 + y (rho + w4) + q rho tau4 + u rho.
  const double x = 0.5 * (a + b), p = 0.5 * (a - b);
  const double y = 0.5 * (c + d), q = 0.5 * (c - d);
  auto eval = [&](int n) {
    const Rule& leg = rule(Family::kLegendreSym, n);
    const Rule& lag = rule(Family::kLaguerre, n);
    double sum = 0.0;
    for (int i3 = 0; i3 < n; ++i3) {
      for (int i4 = 0; i4 < n; ++i4) {
        const double tau3 = leg.x[i3], tau4 = leg.x[i4];
        const double kappa = x + y + u + p * tau3 + q * tau4;
        double inner = 0.0;
        for (int k = 0; k < n; ++k) {
          const double rho = lag.x[k] / kappa;
          double shells = 0.0;
          for (int m3 = 0; m3 < n; ++m3) {
            const double s3 = rho + lag.x[m3] / x;
            for (int m4 = 0; m4 < n; ++m4) {
              const double s4 = rho + lag.x[m4] / y;
              const Distances4 r{rho, 0.5 * (s3 + rho * tau3), 0.5 * (s3 - rho * tau3), 0.5 * (s4 + rho * tau4),
                                 0.5 * (s4 - rho * tau4)};
              shells += lag.w[m3] * lag.w[m4] * f(r);
            }
          }
          inner += lag.w[k] * 0.25 * rho * rho * shells;
        }
        sum += leg.w[i3] * leg.w[i4] * inner / (kappa * x * y);
      }
    }
    return 4.0 * sum;
  };
  return with_check(eval, opts);
}

Gradients3 cartesian_gradients3(const matel3::BasisFn3& f, const matel3::BasisFn3& g, Sector sector, double x,
                                double y, double z) {
  const Config3 c = place3(x, y, z);
  const auto f1 = gradient(f, sector, c, 0), f2 = gradient(f, sector, c, 1);
  const auto g1 = gradient(g, sector, c, 0), g2 = gradient(g, sector, c, 1);
  return {contract(f1, g1), contract(f2, g2), contract(f1, g2) + contract(f2, g1)};
}

double cartesian_product3(const matel3::BasisFn3& f, const matel3::BasisFn3& g, Sector sector, double x, double y,
                          double z) {
  const Config3 c = place3(x, y, z);
  const auto fc = components(f, sector, c), gc = components(g, sector, c);
  return fc[0] * gc[0] + fc[1] * gc[1] + fc[2] * gc[2];
}

matel3::PairElements quad_pair_elements3(const matel3::BasisFn3& f, const matel3::BasisFn3& g, Sector sector,
                                         QuadOptions opts) {
  const ExpTerm3 w = min_range(f) + min_range(g);
  const std::array<double, 3> ranges{w.a, w.b, w.c};
  auto integrate = [&](auto&& pointwise) {
    return quad3(
               [&](double x, double y, double z) {
                 return pointwise(x, y, z) * x * y * z * std::exp(w.a * x + w.b * y + w.c * z);
               },
               ranges, opts)
        .value;
  };
  auto product = [&](double x, double y, double z) { return cartesian_product3(f, g, sector, x, y, z); };
  matel3::PairElements e;
  e.overlap = integrate(product);
  e.inv_r1 = integrate([&](double x, double y, double z) { return product(x, y, z) / x; });
  e.inv_r2 = integrate([&](double x, double y, double z) { return product(x, y, z) / y; });
  e.inv_r12 = integrate([&](double x, double y, double z) { return product(x, y, z) / z; });
  e.grad1 = integrate([&](double x, double y, double z) { return cartesian_gradients3(f, g, sector, x, y, z).grad1; });
  e.grad2 = integrate([&](double x, double y, double z) { return cartesian_gradients3(f, g, sector, x, y, z).grad2; });
  e.grad12 =
      integrate([&](double x, double y, double z) { return cartesian_gradients3(f, g, sector, x, y, z).grad12; });
  return e;
}

double cartesian_grad4(int particle, const ExpTerm4& t, const ExpTerm4& tp, const Distances4& r) {
  // The dot product is linear in cos(phi); the trapezoid rule is exact.
  double sum = 0.0;
  for (int k = 0; k < kDihedralNodes; ++k) {
    const Points4 p = place4(r, 2.0 * std::numbers::pi * k / kDihedralNodes);
    const auto u = log_gradient(particle, t, p);
    const auto v = log_gradient(particle, tp, p);
    sum += u[0] * v[0] + u[1] * v[1] + u[2] * v[2];
  }
  return sum / kDihedralNodes;
}

QuadElements4 quad_pair_elements4(const ExpTerm4& t, const ExpTerm4& tp, QuadOptions opts) {
  const double a = t.a + tp.a, b = t.c + tp.c, c = t.b + tp.b, d = t.d + tp.d;
  auto integrate = [&](auto&& fn) {
    return quad4([&](const Distances4& r) { return r.r13 * r.r23 * r.r14 * r.r24 * fn(r); }, a, b, c, d, 0.0, opts)
        .value;
  };
  QuadElements4 e;
  e.overlap = integrate([](const Distances4&) { return 1.0; });
  e.inv_r12 = integrate([](const Distances4& r) { return 1.0 / r.r12; });
  e.inv_r13 = integrate([](const Distances4& r) { return 1.0 / r.r13; });
  // 1/r34 is integrated in the frame built on the 3-4 axis, where the
  // triangles are (3, 4, 1) and (3, 4, 2): r13 and r24 keep their ranges
  // while r14 and r23 swap roles. Averaging 1/r34 over the dihedral angle of
  // the 1-2 frame instead leaves a logarithmic edge singularity that tensor
  // Gauss rules resolve only slowly.
  const ExpTerm4 tc = t.conjugate(), tpc = tp.conjugate();
  e.inv_r34 = quad4([](const Distances4& r) { return r.r13 * r.r23 * r.r14 * r.r24 / r.r12; }, tc.a + tpc.a,
                    tc.c + tpc.c, tc.b + tpc.b, tc.d + tpc.d, 0.0, opts)
                  .value;
  for (int i = 0; i < 4; ++i) e.grad[i] = integrate([&](const Distances4& r) { return cartesian_grad4(i, t, tp, r); });
  return e;
}

ZExpansion zexp_partial(double z, int order) {
  if (!(z > 0.0)) throw DomainError("zexp_partial needs Z > 0");
  if (order < 0 || order > 4) throw OrderError("zexp_partial: order must be in 0..4");
  static constexpr double kCoeff[] = {1.0, -0.625, 0.157666429, -0.008699032, 0.000888707};
  double sum = 0.0;
  for (int k = 0; k <= order; ++k) sum += kCoeff[k] * std::pow(z, -k);
  return {-z * z * sum, 1.0 / z >= 0.9 * kZExpansionRadius};
}

double gauss_shell_e1(double z) {
  if (!(z > 0.0)) throw DomainError("gauss_shell_e1 needs Z > 0");
  // Radial density 4 Z^3 r^2 e^{-2 Z r}; on r1 = s r2 < r2 the potential is
  // 1/r2, and the r1 > r2 half is identical.
  constexpr int n = 48;
  const Rule& leg = rule(Family::kLegendre01, n);
  const Rule& lag = rule(Family::kLaguerre, n);
  auto density = [z](double r) { return 4.0 * z * z * z * r * r; };
  double sum = 0.0;
  for (int i = 0; i < n; ++i) {
    const double s = leg.x[i];
    const double kappa = 2.0 * z * (1.0 + s);
    double inner = 0.0;
    for (int k = 0; k < n; ++k) {
      const double r2 = lag.x[k] / kappa;
      inner += lag.w[k] * density(s * r2) * density(r2);  // r2 ds from r1, 1/r2 from the potential
    }
    sum += leg.w[i] * inner / kappa;
  }
  return 2.0 * sum;
}

}  // namespace fewbody::oracle
