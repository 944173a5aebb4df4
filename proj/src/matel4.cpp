#include "fewbody/matel4.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "fewbody/errors.hpp"
#include "fewbody/jet.hpp"

namespace fewbody::matel4 {

namespace {

// Variables of F4: 0 -> r13, 1 -> r23, 2 -> r14, 3 -> r24, 4 -> r12.
constexpr int kAssemblyOrder = 5;
using JetG = Jet<5, kMaxOrder>;
using JetA = Jet<5, kAssemblyOrder>;

double value_of(double x) { return x; }
template <int N, int K>
double value_of(const Jet<N, K>& x) {
  return x.value();
}
double inverse(double x) { return 1.0 / x; }
template <int N, int K>
Jet<N, K> inverse(const Jet<N, K>& x) {
  return reciprocal(x);
}
double logarithm(double x) { return std::log(x); }
template <int N, int K>
Jet<N, K> logarithm(const Jet<N, K>& x) {
  return log(x);
}

// Terms needed for a geometric tail ratio^(2k - order) below 1e-17.
int series_terms(double ratio, int order) {
  if (ratio == 0.0) return order / 2 + 1;
  const double need = order + 39.2 / -std::log(ratio);
  return static_cast<int>(std::ceil(need / 2.0)) + 1;
}

// E_s[(S + p s + q t)^-2] over s, t uniform in [-1, 1], q treated in closed
// form and p by its even power series.
template <class T>
T h_series_p(const T& s, const T& p, const T& q, int terms) {
  const T rm = inverse(s - q);
  const T rp = inverse(s + q);
  const T rm2 = rm * rm;
  const T rp2 = rp * rp;
  const T p2 = p * p;
  T pm = rm;
  T pp = rp;
  T pk(1.0);
  T sum(0.0);
  for (int k = 0; k < terms; ++k) {
    sum = sum + pk * (pm - pp) * (1.0 / (2 * k + 1));
    pm = pm * rm2;
    pp = pp * rp2;
    pk = pk * p2;
  }
  return sum * inverse(q * 2.0);
}

template <class T>
T h_series_pq(const T& s, const T& p, const T& q, int terms) {
  std::vector<T> p_pow{T(1.0)};
  std::vector<T> q_pow{T(1.0)};
  const T p2 = p * p;
  const T q2 = q * q;
  for (int k = 1; k < terms; ++k) {
    p_pow.push_back(p_pow.back() * p2);
    q_pow.push_back(q_pow.back() * q2);
  }
  const T rs = inverse(s);
  const T rs2 = rs * rs;
  T scale = rs2;
  T sum(0.0);
  for (int m = 0; m < terms; ++m) {
    T inner(0.0);
    double binom = 1.0;  // C(2m, 2k)
    for (int k = 0; k <= m; ++k) {
      inner = inner + p_pow[k] * q_pow[m - k] * (binom / ((2 * k + 1) * (2 * m - 2 * k + 1)));
      binom = binom * (2 * m - 2 * k) * (2 * m - 2 * k - 1) / ((2 * k + 1) * (2 * k + 2));
    }
    sum = sum + inner * scale * (2 * m + 1.0);
    scale = scale * rs2;
  }
  return sum;
}

template <class T>
T f4_eval(const T& a, const T& b, const T& c, const T& d, const T& u, int order) {
  const double a0 = value_of(a), b0 = value_of(b), c0 = value_of(c), d0 = value_of(d), u0 = value_of(u);
  if (!(a0 + b0 > 0.0) || !(c0 + d0 > 0.0) || !(std::min(a0, b0) + std::min(c0, d0) + u0 > 0.0))
    throw DomainError("F4 undefined: log arguments must be positive (" + std::to_string(a0) + ", " +
                      std::to_string(b0) + ", " + std::to_string(c0) + ", " + std::to_string(d0) +
                      ", " + std::to_string(u0) + ")");
  const T x = (a + b) * 0.5;
  const T y = (c + d) * 0.5;
  const T p = (a - b) * 0.5;
  const T q = (c - d) * 0.5;
  const T s = x + y + u;
  const double s0 = value_of(s), p0 = std::abs(value_of(p)), q0 = std::abs(value_of(q));
  const double rho_p = p0 / (s0 - q0);
  const double rho_q = q0 / (s0 - p0);
  const bool small_p = rho_p < kSeriesThreshold;
  const bool small_q = rho_q < kSeriesThreshold;
  T h;
  if (small_p && small_q) {
    h = h_series_pq(s, p, q, series_terms((p0 + q0) / s0, order));
  } else if (small_p) {
    h = h_series_p(s, p, q, series_terms(rho_p, order));
  } else if (small_q) {
    h = h_series_p(s, q, p, series_terms(rho_q, order));
  } else {
    h = (logarithm(s - p + q) + logarithm(s + p - q) - logarithm(s + p + q) - logarithm(s - p - q)) *
        inverse(p * q * 4.0);
  }
  return h * inverse(x * y) * 4.0;
}

template <class J>
J f4_jet(double a, double b, double c, double d, double u) {
  return f4_eval(J::variable(0, a), J::variable(1, b), J::variable(2, c), J::variable(3, d),
                 J::variable(4, u), J::kOrder);
}

// Signed derivative (-1)^total d^total F4 read off a jet.
template <class J>
double moment(const J& jet, int n13, int n23, int n14, int n24, int u_order) {
  const int total = n13 + n23 + n14 + n24 + u_order;
  const double sign = total % 2 ? -1.0 : 1.0;
  return sign * jet.derivative({n13, n23, n14, n24, u_order});
}

// Elements that involve particles 3, 1 and 2 only through the F4 arguments
// of (t, t'); the remaining ones follow from the 1<->3, 2<->4 relabeling.
struct HalfElements {
  double overlap, inv_r12, inv_r13, inv_r14, inv_r23, inv_r24, grad3, grad4;
};

// Mom(n12, n13, n23, n14, n24): integral of r12^n12 r13^n13 ... against the
// exponential; the measure r13 r23 r14 r24 is included in the exponents.
HalfElements half_elements(const ExpTerm4& t, const ExpTerm4& tp) {
  const JetA f = f4_jet<JetA>(t.a + tp.a, t.c + tp.c, t.b + tp.b, t.d + tp.d, 0.0);
  auto mom = [&](int n12, int n13, int n23, int n14, int n24) {
    return moment(f, n13, n23, n14, n24, n12 + 1);
  };
  HalfElements h{};
  h.overlap = mom(0, 1, 1, 1, 1);
  h.inv_r13 = mom(0, 0, 1, 1, 1);
  h.inv_r23 = mom(0, 1, 0, 1, 1);
  h.inv_r14 = mom(0, 1, 1, 0, 1);
  h.inv_r24 = mom(0, 1, 1, 1, 0);
  h.inv_r12 = mom(-1, 1, 1, 1, 1);
  // Particle 3 sees r13 (range a) and r23 (range c); the cosine between
  // r31 and r32 is (r13^2 + r23^2 - r12^2) / (2 r13 r23).
  h.grad3 = (t.a * tp.a + t.c * tp.c) * h.overlap +
            0.5 * (t.a * tp.c + t.c * tp.a) * (mom(0, 2, 0, 1, 1) + mom(0, 0, 2, 1, 1) - mom(2, 0, 0, 1, 1));
  // Particle 4 sees r14 (range b) and r24 (range d).
  h.grad4 = (t.b * tp.b + t.d * tp.d) * h.overlap +
            0.5 * (t.b * tp.d + t.d * tp.b) * (mom(0, 1, 1, 2, 0) + mom(0, 1, 1, 0, 2) - mom(2, 1, 1, 0, 0));
  return h;
}

bool same_mass(double x, double y) { return std::abs(x - y) <= 1e-12 * std::max({1.0, std::abs(x), std::abs(y)}); }

}  // namespace

double f4(double a, double b, double c, double d, double u) {
  return f4_eval(a, b, c, d, u, 0);
}

double g4(DerivIndex4 idx, double a, double b, double c, double d) {
  if (idx.a < 0 || idx.b < 0 || idx.c < 0 || idx.d < 0 || idx.u < 0)
    throw OrderError("g4: negative derivative order");
  if (idx.total() > kMaxOrder)
    throw OrderError("g4: total order " + std::to_string(idx.total()) + " exceeds " + std::to_string(kMaxOrder));
  const JetG f = f4_jet<JetG>(a, b, c, d, 0.0);
  return moment(f, idx.a, idx.b, idx.c, idx.d, idx.u);
}

PairElements4& PairElements4::operator+=(const PairElements4& o) {
  overlap += o.overlap;
  for (int i = 0; i < 4; ++i) grad[i] += o.grad[i];
  inv_r12 += o.inv_r12;
  inv_r34 += o.inv_r34;
  inv_r13 += o.inv_r13;
  inv_r14 += o.inv_r14;
  inv_r23 += o.inv_r23;
  inv_r24 += o.inv_r24;
  return *this;
}

PairElements4& PairElements4::operator*=(double s) {
  overlap *= s;
  for (double& g : grad) g *= s;
  inv_r12 *= s;
  inv_r34 *= s;
  inv_r13 *= s;
  inv_r14 *= s;
  inv_r23 *= s;
  inv_r24 *= s;
  return *this;
}

double PairElements4::kinetic(const SystemSpec& spec) const {
  double t = 0.0;
  for (int i = 0; i < 4; ++i) t += 0.5 * spec.inv_masses[i] * grad[i];
  return t;
}

double PairElements4::potential() const {
  return inv_r12 + inv_r34 - inv_r13 - inv_r14 - inv_r23 - inv_r24;
}

PairElements4 pair_elements4(const ExpTerm4& t, const ExpTerm4& tp) {
  const HalfElements h = half_elements(t, tp);
  // Relabeling 1<->3, 2<->4 maps r12 -> r34, r13 -> r13, r14 -> r23, and
  // particles 3, 4 onto 1, 2.
  const HalfElements c = half_elements(t.conjugate(), tp.conjugate());
  PairElements4 e;
  e.overlap = h.overlap;
  e.inv_r12 = h.inv_r12;
  e.inv_r34 = c.inv_r12;
  e.inv_r13 = h.inv_r13;
  e.inv_r14 = h.inv_r14;
  e.inv_r23 = h.inv_r23;
  e.inv_r24 = h.inv_r24;
  e.grad = {c.grad3, c.grad4, h.grad3, h.grad4};
  return e;
}

std::vector<ExpTerm4> symmetry_images(const ExpTerm4& t, const SystemSpec& spec) {
  std::vector<ExpTerm4> images{t};
  if (same_mass(spec.inv_masses[0], spec.inv_masses[1])) images.push_back(t.swap_positive());
  if (same_mass(spec.inv_masses[2], spec.inv_masses[3])) {
    const std::size_t n = images.size();
    for (std::size_t i = 0; i < n; ++i) images.push_back(images[i].swap_negative());
  }
  return images;
}

MatBlock assemble4(const std::vector<ExpTerm4>& terms, const SystemSpec& spec) {
  if (!spec.is_four_body()) throw DomainError("assemble4 needs a four-body spec");
  spec.validate();
  const auto n = static_cast<Eigen::Index>(terms.size());
  MatBlock m(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = i; j < n; ++j) {
      // The Hamiltonian commutes with the exchanges kept in the group, so
      // <sum_g g t | O | sum_h h t'> = |G| sum_h <t | O | h t'>. The factor
      // |G| is dropped.
      const auto images = symmetry_images(terms[j], spec);
      PairElements4 sum;
      for (std::size_t h = 0; h < images.size(); ++h) {
        PairElements4 e = pair_elements4(terms[i], images[h]);
        // Odd images carry the exchange sign: P12 and P34 each contribute
        // epsilon, so index parity in the generated list is the sign.
        int flips = 0;
        if (images.size() == 4) flips = (h == 1) + (h == 2);
        else if (images.size() == 2) flips = (h == 1);
        if (flips % 2 == 1 && spec.epsilon < 0) e *= -1.0;
        sum += e;
      }
      m.n_mat(i, j) = m.n_mat(j, i) = sum.overlap;
      m.t_mat(i, j) = m.t_mat(j, i) = sum.kinetic(spec);
      m.v_mat(i, j) = m.v_mat(j, i) = sum.potential();
    }
  }
  return m;
}

HylleraasOre ho_ntv(double beta) {
  if (!(beta >= 0.0) || !(beta < 1.0)) throw DomainError("ho_ntv needs 0 <= beta < 1");
  const double b2 = beta * beta;
  const double w = 1.0 - b2;
  const double w3 = w * w * w;
  double bracket = 0.0;
  if (beta < 0.1) {
    // Bracket = 1 + c3/4 - 5x/8 + sum_{n>=4} c_n/4 x^(n-3), x = beta^2, with
    // c_n = sum_j C(4, j) (-1)^j / (n - j) from (1 - x)^4 log(1/(1 - x)).
    static constexpr double kBinom[] = {1.0, -4.0, 6.0, -4.0, 1.0};
    auto coeff = [](int k) {
      double c = 0.0;
      for (int j = 0; j <= 4 && j < k; ++j) c += kBinom[j] / (k - j);
      return c;
    };
    bracket = 1.0 + coeff(3) / 4.0 - 5.0 * b2 / 8.0;
    double xp = b2;
    for (int k = 4; k < 40; ++k, xp *= b2) bracket += coeff(k) / 4.0 * xp;
  } else {
    const double b4 = b2 * b2;
    bracket = 1.0 - 5.0 * b2 / 8.0 - 1.0 / (4.0 * b4) + 7.0 / (8.0 * b2) +
              std::pow(w, 4) / (4.0 * b4 * b2) * std::log(1.0 / w);
  }
  HylleraasOre r;
  r.n = 33.0 / 16.0 + (33.0 - 22.0 * b2 + 5.0 * b2 * b2) / (16.0 * w3);
  r.t = 21.0 / 8.0 - 1.5 * b2 + (21.0 - 6.0 * b2 + b2 * b2) / (8.0 * w3);
  r.v = 19.0 / 6.0 + (21.0 - 18.0 * b2 + 5.0 * b2 * b2) / (4.0 * w3) - bracket / (w * w);
  return r;
}

ExpTerm4 hylleraas_ore_term(double beta) {
  const double a = 0.5 * (1.0 + beta);
  const double b = 0.5 * (1.0 - beta);
  return {a, b, b, a};
}

}  // namespace fewbody::matel4
