#pragma once

// Truncated multivariate Taylor polynomials ("order-extended dual numbers").
//
// A Jet<N, K> holds every Taylor coefficient of total degree <= K of a
// function of N variables about a fixed point. Arithmetic propagates the
// coefficients exactly, so mixed partial derivatives of any order <= K come
// out without finite-difference noise.

#include <array>
#include <cmath>
#include <cstddef>
#include <utility>
#include <vector>

namespace fewbody {

namespace jet_detail {

constexpr std::size_t binomial(int n, int k) {
  if (k < 0 || k > n) return 0;
  std::size_t r = 1;
  for (int i = 1; i <= k; ++i) r = r * static_cast<std::size_t>(n - k + i) / static_cast<std::size_t>(i);
  return r;
}

template <int N, int K>
struct Tables {
  static constexpr std::size_t kSize = binomial(N + K, K);

  std::vector<std::array<int, N>> exponents;  // index -> multi-index
  std::vector<int> degree;                    // index -> total degree
  std::vector<double> factorial_weight;       // index -> prod(e_i!)
  // Flattened (i, j, i+j) triples with deg(i) + deg(j) <= K.
  std::vector<std::array<int, 3>> products;

  Tables() {
    std::array<int, N> e{};
    enumerate(0, K, e);
    for (std::size_t i = 0; i < exponents.size(); ++i) {
      int d = 0;
      double w = 1.0;
      for (int v = 0; v < N; ++v) {
        d += exponents[i][v];
        for (int f = 2; f <= exponents[i][v]; ++f) w *= f;
      }
      degree.push_back(d);
      factorial_weight.push_back(w);
    }
    for (std::size_t i = 0; i < exponents.size(); ++i) {
      for (std::size_t j = 0; j < exponents.size(); ++j) {
        if (degree[i] + degree[j] > K) continue;
        std::array<int, N> s{};
        for (int v = 0; v < N; ++v) s[v] = exponents[i][v] + exponents[j][v];
        products.push_back({static_cast<int>(i), static_cast<int>(j), static_cast<int>(index_of(s))});
      }
    }
  }

  std::size_t index_of(const std::array<int, N>& e) const {
    // Linear search is only used while building tables; lookups from
    // client code go through offset().
    for (std::size_t i = 0; i < exponents.size(); ++i)
      if (exponents[i] == e) return i;
    return kSize;
  }

  // Graded lexicographic enumeration: degree 0 first, then degree 1, ...
  void enumerate(int, int max_degree, std::array<int, N>& e) {
    for (int d = 0; d <= max_degree; ++d) fill(0, d, e);
  }
  void fill(int var, int remaining, std::array<int, N>& e) {
    if (var == N - 1) {
      e[var] = remaining;
      exponents.push_back(e);
      return;
    }
    for (int k = remaining; k >= 0; --k) {
      e[var] = k;
      fill(var + 1, remaining - k, e);
    }
  }
};

template <int N, int K>
const Tables<N, K>& tables() {
  static const Tables<N, K> t;
  return t;
}

}  // namespace jet_detail

template <int N, int K>
class Jet {
 public:
  static constexpr int kVars = N;
  static constexpr int kOrder = K;
  static constexpr std::size_t kSize = jet_detail::binomial(N + K, K);

  Jet() { c_.fill(0.0); }
  explicit Jet(double value) {
    c_.fill(0.0);
    c_[0] = value;
  }

  /// The independent variable number `var` expanded about `value`.
  static Jet variable(int var, double value) {
    Jet j(value);
    std::array<int, N> e{};
    e[var] = 1;
    j.c_[jet_detail::tables<N, K>().index_of(e)] = 1.0;
    return j;
  }

  /// Build from raw Taylor coefficients in the graded table order.
  static Jet from_coefficients(const std::array<double, kSize>& c) {
    Jet j;
    j.c_ = c;
    return j;
  }

  double value() const { return c_[0]; }
  double coefficient(std::size_t i) const { return c_[i]; }
  const std::array<double, kSize>& coefficients() const { return c_; }

  /// Taylor coefficient of the monomial with exponents `e`.
  double coefficient(const std::array<int, N>& e) const {
    const auto& t = jet_detail::tables<N, K>();
    const std::size_t i = t.index_of(e);
    return i < kSize ? c_[i] : 0.0;
  }

  /// Mixed partial derivative with orders `e`; zero when |e| > K.
  double derivative(const std::array<int, N>& e) const {
    const auto& t = jet_detail::tables<N, K>();
    const std::size_t i = t.index_of(e);
    return i < kSize ? c_[i] * t.factorial_weight[i] : 0.0;
  }

  Jet& operator+=(const Jet& o) {
    for (std::size_t i = 0; i < kSize; ++i) c_[i] += o.c_[i];
    return *this;
  }
  Jet& operator-=(const Jet& o) {
    for (std::size_t i = 0; i < kSize; ++i) c_[i] -= o.c_[i];
    return *this;
  }
  Jet& operator*=(double s) {
    for (auto& v : c_) v *= s;
    return *this;
  }
  Jet& operator+=(double s) {
    c_[0] += s;
    return *this;
  }

  friend Jet operator+(Jet a, const Jet& b) { return a += b; }
  friend Jet operator-(Jet a, const Jet& b) { return a -= b; }
  friend Jet operator*(Jet a, double s) { return a *= s; }
  friend Jet operator*(double s, Jet a) { return a *= s; }
  friend Jet operator+(Jet a, double s) { return a += s; }
  friend Jet operator-(const Jet& a) { return a * -1.0; }

  friend Jet operator*(const Jet& a, const Jet& b) {
    Jet r;
    for (const auto& p : jet_detail::tables<N, K>().products) r.c_[p[2]] += a.c_[p[0]] * b.c_[p[1]];
    return r;
  }

  /// 1/a, requires a.value() != 0.
  friend Jet reciprocal(const Jet& a) {
    const double a0 = a.c_[0];
    Jet h = a;
    h.c_[0] = 0.0;
    h *= -1.0 / a0;
    // 1/(a0 (1 - h')) = (1/a0) sum h'^n
    Jet sum(1.0);
    Jet term(1.0);
    for (int n = 1; n <= K; ++n) {
      term = term * h;
      sum += term;
    }
    return sum * (1.0 / a0);
  }

  /// log(a), requires a.value() > 0.
  friend Jet log(const Jet& a) {
    const double a0 = a.c_[0];
    Jet h = a;
    h.c_[0] = 0.0;
    h *= 1.0 / a0;
    Jet sum(std::log(a0));
    Jet term(1.0);
    for (int n = 1; n <= K; ++n) {
      term = term * h;
      sum += term * ((n % 2 == 1 ? 1.0 : -1.0) / n);
    }
    return sum;
  }

  /// a^n for n >= 0 by repeated squaring.
  friend Jet pow(const Jet& a, int n) {
    Jet r(1.0);
    Jet base = a;
    while (n > 0) {
      if (n & 1) r = r * base;
      n >>= 1;
      if (n) base = base * base;
    }
    return r;
  }

 private:
  std::array<double, kSize> c_;
};

}  // namespace fewbody
