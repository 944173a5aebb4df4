#pragma once

#include <array>
#include <initializer_list>
#include <map>

namespace fewbody {

/// Laurent polynomial in the three interparticle distances (x, y, z).
/// Negative exponents may appear in intermediate products; integration
/// requires them to cancel against the volume element.
class Poly3 {
 public:
  using Exponents = std::array<int, 3>;

  Poly3() = default;
  explicit Poly3(double constant) {
    if (constant != 0.0) terms_[{0, 0, 0}] = constant;
  }
  static Poly3 monomial(double coeff, int i, int j, int k) {
    Poly3 p;
    if (coeff != 0.0) p.terms_[{i, j, k}] = coeff;
    return p;
  }
  static Poly3 x() { return monomial(1.0, 1, 0, 0); }
  static Poly3 y() { return monomial(1.0, 0, 1, 0); }
  static Poly3 z() { return monomial(1.0, 0, 0, 1); }

  const std::map<Exponents, double>& terms() const { return terms_; }
  bool empty() const { return terms_.empty(); }

  /// Partial derivative with respect to variable 0, 1 or 2.
  Poly3 derivative(int var) const;
  double evaluate(double x, double y, double z) const;

  Poly3& operator+=(const Poly3& o);
  Poly3& operator-=(const Poly3& o);
  Poly3& operator*=(double s);

  friend Poly3 operator+(Poly3 a, const Poly3& b) { return a += b; }
  friend Poly3 operator-(Poly3 a, const Poly3& b) { return a -= b; }
  friend Poly3 operator*(Poly3 a, double s) { return a *= s; }
  friend Poly3 operator*(double s, Poly3 a) { return a *= s; }
  friend Poly3 operator*(const Poly3& a, const Poly3& b);

 private:
  void add(const Exponents& e, double c);
  std::map<Exponents, double> terms_;
};

}  // namespace fewbody
