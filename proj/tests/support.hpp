#pragma once

// Shared helpers for the unit tests.

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>

namespace fewbody::test_support {

inline double rel_error(double computed, double expected) {
  const double scale = std::max(std::abs(expected), 1e-300);
  return std::abs(computed - expected) / scale;
}

/// Nested central differences of f at x for the mixed derivative with
/// orders `e`, step h.
template <std::size_t N>
double central_difference(const std::function<double(const std::array<double, N>&)>& f, std::array<double, N> x,
                          std::array<int, N> e, double h) {
  for (std::size_t v = 0; v < N; ++v) {
    if (e[v] == 0) continue;
    --e[v];
    std::array<double, N> xp = x;
    std::array<double, N> xm = x;
    xp[v] += h;
    xm[v] -= h;
    return (central_difference<N>(f, xp, e, h) - central_difference<N>(f, xm, e, h)) / (2.0 * h);
  }
  return f(x);
}

/// Central differences with two Richardson steps: error O(h^6).
template <std::size_t N>
double richardson_difference(const std::function<double(const std::array<double, N>&)>& f,
                             const std::array<double, N>& x, const std::array<int, N>& e, double h) {
  const double d1 = central_difference<N>(f, x, e, h);
  const double d2 = central_difference<N>(f, x, e, h / 2.0);
  const double d4 = central_difference<N>(f, x, e, h / 4.0);
  const double r1 = (4.0 * d2 - d1) / 3.0;
  const double r2 = (4.0 * d4 - d2) / 3.0;
  return (16.0 * r2 - r1) / 15.0;
}

}  // namespace fewbody::test_support
