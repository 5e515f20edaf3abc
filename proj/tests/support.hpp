#pragma once

// Shared helpers for the unit suites: random expressions, a central-difference
// oracle independent of the library's fd_jet, and small comparison utilities.

#include <algorithm>
#include <cmath>
#include <functional>
#include <random>
#include <string>

#include "frontal/catalog.hpp"
#include "frontal/expr.hpp"
#include "frontal/jet.hpp"

namespace testing {

inline double rel_err(double got, double want) { return std::abs(got - want) / std::max(1.0, std::abs(want)); }

inline double max_abs_diff(const frontal::Vec3& a, const frontal::Vec3& b) {
  double m = 0;
  for (int k = 0; k < 3; ++k) m = std::max(m, std::abs(a[k] - b[k]));
  return m;
}

inline frontal::Frontal entry(const std::string& name) { return frontal::find_entry(name).frontal(); }

// Random smooth expressions over u1, u2. Every sqrt, division and real power
// sees an argument bounded away from zero on [-1, 1]^2.
class ExprGen {
 public:
  explicit ExprGen(unsigned seed) : rng_(seed) {}

  std::string make(int depth) {
    if (depth == 0) return leaf();
    switch (pick(9)) {
      case 0: return "(" + make(depth - 1) + " + " + make(depth - 1) + ")";
      case 1: return "(" + make(depth - 1) + " - " + make(depth - 1) + ")";
      case 2: return "(" + make(depth - 1) + " * " + make(depth - 1) + ")";
      case 3: return "(" + make(depth - 1) + ") / (2 + " + bounded(depth - 1) + ")";
      case 4: return "sin(" + make(depth - 1) + ")";
      case 5: return "cos(" + make(depth - 1) + ")";
      case 6: return "exp(" + bounded(depth - 1) + ")";
      case 7: return "sqrt(1.5 + " + bounded(depth - 1) + ")";
      default: return "(" + make(depth - 1) + ")^" + std::to_string(1 + pick(3));
    }
  }

  double uniform(double a, double b) { return std::uniform_real_distribution<double>(a, b)(rng_); }
  int pick(int n) { return std::uniform_int_distribution<int>(0, n - 1)(rng_); }

 private:
  std::string leaf() {
    switch (pick(4)) {
      case 0: return "u1";
      case 1: return "u2";
      case 2: return "(u1*u2)";
      default: return std::to_string(std::round(uniform(-2, 2) * 100) / 100);
    }
  }
  // Values in [-1, 1].
  std::string bounded(int depth) { return (pick(2) ? "sin(" : "cos(") + make(depth) + ")"; }

  std::mt19937 rng_;
};

// Partial derivative d^{i+j} f / du1^i du2^j from tensor products of
// fourth-order central stencils.
inline double central_partial(const std::function<double(double, double)>& f, double u1, double u2, int i, int j,
                              double h) {
  struct Stencil {
    int half;
    double w[7];  // offsets -3..3
    double denom;
  };
  static const Stencil st[4] = {
      {0, {0, 0, 0, 1, 0, 0, 0}, 1},
      {2, {0, 1, -8, 0, 8, -1, 0}, 12},
      {2, {0, -1, 16, -30, 16, -1, 0}, 12},
      {3, {1, -8, 13, 0, -13, 8, -1}, 8},
  };
  const Stencil& a = st[i];
  const Stencil& b = st[j];
  double s = 0;
  for (int p = -a.half; p <= a.half; ++p)
    for (int q = -b.half; q <= b.half; ++q) {
      const double w = a.w[p + 3] * b.w[q + 3];
      if (w != 0) s += w * f(u1 + p * h, u2 + q * h);
    }
  return s / (a.denom * b.denom * std::pow(h, i + j));
}

}  // namespace testing
