#pragma once

// Truncated bivariate Taylor jets. Coefficients are raw partials:
// coeff(i, j) = d^{i+j} f / du1^i du2^j at the base point.

#include <array>
#include <functional>

#include "frontal/error.hpp"

namespace frontal {

constexpr int kMaxOrder = 4;
constexpr int kMaxCoeffs = (kMaxOrder + 1) * (kMaxOrder + 2) / 2;

constexpr int ncoeffs(int order) { return (order + 1) * (order + 2) / 2; }
// Graded layout: total degree n block starts at n(n+1)/2, offset j inside it.
constexpr int jet_index(int i, int j) { return (i + j) * (i + j + 1) / 2 + j; }

class Jet {
 public:
  Jet() = default;
  explicit Jet(int order, double value = 0.0);

  static Jet constant(double value, int order) { return Jet(order, value); }
  // var = 0 for u1, 1 for u2.
  static Jet variable(int var, double at, int order);

  int order() const { return order_; }
  int size() const { return ncoeffs(order_); }
  double value() const { return c_[0]; }

  double coeff(int i, int j) const;
  double& coeff(int i, int j);
  double operator[](int k) const { return c_[k]; }
  double& operator[](int k) { return c_[k]; }

  Jet truncate(int order) const;
  // Partial derivative; the result carries one order less.
  Jet derivative(int var) const;

  Jet operator-() const;
  Jet& operator+=(const Jet& o);
  Jet& operator-=(const Jet& o);
  Jet& operator*=(const Jet& o);
  Jet& operator/=(const Jet& o);
  Jet& operator+=(double s);
  Jet& operator-=(double s);
  Jet& operator*=(double s);
  Jet& operator/=(double s);

 private:
  int order_ = 0;
  std::array<double, kMaxCoeffs> c_{};
};

// Binary operations on jets of different order truncate to the smaller one.
Jet operator+(Jet a, const Jet& b);
Jet operator-(Jet a, const Jet& b);
Jet operator*(const Jet& a, const Jet& b);
Jet operator/(const Jet& a, const Jet& b);
Jet operator+(Jet a, double s);
Jet operator+(double s, Jet a);
Jet operator-(Jet a, double s);
Jet operator-(double s, const Jet& a);
Jet operator*(Jet a, double s);
Jet operator*(double s, Jet a);
Jet operator/(Jet a, double s);
Jet operator/(double s, const Jet& a);

// g o f from the derivatives g^(k)(f(0)), k = 0..f.order().
Jet compose(const Jet& f, const double* g_derivs);

Jet inv(const Jet& a);
Jet sin(const Jet& a);
Jet cos(const Jet& a);
Jet exp(const Jet& a);
Jet sqrt(const Jet& a);
Jet abs(const Jet& a);
Jet pow(const Jet& a, int n);
// Real exponent; requires a positive base.
Jet pow(const Jet& a, double p);

struct JetVec3 {
  std::array<Jet, 3> c;

  JetVec3() = default;
  JetVec3(Jet x, Jet y, Jet z) : c{std::move(x), std::move(y), std::move(z)} {}
  static JetVec3 constant(double x, double y, double z, int order);

  Jet& operator[](int i) { return c[i]; }
  const Jet& operator[](int i) const { return c[i]; }
  int order() const;
  std::array<double, 3> value() const { return {c[0].value(), c[1].value(), c[2].value()}; }
  JetVec3 derivative(int var) const;
  JetVec3 truncate(int order) const;
};

JetVec3 operator+(const JetVec3& a, const JetVec3& b);
JetVec3 operator-(const JetVec3& a, const JetVec3& b);
JetVec3 operator-(const JetVec3& a);
JetVec3 operator*(const Jet& s, const JetVec3& a);
JetVec3 operator*(double s, const JetVec3& a);
Jet dot(const JetVec3& a, const JetVec3& b);
JetVec3 cross(const JetVec3& a, const JetVec3& b);
Jet norm(const JetVec3& a);
Jet det3(const JetVec3& a, const JetVec3& b, const JetVec3& c);

// 2x2 matrix of jets, m[row][col].
struct Mat2J {
  std::array<std::array<Jet, 2>, 2> m;

  static Mat2J zero(int order);
  static Mat2J identity(int order);
  Jet& operator()(int i, int j) { return m[i][j]; }
  const Jet& operator()(int i, int j) const { return m[i][j]; }
  int order() const;
  Mat2J derivative(int var) const;
  Mat2J transpose() const;
  Mat2J truncate(int order) const;
  std::array<std::array<double, 2>, 2> value() const;
};

Mat2J operator+(const Mat2J& a, const Mat2J& b);
Mat2J operator-(const Mat2J& a, const Mat2J& b);
Mat2J operator*(const Mat2J& a, const Mat2J& b);
Mat2J operator*(const Jet& s, const Mat2J& a);
Jet det(const Mat2J& a);
Jet trace(const Mat2J& a);
Mat2J inverse(const Mat2J& a);

using ScalarFn = std::function<double(double, double)>;
using JetFn = std::function<Jet(double, double, int)>;

// Central differences of all partials up to `order` (<= 4), one Richardson
// level on top of the O(step^2) stencils.
Jet fd_jet(const ScalarFn& f, double u1, double u2, int order, double step = 1e-3);

struct QuadratureConfig {
  int nodes = 32;
  int max_nodes = 512;
  double tol = 1e-11;
};

// F(u) = int_{lower}^{u_active} g(t, u_passive) dt, where g is evaluated with
// the active coordinate replaced by t. Endpoint derivatives come from the
// fundamental theorem of calculus, passive ones from quadrature of g's jets.
Jet integrate_jet(const JetFn& g, double lower, int active, double u1, double u2, int order,
                  const QuadratureConfig& cfg = {});

}  // namespace frontal
