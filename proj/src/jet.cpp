#include "frontal/jet.hpp"

#include <gsl/gsl_integration.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <vector>

namespace frontal {

namespace {

constexpr double kBinom[kMaxOrder + 1][kMaxOrder + 1] = {
    {1, 0, 0, 0, 0}, {1, 1, 0, 0, 0}, {1, 2, 1, 0, 0}, {1, 3, 3, 1, 0}, {1, 4, 6, 4, 1}};

constexpr double kFactorial[kMaxOrder + 1] = {1, 1, 2, 6, 24};

void check_order(int order) {
  if (order < 0 || order > kMaxOrder)
    fail(ErrorKind::InsufficientJetOrder, "jet order " + std::to_string(order) + " outside 0..4");
}

}  // namespace

Jet::Jet(int order, double value) : order_(order) {
  check_order(order);
  c_[0] = value;
}

Jet Jet::variable(int var, double at, int order) {
  Jet j(order, at);
  if (order >= 1) j.coeff(var == 0 ? 1 : 0, var == 0 ? 0 : 1) = 1.0;
  return j;
}

double Jet::coeff(int i, int j) const {
  if (i < 0 || j < 0 || i + j > order_)
    fail(ErrorKind::InsufficientJetOrder, "coefficient beyond carried order");
  return c_[jet_index(i, j)];
}

double& Jet::coeff(int i, int j) {
  if (i < 0 || j < 0 || i + j > order_)
    fail(ErrorKind::InsufficientJetOrder, "coefficient beyond carried order");
  return c_[jet_index(i, j)];
}

Jet Jet::truncate(int order) const {
  if (order > order_) fail(ErrorKind::InsufficientJetOrder, "cannot raise jet order");
  Jet r(order);
  for (int k = 0; k < ncoeffs(order); ++k) r.c_[k] = c_[k];
  return r;
}

Jet Jet::derivative(int var) const {
  if (order_ == 0) fail(ErrorKind::InsufficientJetOrder, "derivative of an order-0 jet");
  Jet r(order_ - 1);
  for (int n = 0; n <= order_ - 1; ++n)
    for (int j = 0; j <= n; ++j) {
      int i = n - j;
      r.c_[jet_index(i, j)] = var == 0 ? c_[jet_index(i + 1, j)] : c_[jet_index(i, j + 1)];
    }
  return r;
}

Jet Jet::operator-() const {
  Jet r = *this;
  for (int k = 0; k < size(); ++k) r.c_[k] = -c_[k];
  return r;
}

Jet& Jet::operator+=(const Jet& o) {
  if (o.order_ < order_) *this = truncate(o.order_);
  for (int k = 0; k < size(); ++k) c_[k] += o.c_[k];
  return *this;
}

Jet& Jet::operator-=(const Jet& o) {
  if (o.order_ < order_) *this = truncate(o.order_);
  for (int k = 0; k < size(); ++k) c_[k] -= o.c_[k];
  return *this;
}

Jet& Jet::operator*=(const Jet& o) { return *this = *this * o; }
Jet& Jet::operator/=(const Jet& o) { return *this = *this / o; }

Jet& Jet::operator+=(double s) {
  c_[0] += s;
  return *this;
}

Jet& Jet::operator-=(double s) {
  c_[0] -= s;
  return *this;
}

Jet& Jet::operator*=(double s) {
  for (int k = 0; k < size(); ++k) c_[k] *= s;
  return *this;
}

Jet& Jet::operator/=(double s) {
  for (int k = 0; k < size(); ++k) c_[k] /= s;
  return *this;
}

Jet operator+(Jet a, const Jet& b) { return a += b; }
Jet operator-(Jet a, const Jet& b) { return a -= b; }
Jet operator+(Jet a, double s) { return a += s; }
Jet operator+(double s, Jet a) { return a += s; }
Jet operator-(Jet a, double s) { return a -= s; }
Jet operator-(double s, const Jet& a) { return (-a) += s; }
Jet operator*(Jet a, double s) { return a *= s; }
Jet operator*(double s, Jet a) { return a *= s; }
Jet operator/(Jet a, double s) { return a /= s; }
Jet operator/(double s, const Jet& a) { return inv(a) *= s; }

Jet operator*(const Jet& a, const Jet& b) {
  const int order = std::min(a.order(), b.order());
  Jet r(order);
  for (int n = 0; n <= order; ++n)
    for (int j = 0; j <= n; ++j) {
      const int i = n - j;
      double s = 0.0;
      for (int p = 0; p <= i; ++p)
        for (int q = 0; q <= j; ++q)
          s += kBinom[i][p] * kBinom[j][q] * a[jet_index(p, q)] * b[jet_index(i - p, j - q)];
      r[jet_index(i, j)] = s;
    }
  return r;
}

Jet operator/(const Jet& a, const Jet& b) { return a * inv(b); }

Jet compose(const Jet& f, const double* g) {
  const int order = f.order();
  Jet delta = f;
  delta[0] = 0.0;
  Jet r(order, g[0]);
  Jet power(order, 1.0);
  for (int k = 1; k <= order; ++k) {
    power = power * delta;
    r += power * (g[k] / kFactorial[k]);
  }
  return r;
}

Jet inv(const Jet& a) {
  const double y = a.value();
  if (y == 0.0) fail(ErrorKind::DivisionByZeroValue, "reciprocal of a jet with zero value");
  double g[kMaxOrder + 1];
  double yk = 1.0 / y;
  for (int k = 0; k <= a.order(); ++k) {
    g[k] = ((k % 2) ? -1.0 : 1.0) * kFactorial[k] * yk;
    yk /= y;
  }
  return compose(a, g);
}

Jet sin(const Jet& a) {
  const double s = std::sin(a.value()), c = std::cos(a.value());
  const double g[] = {s, c, -s, -c, s};
  return compose(a, g);
}

Jet cos(const Jet& a) {
  const double s = std::sin(a.value()), c = std::cos(a.value());
  const double g[] = {c, -s, -c, s, c};
  return compose(a, g);
}

Jet exp(const Jet& a) {
  const double e = std::exp(a.value());
  const double g[] = {e, e, e, e, e};
  return compose(a, g);
}

Jet sqrt(const Jet& a) {
  const double y = a.value();
  if (y < 0.0) fail(ErrorKind::DomainError, "sqrt of a negative value");
  if (y == 0.0) {
    if (a.order() == 0) return Jet(0, 0.0);
    fail(ErrorKind::DomainError, "sqrt is not differentiable at 0");
  }
  return pow(a, 0.5);
}

Jet abs(const Jet& a) {
  const double y = a.value();
  if (y > 0.0) return a;
  if (y < 0.0) return -a;
  if (a.order() == 0) return a;
  fail(ErrorKind::DomainError, "abs is not differentiable at 0");
}

Jet pow(const Jet& a, int n) {
  if (n < 0) return inv(pow(a, -n));
  Jet r(a.order(), 1.0);
  Jet base = a;
  while (n > 0) {
    if (n & 1) r = r * base;
    n >>= 1;
    if (n > 0) base = base * base;
  }
  return r;
}

Jet pow(const Jet& a, double p) {
  if (p == std::floor(p) && std::abs(p) < 64) return pow(a, static_cast<int>(p));
  const double y = a.value();
  if (!(y > 0.0)) fail(ErrorKind::DomainError, "non-integer power of a non-positive value");
  double g[kMaxOrder + 1];
  double coef = 1.0;
  for (int k = 0; k <= a.order(); ++k) {
    g[k] = coef * std::pow(y, p - k);
    coef *= (p - k);
  }
  return compose(a, g);
}

JetVec3 JetVec3::constant(double x, double y, double z, int order) {
  return {Jet(order, x), Jet(order, y), Jet(order, z)};
}

int JetVec3::order() const { return std::min({c[0].order(), c[1].order(), c[2].order()}); }

JetVec3 JetVec3::derivative(int var) const {
  return {c[0].derivative(var), c[1].derivative(var), c[2].derivative(var)};
}

JetVec3 JetVec3::truncate(int order) const {
  return {c[0].truncate(order), c[1].truncate(order), c[2].truncate(order)};
}

JetVec3 operator+(const JetVec3& a, const JetVec3& b) {
  return {a[0] + b[0], a[1] + b[1], a[2] + b[2]};
}
JetVec3 operator-(const JetVec3& a, const JetVec3& b) {
  return {a[0] - b[0], a[1] - b[1], a[2] - b[2]};
}
JetVec3 operator-(const JetVec3& a) { return {-a[0], -a[1], -a[2]}; }
JetVec3 operator*(const Jet& s, const JetVec3& a) { return {s * a[0], s * a[1], s * a[2]}; }
JetVec3 operator*(double s, const JetVec3& a) { return {s * a[0], s * a[1], s * a[2]}; }

Jet dot(const JetVec3& a, const JetVec3& b) { return a[0] * b[0] + a[1] * b[1] + a[2] * b[2]; }

JetVec3 cross(const JetVec3& a, const JetVec3& b) {
  return {a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]};
}

Jet norm(const JetVec3& a) { return sqrt(dot(a, a)); }

Jet det3(const JetVec3& a, const JetVec3& b, const JetVec3& c) { return dot(a, cross(b, c)); }

Mat2J Mat2J::zero(int order) {
  Mat2J r;
  for (auto& row : r.m)
    for (auto& e : row) e = Jet(order);
  return r;
}

Mat2J Mat2J::identity(int order) {
  Mat2J r = zero(order);
  r.m[0][0] = Jet(order, 1.0);
  r.m[1][1] = Jet(order, 1.0);
  return r;
}

int Mat2J::order() const {
  return std::min({m[0][0].order(), m[0][1].order(), m[1][0].order(), m[1][1].order()});
}

Mat2J Mat2J::derivative(int var) const {
  Mat2J r;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) r.m[i][j] = m[i][j].derivative(var);
  return r;
}

Mat2J Mat2J::transpose() const {
  Mat2J r = *this;
  std::swap(r.m[0][1], r.m[1][0]);
  return r;
}

Mat2J Mat2J::truncate(int order) const {
  Mat2J r;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) r.m[i][j] = m[i][j].truncate(order);
  return r;
}

std::array<std::array<double, 2>, 2> Mat2J::value() const {
  return {{{m[0][0].value(), m[0][1].value()}, {m[1][0].value(), m[1][1].value()}}};
}

Mat2J operator+(const Mat2J& a, const Mat2J& b) {
  Mat2J r;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) r.m[i][j] = a.m[i][j] + b.m[i][j];
  return r;
}

Mat2J operator-(const Mat2J& a, const Mat2J& b) {
  Mat2J r;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) r.m[i][j] = a.m[i][j] - b.m[i][j];
  return r;
}

Mat2J operator*(const Mat2J& a, const Mat2J& b) {
  Mat2J r;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) r.m[i][j] = a.m[i][0] * b.m[0][j] + a.m[i][1] * b.m[1][j];
  return r;
}

Mat2J operator*(const Jet& s, const Mat2J& a) {
  Mat2J r;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) r.m[i][j] = s * a.m[i][j];
  return r;
}

Jet det(const Mat2J& a) { return a.m[0][0] * a.m[1][1] - a.m[0][1] * a.m[1][0]; }
Jet trace(const Mat2J& a) { return a.m[0][0] + a.m[1][1]; }

Mat2J inverse(const Mat2J& a) {
  const Jet d = det(a);
  if (d.value() == 0.0) fail(ErrorKind::DivisionByZeroValue, "singular 2x2 jet matrix");
  const Jet id = inv(d);
  Mat2J r;
  r.m[0][0] = a.m[1][1] * id;
  r.m[0][1] = -(a.m[0][1] * id);
  r.m[1][0] = -(a.m[1][0] * id);
  r.m[1][1] = a.m[0][0] * id;
  return r;
}

namespace {

// Second-order central stencils on offsets -2..2 for derivative orders 0..4.
constexpr double kStencil[kMaxOrder + 1][5] = {
    {0, 0, 1, 0, 0},
    {0, -0.5, 0, 0.5, 0},
    {0, 1, -2, 1, 0},
    {-0.5, 1, 0, -1, 0.5},
    {1, -4, 6, -4, 1},
};

Jet fd_level(const ScalarFn& f, double u1, double u2, int order, double h) {
  double tab[5][5];
  for (int p = 0; p < 5; ++p)
    for (int q = 0; q < 5; ++q) {
      bool needed = false;
      for (int i = 0; i <= order && !needed; ++i)
        for (int j = 0; i + j <= order && !needed; ++j)
          needed = kStencil[i][p] != 0.0 && kStencil[j][q] != 0.0;
      tab[p][q] = needed ? f(u1 + (p - 2) * h, u2 + (q - 2) * h) : 0.0;
    }
  Jet r(order);
  for (int n = 0; n <= order; ++n)
    for (int j = 0; j <= n; ++j) {
      const int i = n - j;
      double s = 0.0;
      for (int p = 0; p < 5; ++p) {
        if (kStencil[i][p] == 0.0) continue;
        for (int q = 0; q < 5; ++q)
          if (kStencil[j][q] != 0.0) s += kStencil[i][p] * kStencil[j][q] * tab[p][q];
      }
      r[jet_index(i, j)] = s / std::pow(h, n);
    }
  return r;
}

}  // namespace

Jet fd_jet(const ScalarFn& f, double u1, double u2, int order, double step) {
  check_order(order);
  const Jet coarse = fd_level(f, u1, u2, order, step);
  const Jet fine = fd_level(f, u1, u2, order, step / 2);
  Jet r(order);
  for (int k = 0; k < r.size(); ++k) r[k] = (4.0 * fine[k] - coarse[k]) / 3.0;
  return r;
}

namespace {

struct GLRule {
  std::vector<double> x, w;  // on [-1, 1]
};

const GLRule& gl_rule(int n) {
  static std::mutex mu;
  static std::map<int, std::unique_ptr<GLRule>> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto& slot = cache[n];
  if (!slot) {
    slot = std::make_unique<GLRule>();
    gsl_integration_glfixed_table* t = gsl_integration_glfixed_table_alloc(n);
    slot->x.resize(n);
    slot->w.resize(n);
    for (int i = 0; i < n; ++i)
      gsl_integration_glfixed_point(-1.0, 1.0, i, &slot->x[i], &slot->w[i], t);
    gsl_integration_glfixed_table_free(t);
  }
  return *slot;
}

// Pure passive partials of the integral, indexed by passive order.
std::vector<double> passive_quadrature(const JetFn& g, double lower, double upper, int active,
                                       double passive, int order, int n) {
  const GLRule& rule = gl_rule(n);
  const double half = 0.5 * (upper - lower), mid = 0.5 * (upper + lower);
  std::vector<double> acc(order + 1, 0.0);
  for (int k = 0; k < n; ++k) {
    const double t = mid + half * rule.x[k];
    const Jet v = active == 0 ? g(t, passive, order) : g(passive, t, order);
    for (int j = 0; j <= order; ++j)
      acc[j] += rule.w[k] * (active == 0 ? v.coeff(0, j) : v.coeff(j, 0));
  }
  for (double& a : acc) a *= half;
  return acc;
}

}  // namespace

Jet integrate_jet(const JetFn& g, double lower, int active, double u1, double u2, int order,
                  const QuadratureConfig& cfg) {
  check_order(order);
  const double upper = active == 0 ? u1 : u2;
  const double passive = active == 0 ? u2 : u1;
  Jet r(order);

  std::vector<double> values;
  if (upper == lower) {
    values.assign(order + 1, 0.0);
  } else {
    int n = cfg.nodes;
    values = passive_quadrature(g, lower, upper, active, passive, order, n);
    for (;;) {
      if (2 * n > cfg.max_nodes)
        fail(ErrorKind::QuadratureNonConvergent,
             "no agreement up to " + std::to_string(cfg.max_nodes) + " nodes");
      auto refined = passive_quadrature(g, lower, upper, active, passive, order, 2 * n);
      double diff = 0.0, scale = 1.0;
      for (int j = 0; j <= order; ++j) {
        diff = std::max(diff, std::abs(refined[j] - values[j]));
        scale = std::max(scale, std::abs(refined[j]));
      }
      values = std::move(refined);
      n *= 2;
      if (diff <= cfg.tol * scale) break;
    }
  }
  for (int j = 0; j <= order; ++j)
    if (active == 0)
      r.coeff(0, j) = values[j];
    else
      r.coeff(j, 0) = values[j];

  if (order >= 1) {
    const Jet end = active == 0 ? g(upper, passive, order - 1) : g(passive, upper, order - 1);
    for (int n = 1; n <= order; ++n)
      for (int j = 0; j <= n; ++j) {
        const int i = n - j;
        // Derivatives with at least one endpoint differentiation.
        if (active == 0 && i >= 1) r.coeff(i, j) = end.coeff(i - 1, j);
        if (active == 1 && j >= 1) r.coeff(i, j) = end.coeff(i, j - 1);
      }
  }
  return r;
}

}  // namespace frontal
