#include <doctest.h>

#include <cmath>
#include <random>

#include "frontal/catalog.hpp"
#include "frontal/jet.hpp"
#include "support.hpp"

using namespace frontal;

namespace {

Jet random_jet(std::mt19937& rng, int order) {
  std::uniform_real_distribution<double> d(-2, 2);
  Jet j(order);
  for (int k = 0; k < j.size(); ++k) j[k] = d(rng);
  return j;
}

void check_equal(const Jet& a, const Jet& b, double tol) {
  REQUIRE(a.order() == b.order());
  for (int k = 0; k < a.size(); ++k) CHECK(std::abs(a[k] - b[k]) <= tol * std::max(1.0, std::abs(b[k])));
}

}  // namespace

TEST_CASE("layout of the coefficient array") {
  CHECK(ncoeffs(0) == 1);
  CHECK(ncoeffs(3) == 10);
  CHECK(Jet(3).size() == 10);
  CHECK(jet_index(0, 0) == 0);
  CHECK(jet_index(1, 0) == 1);
  CHECK(jet_index(0, 1) == 2);
  CHECK(jet_index(0, 3) == 9);
}

TEST_CASE("bilinear product") {
  const Jet u1 = Jet::variable(0, 2.0, 1), u2 = Jet::variable(1, 3.0, 1);
  const Jet f = u1 * u2;
  CHECK(f.value() == 6);
  CHECK(f.coeff(1, 0) == 3);
  CHECK(f.coeff(0, 1) == 2);
}

TEST_CASE("square of u2 carries raw partials") {
  const Jet u2 = Jet::variable(1, 1.0, 2);
  const Jet f = u2 * u2;
  CHECK(f.value() == 1);
  CHECK(f.coeff(0, 1) == 2);
  CHECK(f.coeff(0, 2) == 2);
  CHECK(f.coeff(1, 0) == 0);
  CHECK(f.coeff(2, 0) == 0);
  CHECK(f.coeff(1, 1) == 0);
}

TEST_CASE("sin(u1 u2) / (1 + u2^2) at order 3 against central differences") {
  const double p1 = 0.3, p2 = 0.7;
  const Jet u1 = Jet::variable(0, p1, 3), u2 = Jet::variable(1, p2, 3);
  const Jet f = sin(u1 * u2) / (1.0 + u2 * u2);
  auto g = [](double a, double b) { return std::sin(a * b) / (1 + b * b); };
  for (int n = 0; n <= 3; ++n)
    for (int j = 0; j <= n; ++j) {
      const int i = n - j;
      const double want = testing::central_partial(g, p1, p2, i, j, n <= 2 ? 1e-3 : 1e-2);
      CHECK(testing::rel_err(f.coeff(i, j), want) < 1e-6);
    }
}

TEST_CASE("fd_jet examples") {
  const Jet a = fd_jet([](double x, double y) { return x + y; }, 0, 0, 1, 1e-4);
  CHECK(std::abs(a.value()) < 1e-10);
  CHECK(std::abs(a.coeff(1, 0) - 1) < 1e-10);
  CHECK(std::abs(a.coeff(0, 1) - 1) < 1e-10);
  const Jet e = fd_jet([](double x, double) { return std::exp(x); }, 0, 0, 3, 1e-2);
  CHECK(std::abs(e.coeff(3, 0) - 1) < 1e-3);
}

TEST_CASE("division by a vanishing value") {
  const Jet u1 = Jet::variable(0, 0.0, 2);
  try {
    (void)(1.0 / u1);
    FAIL("expected DivisionByZeroValue");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::DivisionByZeroValue);
  }
}

TEST_CASE("ring axioms and Leibniz rule on random jets") {
  std::mt19937 rng(7);
  for (int trial = 0; trial < 200; ++trial) {
    const int order = 1 + trial % 4;
    const Jet a = random_jet(rng, order), b = random_jet(rng, order), c = random_jet(rng, order);
    check_equal((a * b) * c, a * (b * c), 1e-12);
    check_equal(a * (b + c), a * b + a * c, 1e-12);
    check_equal(a + b, b + a, 1e-15);
    for (int var = 0; var < 2; ++var) {
      const Jet lhs = (a * b).derivative(var);
      const Jet rhs = a.truncate(order - 1) * b.derivative(var) + a.derivative(var) * b.truncate(order - 1);
      check_equal(lhs, rhs, 1e-12);
    }
  }
}

TEST_CASE("quotient and elementary functions invert each other") {
  std::mt19937 rng(11);
  for (int trial = 0; trial < 50; ++trial) {
    Jet a = random_jet(rng, 3);
    a[0] = 1.5 + std::abs(a[0]);
    check_equal((a / a), Jet::constant(1.0, 3), 1e-12);
    check_equal(sqrt(a) * sqrt(a), a, 1e-12);
    check_equal(pow(a, 0.25) * pow(a, 0.75), a, 1e-12);
    check_equal(pow(a, 3), a * a * a, 1e-12);
    check_equal(sin(a) * sin(a) + cos(a) * cos(a), Jet::constant(1.0, 3), 1e-12);
    check_equal(exp(a) * exp(-a), Jet::constant(1.0, 3), 1e-12);
  }
}

TEST_CASE("mixed orders truncate to the smaller one") {
  const Jet a = Jet::variable(0, 1.0, 3), b = Jet::variable(1, 2.0, 1);
  CHECK((a * b).order() == 1);
  CHECK((a + b).order() == 1);
}

TEST_CASE("integrate_jet of constant and linear integrands") {
  const JetFn one = [](double, double, int order) { return Jet::constant(1.0, order); };
  const Jet a = integrate_jet(one, 0.0, 0, 0.5, 0.0, 1);
  CHECK(a.value() == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(a.coeff(1, 0) == doctest::Approx(1.0).epsilon(1e-14));

  const JetFn t = [](double t1, double, int order) { return Jet::variable(0, t1, order); };
  const Jet b = integrate_jet(t, 0.0, 0, 2.0, 0.0, 2);
  CHECK(b.value() == doctest::Approx(2.0).epsilon(1e-13));
  CHECK(b.coeff(1, 0) == doctest::Approx(2.0).epsilon(1e-13));
  CHECK(b.coeff(2, 0) == doctest::Approx(1.0).epsilon(1e-13));
}

TEST_CASE("integrate_jet of an exact derivative recovers the endpoint difference") {
  // d/dt sin(t u2) integrated over [0.2, u1].
  const JetFn g = [](double t, double v, int order) {
    const Jet T = Jet::variable(0, t, order), V = Jet::variable(1, v, order);
    return V * cos(T * V);
  };
  const double u1 = 0.9, u2 = -0.6;
  const Jet F = integrate_jet(g, 0.2, 0, u1, u2, 3);
  const Jet U1 = Jet::variable(0, u1, 3), U2 = Jet::variable(1, u2, 3);
  const Jet want = sin(U1 * U2) - sin(0.2 * U2);
  for (int k = 0; k < F.size(); ++k) CHECK(std::abs(F[k] - want[k]) < 1e-10);
}

TEST_CASE("third component of the rank-1 representation for h = u1^2 + u2^3") {
  // Closed form of the two quadratures: u1^2 - 2 u2^3.
  const Frontal f = gen_rank1_wavefront("u1^2 + u2^3", "", Domain{});
  const double u1 = 0.4, u2 = 0.3;
  const FrontalJets fj = f.at(u1, u2, 2);
  CHECK(std::abs(fj.x[2].value() - (u1 * u1 - 2 * u2 * u2 * u2)) < 1e-10);
  CHECK(std::abs(fj.x[2].coeff(1, 0) - 2 * u1) < 1e-10);
  CHECK(std::abs(fj.x[2].coeff(0, 1) + 6 * u2 * u2) < 1e-10);
}
