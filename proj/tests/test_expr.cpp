#include <doctest.h>

#include <cmath>
#include <string>

#include "frontal/expr.hpp"
#include "support.hpp"

using namespace frontal;

namespace {

ErrorKind kind_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("no error thrown");
  return ErrorKind::InputError;
}

}  // namespace

TEST_CASE("precedence and associativity") {
  const Expression e = Expression::parse("u1*u2 + 1");
  CHECK(e.print() == "((u1 * u2) + 1)");
  CHECK(structurally_equal(e.root(), Expression::parse("(u1 * u2)+1").root()));
  CHECK(Expression::parse("-u1^2").eval(2, 0) == -4);
  CHECK(Expression::parse("2^3^2").eval(0, 0) == 512);
  CHECK(Expression::parse("u1 - u2 - 1").eval(5, 3) == 1);
  CHECK(Expression::parse("u1 / u2 / 2").eval(8, 2) == 2);
  CHECK(Expression::parse("  u1\t*\n2 ").eval(3, 0) == 6);
}

TEST_CASE("second component of the ruled example") {
  const Expression e = Expression::parse("2/5*u2^5 + u2^2");
  CHECK(e.print() == "(((2 / 5) * (u2 ^ 5)) + (u2 ^ 2))");
  const double u2 = 0.7;
  CHECK(e.eval(0.1, u2) == doctest::Approx(0.4 * std::pow(u2, 5) + u2 * u2).epsilon(1e-15));
}

TEST_CASE("syntax errors carry byte offsets") {
  try {
    (void)Expression::parse("u1*(");
    FAIL("expected SyntaxError");
  } catch (const ParseError& e) {
    CHECK(e.kind() == ErrorKind::SyntaxError);
    CHECK(e.position() == 4);
  }
  try {
    (void)Expression::parse("u1 + foo(u2)");
    FAIL("expected UnknownIdentifier");
  } catch (const ParseError& e) {
    CHECK(e.kind() == ErrorKind::UnknownIdentifier);
    CHECK(e.position() == 5);
  }
  CHECK(kind_of([] { (void)Expression::parse("u1^u2"); }) == ErrorKind::SyntaxError);
  CHECK(kind_of([] { (void)Expression::parse("u1^0.3"); }) == ErrorKind::SyntaxError);
  CHECK(kind_of([] { (void)Expression::parse("pow(u1, 0.5)"); }) == ErrorKind::SyntaxError);
  CHECK(kind_of([] { (void)Expression::parse("sin u1"); }) == ErrorKind::SyntaxError);
  CHECK(kind_of([] { (void)Expression::parse("u1 u2"); }) == ErrorKind::SyntaxError);
}

TEST_CASE("half-integer exponents and pow calls") {
  CHECK(Expression::parse("(1 + u1)^1.5").eval(3, 0) == doctest::Approx(8.0).epsilon(1e-15));
  CHECK(Expression::parse("pow(u1, 3)").eval(2, 0) == 8);
  CHECK(Expression::parse("pi").eval(0, 0) == doctest::Approx(M_PI).epsilon(1e-16));
}

TEST_CASE("eval_jet examples") {
  CHECK(Expression::parse("u1+u2").eval_jet(1, 2, 0).value() == 3);
  const Jet j = Expression::parse("12*u1^2*u2 - 4*u2^3").eval_jet(1, 1, 1);
  CHECK(j.value() == 8);
  CHECK(j.coeff(1, 0) == 24);
  CHECK(j.coeff(0, 1) == 0);
  CHECK(kind_of([] { (void)Expression::parse("sqrt(u1)").eval_jet(-1, 0, 1); }) == ErrorKind::DomainError);
  CHECK(kind_of([] { (void)Expression::parse("1/u1").eval_jet(0, 0, 1); }) == ErrorKind::DomainError);
}

TEST_CASE("variable t needs a binding") {
  const Expression e = Expression::parse("t*u1");
  CHECK(e.uses(Var::T));
  CHECK(e.eval(2, 0, 3.0) == 6);
  CHECK(kind_of([&] { (void)e.eval(2, 0); }) == ErrorKind::UnknownIdentifier);
}

TEST_CASE("abs must be sign-definite on the domain") {
  CHECK(kind_of([] { Expression::parse("abs(u1)").validate_abs(Domain{}); }) == ErrorKind::DomainError);
  Expression::parse("abs(2 + u1)").validate_abs(Domain{});
  Expression::parse("abs(u1)").validate_abs(Domain{0.1, 1, -1, 1});
}

TEST_CASE("print round trip and plain evaluator on random expressions") {
  testing::ExprGen gen(2024);
  for (int k = 0; k < 300; ++k) {
    const std::string text = gen.make(1 + k % 4);
    const Expression e = Expression::parse(text);
    const Expression back = Expression::parse(e.print());
    CHECK_MESSAGE(structurally_equal(e.root(), back.root()), text);
    const double u1 = gen.uniform(-1, 1), u2 = gen.uniform(-1, 1);
    const double plain = e.eval(u1, u2);
    CHECK_MESSAGE(std::abs(e.eval_jet(u1, u2, 0).value() - plain) <= 1e-14 * std::max(1.0, std::abs(plain)), text);
  }
}

TEST_CASE("jets against an independent central-difference oracle on 1000 random expressions") {
  testing::ExprGen gen(99);
  const double tol[4] = {1e-14, 1e-8, 1e-6, 1e-4};
  const double step[4] = {0, 1e-3, 2e-3, 5e-3};
  double worst[4] = {0, 0, 0, 0};
  for (int k = 0; k < 1000; ++k) {
    const std::string text = gen.make(1 + k % 3);
    const Expression e = Expression::parse(text);
    const double u1 = gen.uniform(-0.9, 0.9), u2 = gen.uniform(-0.9, 0.9);
    const Jet j = e.eval_jet(u1, u2, 3);
    auto f = [&](double a, double b) { return e.eval(a, b); };
    for (int n = 1; n <= 3; ++n)
      for (int q = 0; q <= n; ++q) {
        const double want = testing::central_partial(f, u1, u2, n - q, q, step[n]);
        const double err = testing::rel_err(j.coeff(n - q, q), want);
        worst[n] = std::max(worst[n], err);
        CHECK_MESSAGE(err <= tol[n], text << " order " << n);
      }
  }
  MESSAGE("worst relative errors by order: " << worst[1] << " " << worst[2] << " " << worst[3]);
}

TEST_CASE("symbolic derivative agrees with jets") {
  testing::ExprGen gen(5);
  for (int k = 0; k < 200; ++k) {
    const Expression e = Expression::parse(gen.make(1 + k % 3));
    const double u1 = gen.uniform(-1, 1), u2 = gen.uniform(-1, 1);
    const Jet j = e.eval_jet(u1, u2, 2);
    const Expression d1 = e.derivative(Var::U1), d2 = e.derivative(Var::U2);
    const Expression d12 = d1.derivative(Var::U2);
    CHECK(testing::rel_err(d1.eval(u1, u2), j.coeff(1, 0)) < 1e-12);
    CHECK(testing::rel_err(d2.eval(u1, u2), j.coeff(0, 1)) < 1e-12);
    CHECK(testing::rel_err(d12.eval(u1, u2), j.coeff(1, 1)) < 1e-11);
  }
}
