#include <doctest.h>

#include <cmath>
#include <set>
#include <string>

#include "frontal/catalog.hpp"
#include "frontal/frame.hpp"
#include "oracles/oracle_values.hpp"
#include "support.hpp"

using namespace frontal;
using testing::entry;

namespace {

double eval_text(const std::string& s, double u1, double u2) { return Expression::parse(s).eval(u1, u2); }

Frontal from_text(std::array<std::string, 3> x, std::array<std::string, 3> w1, std::array<std::string, 3> w2,
                  std::optional<std::array<std::string, 4>> lambda = {}) {
  return frontal_from_expressions("t", x, w1, w2, lambda, Domain{});
}

std::set<std::array<int, 2>> node_set(const SingularScan& s) { return {s.nodes.begin(), s.nodes.end()}; }

}  // namespace

TEST_CASE("factor_lambda for the flat chart") {
  const Frontal f = from_text({"u1", "u2", "0"}, {"1", "0", "0"}, {"0", "1", "0"});
  const FrontalJets fj = f.at(0.3, -0.2, 2);
  const Mat2 L = fj.Lambda.value();
  CHECK(std::abs(L[0][0] - 1) < 1e-14);
  CHECK(std::abs(L[0][1]) < 1e-14);
  CHECK(std::abs(L[1][0]) < 1e-14);
  CHECK(std::abs(L[1][1] - 1) < 1e-14);
}

TEST_CASE("factored Lambda of the catalog examples") {
  for (const char* name : {"ex-5.9", "ex-5.10"}) {
    const CatalogEntry& e = find_entry(name);
    // Factor from Dx instead of using the catalog's Lambda.
    const Frontal f = frontal_from_expressions(name, e.x, e.w1, e.w2, std::nullopt, e.domain);
    for (auto [u1, u2] : {std::pair{0.3, 0.4}, {-0.6, 0.8}, {0.9, -0.1}}) {
      const Mat2 L = f.at(u1, u2, 1).Lambda.value();
      for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) CHECK(std::abs(L[i][j] - eval_text((*e.Lambda)[2 * i + j], u1, u2)) < 1e-12);
    }
  }
}

TEST_CASE("factor_lambda rejects a basis that is not tangent") {
  try {
    (void)from_text({"u1", "u2", "u1^2"}, {"1", "0", "0"}, {"0", "1", "0"}).at(0.5, 0.5, 1);
    FAIL("expected NotAFrontal");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::NotAFrontal);
  }
  try {
    (void)from_text({"u1", "u1", "0"}, {"1", "1", "0"}, {"2", "2", "0"}).at(0.5, 0.5, 1);
    FAIL("expected DegenerateBasis");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::DegenerateBasis);
  }
}

TEST_CASE("unit normal") {
  const JetVec3 e1 = JetVec3::constant(1, 0, 0, 1), e2 = JetVec3::constant(0, 1, 0, 1);
  const Vec3 n = unit_normal(e1, e2).value();
  CHECK(testing::max_abs_diff(n, {0, 0, 1}) < 1e-15);
  const Vec3 m = unit_normal(e2, e1).value();
  CHECK(testing::max_abs_diff(m, {0, 0, -1}) < 1e-15);

  const FrameData d = frame_data(entry("ex-5.10"), 0, 0);
  CHECK(testing::max_abs_diff(d.n, {0, 0, 1}) < 1e-12);
  const FrameData s = frame_data(swap_basis(entry("ex-5.10")), 0.3, 0.2);
  const FrameData o = frame_data(entry("ex-5.10"), 0.3, 0.2);
  CHECK(testing::max_abs_diff(s.n, {-o.n[0], -o.n[1], -o.n[2]}) < 1e-14);
}

TEST_CASE("frame data against the frozen symbolic oracle") {
  for (const auto& p : oracle::kFramePoints) {
    CAPTURE(p.entry);
    CAPTURE(p.u1);
    CAPTURE(p.u2);
    const FrameData d = frame_data(entry(p.entry), p.u1, p.u2);
    CHECK(std::abs(d.lambda - p.lambda) < 1e-12);
    CHECK(testing::rel_err(d.K_Omega, p.K_Omega) < 1e-11);
    CHECK(d.regular);
    CHECK(testing::rel_err(d.K, p.K) < 1e-11);
    CHECK(testing::max_abs_diff(d.n, {p.n[0], p.n[1], p.n[2]}) < 1e-13);
  }
}

TEST_CASE("ruled example: lambda = 2 u2 everywhere") {
  const Frontal f = entry("ex-5.9");
  for (auto [u1, u2] : {std::pair{0.1, 0.2}, {-0.8, -0.5}, {0.5, 0.0}}) CHECK(std::abs(frame_data(f, u1, u2).lambda - 2 * u2) < 1e-14);
  CHECK_FALSE(frame_data(f, 0.5, 0.0).regular);
  CHECK(std::isnan(frame_data(f, 0.5, 0.0).K));
}

TEST_CASE("Laplace-class example at (1, 0): lambda = det Lambda = 12") {
  CHECK(std::abs(frame_data(entry("ex-5.10"), 1, 0).lambda - 12) < 1e-12);
}

TEST_CASE("plane: vanishing second forms") {
  const FrameData d = frame_data(entry("plane"), 0.2, 0.7);
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) {
      CHECK(d.II_Omega[i][j] == 0);
      CHECK(d.I_Omega[i][j] == (i == j ? 1 : 0));
    }
  CHECK(d.K_Omega == 0);
}

TEST_CASE("pointwise invariants at regular points") {
  testing::ExprGen rng(3);
  for (const char* name : {"ex-5.8", "ex-5.9", "ex-5.10", "paraboloid"}) {
    const Frontal f = entry(name);
    for (int k = 0; k < 20; ++k) {
      const double u1 = rng.uniform(-0.9, 0.9), u2 = rng.uniform(-0.9, 0.9);
      const FrameJets F = frame_jets(f, u1, u2, 2);
      if (std::abs(F.lambda.value()) < 1e-3) continue;
      const Vec3 n = F.n.value();
      CHECK(std::abs(dot(F.n, F.f.w1).value()) < 1e-12);
      CHECK(std::abs(dot(F.n, F.f.w2).value()) < 1e-12);
      CHECK(std::abs(n[0] * n[0] + n[1] * n[1] + n[2] * n[2] - 1) < 1e-12);

      // Classical forms straight from x.
      const JetVec3 xu[2] = {F.f.x.derivative(0), F.f.x.derivative(1)};
      double I[2][2], II[2][2];
      for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) {
          I[i][j] = dot(xu[i], xu[j]).value();
          II[i][j] = dot(xu[i].derivative(j), F.n).value();
        }
      const Mat2 Ic = F.I.value(), IIc = F.II.value(), IIa = F.II_alt.value(), IIo = F.II_Omega.value();
      for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) {
          CHECK(testing::rel_err(Ic[i][j], I[i][j]) < 1e-9);
          CHECK(testing::rel_err(IIc[i][j], II[i][j]) < 1e-9);
          CHECK(std::abs(IIa[i][j] - IIo[i][j]) < 1e-10);
        }
      const double Kc = (II[0][0] * II[1][1] - II[0][1] * II[1][0]) / (I[0][0] * I[1][1] - I[0][1] * I[1][0]);
      CHECK(testing::rel_err(F.K_Omega.value() / F.lambda.value(), Kc) < 1e-8);
    }
  }
}

TEST_CASE("change of moving basis keeps the zero sets") {
  const CatalogEntry& e = find_entry("ex-5.9");
  // Omega' = Omega M with M = [[1, 0.5], [0.3 u1, 2]], det M > 0.
  const Frontal g = frontal_from_expressions(
      "tmb", e.x, {"1", "0.3*u1*(u2^3 + 1)", "u2^2 + 0.3*u1^2"}, {"0.5", "2*(u2^3 + 1)", "0.5*u2^2 + 2*u1"},
      std::nullopt, e.domain);
  const Grid grid{Domain{-1, 1, -0.9, 0.9}, 21, 19};
  const SingularScan a = singular_scan(e.frontal(), grid), b = singular_scan(g, grid);
  CHECK(!a.nodes.empty());
  CHECK(node_set(a) == node_set(b));
  for (int j = 0; j < grid.ny; ++j)
    for (int i = 0; i < grid.nx; ++i) {
      const double K1 = frame_data(e.frontal(), grid.u1(i), grid.u2(j)).K_Omega;
      const double K2 = frame_data(g, grid.u1(i), grid.u2(j)).K_Omega;
      CHECK((std::abs(K1) < 1e-12) == (std::abs(K2) < 1e-12));
      CHECK(std::signbit(K1) == std::signbit(K2));
    }
}

TEST_CASE("singular scan") {
  const Grid grid{Domain{}, 101, 101};
  const SingularScan s9 = singular_scan(entry("ex-5.9"), Grid{Domain{-1, 1, -0.9, 0.9}, 101, 101});
  REQUIRE(!s9.nodes.empty());
  for (auto [i, j] : s9.nodes) CHECK(j == 50);
  CHECK(s9.nodes.size() == 101);
  for (auto [i, j] : s9.cells) CHECK((j == 49 || j == 50));
  CHECK(s9.regular_dense);

  const SingularScan s10 = singular_scan(entry("ex-5.10"), grid);
  REQUIRE(!s10.nodes.empty());
  for (auto [i, j] : s10.nodes) CHECK((i == j || i + j == 100));
  for (auto [i, j] : s10.cells) {
    // Every flagged cell touches a diagonal.
    const bool near = std::abs(i - j) <= 1 || std::abs(i + j - 99) <= 1;
    CHECK(near);
  }

  const SingularScan sp = singular_scan(entry("paraboloid"), grid);
  CHECK(sp.nodes.empty());
  CHECK(sp.cells.empty());
}

TEST_CASE("wave front test") {
  const Grid grid{Domain{}, 21, 21};
  CHECK(wavefront_test(entry("ex-5.10"), grid).holds);
  CHECK(wavefront_test(entry("plane"), grid).holds);
  const Frontal degenerate = from_text({"0", "0", "0"}, {"1", "0", "0"}, {"0", "1", "0"},
                                       std::array<std::string, 4>{"0", "0", "0", "0"});
  const GridVerdict v = wavefront_test(degenerate, grid);
  CHECK_FALSE(v.holds);
  CHECK(!v.witnesses.empty());
}

TEST_CASE("non-parabolic test") {
  const Grid grid{Domain{}, 21, 21};
  CHECK_FALSE(nonparabolic_test(entry("plane"), grid).holds);
  CHECK(nonparabolic_test(entry("ex-5.9"), Grid{Domain{-1, 1, 0.1, 1}, 21, 21}).holds);
  CHECK_FALSE(nonparabolic_test(entry("ex-5.9"), Grid{Domain{-1, 1, -0.9, 0.9}, 21, 19}).holds);
  CHECK_FALSE(nonparabolic_test(entry("ex-5.10"), grid).holds);
  CHECK(nonparabolic_test(entry("paraboloid"), grid).holds);
}
