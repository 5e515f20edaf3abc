#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>
#include <random>
#include <unsupported/Eigen/MatrixFunctions>

#include "frontal/blaschke.hpp"
#include "frontal/catalog.hpp"
#include "frontal/reconstruct.hpp"
#include "support.hpp"

using namespace frontal;
using testing::entry;

namespace {

using Entries = std::map<std::string, std::vector<std::string>>;

StructureData expr_data(const Entries& e, const Domain& d = Domain{}) {
  StructureData sd;
  sd.backing = "expr";
  sd.domain = d;
  sd.basepoint = {0.5 * (d.a1 + d.b1), 0.5 * (d.a2 + d.b2)};
  sd.eval = structure_expressions(e);
  return sd;
}

const std::vector<std::string> kIdentity = {"1", "0", "0", "1"};

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

TEST_CASE("channel layout round trip") {
  int total = 0;
  for (const auto& g : channel_groups()) total += g.size;
  CHECK(total == kChannels);
  const StructureFn fn = structure_expressions({{"Lambda", {"1", "u1", "u2", "2"}},
                                                {"h", {"0.5", "0", "0", "0.25"}},
                                                {"tau", {"u1*u2", "0"}}});
  const StructureJets s = fn(0.3, 0.7, 1);
  const StructureJets back = from_channels(to_channels(s));
  CHECK(back.Lambda(0, 1).value() == doctest::Approx(0.3));
  CHECK(back.Lambda(1, 0).coeff(0, 1) == 1);
  CHECK(back.phi.value() == 1);
  CHECK(back.tau[0].coeff(1, 0) == doctest::Approx(0.7));
  CHECK(back.h(1, 1).value() == 0.25);
}

TEST_CASE("structure expressions reject unknown groups and wrong counts") {
  CHECK(kind_of([] { (void)structure_expressions({{"Lambda", {"1", "0", "0"}}}); }) == ErrorKind::InputError);
  CHECK(kind_of([] { (void)structure_expressions({{"Omega", {"1"}}}); }) == ErrorKind::InputError);
}

TEST_CASE("compatibility residual on simple data") {
  const Grid grid{Domain{}, 11, 11};
  CHECK(compat_residual(expr_data({{"Lambda", kIdentity}}), grid).regular == 0);
  // Only the u2-derivative of the (1,2) entry survives.
  const ResidualReport r = compat_residual(expr_data({{"Lambda", kIdentity}, {"D1", {"0", "u2^2", "0", "0"}}}), grid);
  CHECK(std::abs(r.regular - 2) < 1e-12);
}

TEST_CASE("integrability residual on simple data") {
  const Grid grid{Domain{}, 11, 11};
  const IntegrabilityReport a = integrability_residual(expr_data({{"Lambda", kIdentity}}), grid);
  CHECK(a.sym.regular == 0);
  CHECK(a.row.regular == 0);
  const IntegrabilityReport b =
      integrability_residual(expr_data({{"Lambda", {"2", "0", "0", "1"}}, {"h", {"1", "0.3", "0", "1"}}}), grid);
  CHECK(std::abs(b.sym.regular - 0.6) < 1e-14);
}

TEST_CASE("constant blocks integrate to matrix exponentials") {
  const StructureData sd = expr_data({{"Lambda", kIdentity},
                                      {"D1", {"0.2", "-0.4", "0.1", "0"}},
                                      {"h", {"0.3", "0", "0.5", "0"}},
                                      {"S", {"0.7", "0.1", "0", "0"}},
                                      {"tau", {"-0.2", "0"}}});
  const Grid grid{Domain{}, 11, 11};
  const Reconstruction r = integrate_frame(sd, grid, 1e-2);
  const Mat3 B = block(sd.at(0, 0, 0), 0);
  double worst = 0;
  for (int j = 0; j < grid.ny; ++j)
    for (int i = 0; i < grid.nx; ++i) {
      const Mat3 want = (grid.u1(i) * B.transpose()).exp();
      worst = std::max(worst, (r.W[j * grid.nx + i] - want).cwiseAbs().maxCoeff());
    }
  CHECK(worst < 1e-9);
  CHECK(r.frame_discrepancy < 1e-12);
}

TEST_CASE("commuting constant blocks in both directions") {
  const StructureData sd = expr_data({{"Lambda", kIdentity},
                                      {"D1", {"0.2", "-0.4", "0.1", "0"}},
                                      {"D2", {"0.4", "-0.8", "0.2", "0"}}});
  const Grid grid{Domain{}, 9, 9};
  const Reconstruction r = integrate_frame(sd, grid, 1e-2);
  const Mat3 B = block(sd.at(0, 0, 0), 0);
  double worst = 0;
  for (int j = 0; j < grid.ny; ++j)
    for (int i = 0; i < grid.nx; ++i) {
      const Mat3 want = ((grid.u1(i) + 2 * grid.u2(j)) * B.transpose()).exp();
      worst = std::max(worst, (r.W[j * grid.nx + i] - want).cwiseAbs().maxCoeff());
    }
  CHECK(worst < 1e-9);
}

TEST_CASE("flat data give the flat chart") {
  StructureData sd = expr_data({{"Lambda", kIdentity}});
  sd.p = Eigen::Vector3d(1, 2, 3);
  const Grid grid{Domain{}, 5, 5};
  const Reconstruction r = integrate_position(sd, grid, 0.05);
  for (int j = 0; j < grid.ny; ++j)
    for (int i = 0; i < grid.nx; ++i) {
      const int k = j * grid.nx + i;
      CHECK((r.W[k] - Mat3::Identity()).norm() == 0);
      CHECK((r.x[k] - Eigen::Vector3d(1 + grid.u1(i), 2 + grid.u2(j), 3)).norm() < 1e-14);
    }
}

TEST_CASE("gated integration errors") {
  const Grid grid{Domain{}, 5, 5};
  CHECK(kind_of([&] {
          (void)integrate_frame(expr_data({{"Lambda", kIdentity}, {"D1", {"0", "u2", "0", "0"}}}), grid, 0.05);
        }) == ErrorKind::CompatibilityViolated);
  CHECK(kind_of([&] {
          (void)integrate_position(expr_data({{"Lambda", kIdentity}, {"h", {"1", "0.3", "0", "1"}}}), grid, 0.05);
        }) == ErrorKind::IntegrabilityViolated);
  StructureData sd = expr_data({{"Lambda", kIdentity}});
  sd.W0 = Mat3::Zero();
  CHECK(kind_of([&] { (void)integrate_frame(sd, grid, 0.05); }) == ErrorKind::FrameDegenerate);
}

TEST_CASE("data extracted from frontals pass the residual checks") {
  const Frontal f10 = entry("ex-5.10");
  const TransversalField e3 = constant_field({0, 0, 1});
  const StructureData s10 = extract_field(f10, e3, Domain{});
  const Grid g21{Domain{}, 21, 21};
  CHECK(compat_residual(s10, g21).regular < 1e-7);

  const Frontal f9 = entry("ex-5.9");
  const Domain d9{-0.5, 0.5, -0.5, 0.5};
  const StructureData s9 = extract_field(f9, blaschke_transversal(f9), d9);
  // Even node counts keep the nodes off the singular line u2 = 0.
  const Grid g9{d9, 10, 10};
  const IntegrabilityReport ir = integrability_residual(s9, g9);
  CHECK(ir.sym.regular < 1e-8);
  CHECK(ir.row.regular < 1e-8);
  CHECK(compat_residual(s9, g9).regular < 1e-6);
  CHECK(gamma_flatness_residual(f9, blaschke_transversal(f9), g9).regular < 1e-6);
}

TEST_CASE("grid-backed extraction reproduces the analytic frame") {
  const Frontal f10 = entry("ex-5.10");
  const TransversalField e3 = constant_field({0, 0, 1});
  const Grid grid{Domain{}, 41, 41};
  const StructureData sd = extract_structure(f10, e3, grid);
  CHECK(sd.backing == "grid");
  CHECK(compat_residual(sd, grid).regular < 1e-6);
  const Reconstruction r = integrate_position(sd, grid, 1e-3);
  CHECK(r.frame_discrepancy < 1e-4);
  CHECK(r.position_discrepancy < 1e-4);

  std::mt19937 rng(1);
  std::uniform_int_distribution<int> pick(0, grid.size() - 1);
  double worst = 0;
  for (int t = 0; t < 100; ++t) {
    const int k = pick(rng);
    const FrontalJets fj = f10.at(grid.u1(k % grid.nx), grid.u2(k / grid.nx), 0);
    Mat3 W;
    W.col(0) << fj.w1[0].value(), fj.w1[1].value(), fj.w1[2].value();
    W.col(1) << fj.w2[0].value(), fj.w2[1].value(), fj.w2[2].value();
    W.col(2) << 0, 0, 1;
    worst = std::max(worst, (r.W[k] - W).cwiseAbs().maxCoeff());
  }
  CHECK(worst < 1e-5);

  const Alignment al = affine_align(r.x, sample_surface(f10, grid));
  CHECK(al.sup_error < 1e-4);
}

TEST_CASE("apolarity") {
  const Frontal par = entry("paraboloid");
  const Grid grid{Domain{}, 11, 11};
  CHECK(apolarity_check(extract_field(par, constant_field({0, 0, 1}), Domain{}), grid).regular < 1e-8);
  CHECK(apolarity_check(extract_field(entry("ex-5.10"), constant_field({0, 0, 1}), Domain{}), grid).regular < 1e-6);
  const TransversalField bent = rescaled_field(constant_field({0, 0, 1}), "1 + u1^2");
  CHECK(apolarity_check(extract_field(par, bent, Domain{}), grid).regular > 1e-3);
  CHECK(kind_of([&] { (void)apolarity_check(expr_data({{"Lambda", kIdentity}}), grid); }) ==
        ErrorKind::DegenerateMetric);
}

TEST_CASE("affine alignment") {
  std::mt19937 rng(8);
  std::uniform_real_distribution<double> d(-1, 1);
  std::vector<Eigen::Vector3d> x;
  for (int k = 0; k < 50; ++k) x.emplace_back(d(rng), d(rng), d(rng));
  const Alignment id = affine_align(x, x);
  CHECK((id.L - Mat3::Identity()).norm() < 1e-12);
  CHECK(id.a.norm() < 1e-12);
  CHECK(id.sup_error < 1e-12);

  for (int t = 0; t < 5; ++t) {
    Mat3 A = Mat3::Random() + 2 * Mat3::Identity();
    A /= std::cbrt(A.determinant());
    const Eigen::Vector3d b(d(rng), d(rng), d(rng));
    std::vector<Eigen::Vector3d> y;
    for (const auto& p : x) y.push_back(A * p + b);
    const Alignment al = affine_align(x, y);
    CHECK((al.L - A).cwiseAbs().maxCoeff() < 1e-10);
    CHECK((al.a - b).cwiseAbs().maxCoeff() < 1e-10);
  }

  std::vector<Eigen::Vector3d> flat;
  for (int k = 0; k < 20; ++k) flat.emplace_back(d(rng), d(rng), 0.5);
  CHECK(kind_of([&] { (void)affine_align(flat, flat); }) == ErrorKind::RankDeficient);
}
