#include "frontal/equiaffine.hpp"

#include <cmath>
#include <mutex>

#include "frontal/expr.hpp"
#include "frontal/parallel.hpp"

namespace frontal {

namespace {

double vec_norm(const std::array<double, 3>& v) { return std::sqrt(v[0] * v[0] + v[1] * v[1] + v[2] * v[2]); }

}  // namespace

TransversalField constant_field(const Vec3& v) {
  TransversalField t;
  t.name = "constant";
  t.xi = [v](double, double, int order) { return JetVec3::constant(v[0], v[1], v[2], order); };
  return t;
}

TransversalField normal_field(const Frontal& f, double scale, const Tolerances& tol) {
  TransversalField t;
  t.name = "normal";
  t.xi = [f, scale, tol](double u1, double u2, int order) {
    const FrontalJets fj = f.at(u1, u2, order);
    return scale * unit_normal(fj.w1, fj.w2, tol.eps_rank);
  };
  t.split = [scale](double, double, int order) {
    return FieldSplit{Jet(order, scale), Jet(order), Jet(order)};
  };
  return t;
}

TransversalField rescaled_field(const TransversalField& xi, const std::string& rho) {
  auto e = std::make_shared<Expression>(Expression::parse(rho));
  TransversalField t;
  t.name = xi.name + "*(" + rho + ")";
  t.xi = [inner = xi.xi, e](double u1, double u2, int order) {
    return e->eval_jet(u1, u2, order) * inner(u1, u2, order);
  };
  if (xi.split)
    t.split = [inner = xi.split, e](double u1, double u2, int order) {
      FieldSplit s = inner(u1, u2, order);
      const Jet r = e->eval_jet(u1, u2, order);
      return FieldSplit{r * s.phi, r * s.at, r * s.bt};
    };
  return t;
}

TransversalField expression_field(const std::array<std::string, 3>& c) {
  auto e = std::make_shared<std::array<Expression, 3>>();
  for (int i = 0; i < 3; ++i) (*e)[i] = Expression::parse(c[i]);
  TransversalField t;
  t.name = "expression";
  t.xi = [e](double u1, double u2, int order) {
    return JetVec3((*e)[0].eval_jet(u1, u2, order), (*e)[1].eval_jet(u1, u2, order),
                   (*e)[2].eval_jet(u1, u2, order));
  };
  return t;
}

FieldSplit split_field(const FrameJets& F, const JetVec3& xi) {
  FieldSplit s;
  s.phi = dot(xi, F.n);
  const Mat2J Iinv = inverse(F.I_Omega);
  const Jet p = dot(xi, F.f.w1), q = dot(xi, F.f.w2);
  s.at = Iinv(0, 0) * p + Iinv(0, 1) * q;
  s.bt = Iinv(1, 0) * p + Iinv(1, 1) * q;
  return s;
}

EquiaffineStructure structure_from_jets(const FrontalJets& fj, const JetVec3& xi, const Tolerances& tol) {
  if (fj.w1.order() < 1 || xi.order() < 1)
    fail(ErrorKind::InsufficientJetOrder, "structure symbols need first derivatives of w and xi");
  const JetVec3 &w1 = fj.w1, &w2 = fj.w2;
  EquiaffineStructure s;
  s.theta = det3(w1, w2, xi);
  const double scale = vec_norm(w1.value()) * vec_norm(w2.value()) * vec_norm(xi.value());
  if (!(std::abs(s.theta.value()) > tol.eps_rank * scale))
    fail(ErrorKind::NotTransversal, "det(w1 w2 xi) vanishes");
  const Jet itheta = inv(s.theta);
  auto solve = [&](const JetVec3& v) {
    return std::array<Jet, 3>{det3(v, w2, xi) * itheta, det3(w1, v, xi) * itheta,
                              det3(w1, w2, v) * itheta};
  };
  const JetVec3* w[2] = {&w1, &w2};
  Mat2J* D[2] = {&s.D1, &s.D2};
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) {
      const JetVec3 wij = w[i]->derivative(j);
      const auto c = solve(wij);
      (*D[j])(i, 0) = c[0];
      (*D[j])(i, 1) = c[1];
      s.h(i, j) = c[2];
      const JetVec3 r = wij - (c[0] * w1 + c[1] * w2 + c[2] * xi);
      for (int k = 0; k < 3; ++k) s.residual_w = std::max(s.residual_w, std::abs(r[k].value()));
    }
  for (int i = 0; i < 2; ++i) {
    const JetVec3 xd = xi.derivative(i);
    const auto c = solve(xd);
    s.S(i, 0) = -c[0];
    s.S(i, 1) = -c[1];
    s.tau[i] = c[2];
    const JetVec3 r = xd + s.S(i, 0) * w1 + s.S(i, 1) * w2 - s.tau[i] * xi;
    for (int k = 0; k < 3; ++k) s.residual_xi = std::max(s.residual_xi, std::abs(r[k].value()));
  }
  return s;
}

EquiaffineStructure structure_from_field(const Frontal& f, const TransversalField& xi, double u1,
                                         double u2, int order, const Tolerances& tol) {
  return structure_from_jets(f.at(u1, u2, order + 1), xi.xi(u1, u2, order + 1), tol);
}

GridMax max_tau(const Frontal& f, const TransversalField& xi, const Grid& g, double skip_band,
                const Tolerances& tol) {
  std::vector<double> v(g.size(), -1.0);
  parallel_for(g.size(), [&](std::size_t k) {
    const double u1 = g.u1(static_cast<int>(k) % g.nx), u2 = g.u2(static_cast<int>(k) / g.nx);
    if (skip_band >= 0 && std::abs(det(f.at(u1, u2, 0).Lambda).value()) <= skip_band) return;
    const auto s = structure_from_field(f, xi, u1, u2, 0, tol);
    v[k] = std::max(std::abs(s.tau[0].value()), std::abs(s.tau[1].value()));
  });
  GridMax r;
  for (int k = 0; k < g.size(); ++k) {
    if (v[k] < 0) continue;
    ++r.points;
    if (v[k] >= r.value) {
      r.value = v[k];
      r.where = {g.u1(k % g.nx), g.u2(k / g.nx)};
    }
  }
  return r;
}

bool is_equiaffine(const Frontal& f, const TransversalField& xi, const Grid& g, double tol_tau,
                   GridMax* report, const Tolerances& tol) {
  const GridMax m = max_tau(f, xi, g, -1, tol);
  if (report) *report = m;
  return m.value <= tol_tau;
}

TauFormulaResidual check_tau_formula(const Frontal& f, const TransversalField& xi, double u1, double u2,
                                     const Tolerances& tol) {
  const FrameJets F = frame_jets(f, u1, u2, 1, tol);
  const JetVec3 x = xi.xi(u1, u2, 1);
  const auto s = structure_from_jets(F.f, x, tol);
  const FieldSplit sp = xi.split ? xi.split(u1, u2, 1) : split_field(F, x);
  if (sp.phi.value() == 0.0) fail(ErrorKind::NotTransversal, "phi vanishes");
  TauFormulaResidual r;
  const double phi = sp.phi.value();
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j)
      r.h = std::max(r.h, std::abs(s.h(i, j).value() - F.II_Omega(i, j).value() / phi));
    const double pred = (sp.at.value() * F.II_Omega(0, i).value() + sp.bt.value() * F.II_Omega(1, i).value() +
                         sp.phi.coeff(i == 0 ? 1 : 0, i == 0 ? 0 : 1)) /
                        phi;
    r.tau = std::max(r.tau, std::abs(s.tau[i].value() - pred));
  }
  return r;
}

double parallel_volume_residual(const Frontal& f, const TransversalField& xi, double u1, double u2,
                                const Tolerances& tol) {
  const FrontalJets fj = f.at(u1, u2, 1);
  if (std::abs(det(fj.Lambda).value()) <= tol.eps_sing)
    fail(ErrorKind::SingularPoint, "parallel volume check runs on regular points");
  const auto s = structure_from_jets(fj, xi.xi(u1, u2, 1), tol);
  double r = 0;
  const Mat2J* D[2] = {&s.D1, &s.D2};
  for (int k = 0; k < 2; ++k) {
    const double dtheta = s.theta.coeff(k == 0 ? 1 : 0, k == 0 ? 0 : 1);
    const double rhs = ((*D[k])(0, 0).value() + (*D[k])(1, 1).value() + s.tau[k].value()) * s.theta.value();
    r = std::max(r, std::abs(dtheta - rhs));
  }
  return r;
}

GridMax parallel_volume_check(const Frontal& f, const TransversalField& xi, const Grid& g,
                              const Tolerances& tol) {
  std::vector<double> v(g.size(), -1.0);
  parallel_for(g.size(), [&](std::size_t k) {
    const double u1 = g.u1(static_cast<int>(k) % g.nx), u2 = g.u2(static_cast<int>(k) / g.nx);
    try {
      v[k] = parallel_volume_residual(f, xi, u1, u2, tol);
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::SingularPoint) throw;
    }
  });
  GridMax r;
  for (int k = 0; k < g.size(); ++k) {
    if (v[k] < 0) continue;
    ++r.points;
    if (v[k] >= r.value) {
      r.value = v[k];
      r.where = {g.u1(k % g.nx), g.u2(k / g.nx)};
    }
  }
  return r;
}

ClassicalSymbols classical_symbols(const Frontal& f, const TransversalField& xi, double u1, double u2,
                                   const Tolerances& tol) {
  const FrameJets F = frame_jets(f, u1, u2, 2, tol);
  if (std::abs(F.lambda.value()) <= tol.sing_band)
    fail(ErrorKind::SingularPoint, "classical symbols need a regular point");
  const JetVec3 x = xi.xi(u1, u2, 2);
  const FieldSplit sp = split_field(F, x);
  if (sp.phi.value() == 0.0) fail(ErrorKind::NotTransversal, "phi vanishes");
  ClassicalSymbols c;
  const Mat2J& L = F.f.Lambda;
  const Mat2J Linv = inverse(L.truncate(1));
  const Mat2J& I = F.I;
  const Mat2J Iinv = inverse(I.truncate(1));
  const Mat2J Iu1 = I.derivative(0), Iu2 = I.derivative(1);
  const Jet s1 = Iu2(0, 0) - Iu1(0, 1);  // E_{u2} - F_{u1}
  const Jet s2 = Iu2(0, 1) - Iu1(1, 1);  // F_{u2} - G_{u1}
  auto half_sum = [](const Mat2J& Iu, const Jet& s) {
    Mat2J m;
    m(0, 0) = 0.5 * Iu(0, 0);
    m(0, 1) = 0.5 * Iu(0, 1) - 0.5 * s;
    m(1, 0) = 0.5 * Iu(1, 0) + 0.5 * s;
    m(1, 1) = 0.5 * Iu(1, 1);
    return m;
  };
  c.Gamma1 = half_sum(Iu1, s1) * Iinv;
  c.Gamma2 = half_sum(Iu2, s2) * Iinv;
  c.phi = sp.phi;
  // (a, b) = (at, bt) Lambda^{-1}
  c.a = sp.at * Linv(0, 0) + sp.bt * Linv(1, 0);
  c.b_coef = sp.at * Linv(0, 1) + sp.bt * Linv(1, 1);
  const Mat2J& II = F.II;
  const Jet iphi = inv(sp.phi);
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) c.c(i, j) = II(i, j) * iphi;
  // Gammat_j[i][k] = Gamma_j[i][k] - c_{ij} (a, b)_k
  Mat2J* G[2] = {&c.Gamma1, &c.Gamma2};
  Mat2J* Gt[2] = {&c.Gammat1, &c.Gammat2};
  for (int j = 0; j < 2; ++j)
    for (int i = 0; i < 2; ++i) {
      (*Gt[j])(i, 0) = (*G[j])(i, 0) - c.c(i, j) * c.a;
      (*Gt[j])(i, 1) = (*G[j])(i, 1) - c.c(i, j) * c.b_coef;
    }
  const auto s = structure_from_jets(F.f, x, tol);
  c.b = s.S * inverse(L.truncate(s.S.order()));
  c.tau = s.tau;
  return c;
}

std::array<Mat2J, 2> D_from_gamma(const Frontal& f, const TransversalField& xi, double u1, double u2,
                                  const Tolerances& tol) {
  const ClassicalSymbols c = classical_symbols(f, xi, u1, u2, tol);
  const FrontalJets fj = f.at(u1, u2, 1);
  const Mat2J& L = fj.Lambda;
  const Mat2J Linv = inverse(L);
  return {Linv * (c.Gammat1 * L - L.derivative(0)), Linv * (c.Gammat2 * L - L.derivative(1))};
}

}  // namespace frontal
