#include "frontal/catalog.hpp"

#include <cmath>
#include <memory>

#include "frontal/expr.hpp"

namespace frontal {

namespace {

std::string ex58_xi(int k) {
  const std::string rho = "(54*u1^4*u2^4 + 9*u1^2*u2^5 + 4*u2^6 + 54*u1^2*u2^2 + 12*u2^3 + 9)";
  const std::string p1 =
      "(216*u1^6*u2^4 - 189*u1^4*u2^5 + 66*u1^2*u2^6 + 16*u2^7 + 324*u1^4*u2^2 + 9*u1^2*u2^3 + 48*u2^4 + "
      "108*u1^2 + 36*u2)";
  const std::string p2 = "((216*u1^4*u2^4 + 87*u1^2*u2^5 - 16*u2^6 + 252*u1^2*u2^2 + 24*u2^3 + 72)*u2^2)";
  const std::string p3 =
      "(145800*u1^8*u2^8 + 35721*u1^6*u2^9 + 25326*u1^4*u2^10 + 4896*u1^2*u2^11 + 277020*u1^6*u2^6 + "
      "896*u2^12 + 114129*u1^4*u2^7 + 39204*u1^2*u2^8 + 5088*u2^9 + 179820*u1^4*u2^4 + 88938*u1^2*u2^5 + "
      "12096*u2^6 + 48600*u1^2*u2^2 + 14040*u2^3 + 6480)";
  // rho^(-7/4) = rho^(1/4) / rho^2
  const std::string scale = "*sqrt(sqrt(" + rho + "))/" + rho + "^2";
  if (k == 0) return "(-3*sqrt(3)/8)*" + p1 + scale;
  if (k == 1) return "(9*sqrt(3)/8)*" + p2 + scale;
  return "(sqrt(3)/240)*" + p3 + scale;
}

std::vector<CatalogEntry> build_catalog() {
  std::vector<CatalogEntry> c;
  {
    CatalogEntry e;
    e.name = "ex-5.8";
    e.description = "cuspidal cross-cap obtained from a 5/2-cuspidal edge";
    e.domain = {-1, 1, -4, 4};
    e.blaschke_domain = {-1, 1, -1, 1};
    e.reconstruct_domain = {-0.5, 0.5, -0.5, 0.5};
    e.x = {"u1", "u2^2", "4/15*u1*u2^5 + 1/2*u1^3*u2^4 + u1*u2^2"};
    e.w1 = {"1", "0", "u2^2*(4/15*u2^3 + 3/2*u1^2*u2^2 + 1)"};
    e.w2 = {"0", "1", "1/3*u1*(3*u1^2*u2^2 + 2*u2^3 + 3)"};
    e.Lambda = {"1", "0", "0", "2*u2"};
    e.known.lambda = "2*u2";
    const std::string mu =
        "(2025*u1^4*u2^8 + 720*u1^2*u2^9 + 900*u1^6*u2^4 + 64*u2^10 + 1200*u1^4*u2^5 + 3100*u1^2*u2^6 + "
        "480*u2^7 + 1800*u1^4*u2^2 + 1200*u1^2*u2^3 + 900*u2^4 + 900*u1^2 + 900)";
    e.known.K = "9e4*(54*u1^4*u2^4 + 9*u1^2*u2^5 + 4*u2^6 + 54*u1^2*u2^2 + 12*u2^3 + 9)/" + mu + "^2";
    e.known.xi = {ex58_xi(0), ex58_xi(1), ex58_xi(2)};
    e.known.note = "K vanishes inside the full domain near (0, -1.145); the Blaschke field lives on [-1,1]^2";
    c.push_back(e);
  }
  {
    CatalogEntry e;
    e.name = "ex-5.9";
    e.description = "frontal with extendable non-vanishing Gaussian curvature, singular along u2 = 0";
    // w2 vanishes at (0, -1), so the closed grid stays inside u2 > -1.
    e.domain = {-1, 1, -0.9, 0.9};
    e.blaschke_domain = {-1, 1, -0.9, 0.9};
    // xi grows like (u2^3 + 1)^(-3/2) towards u2 = -1.
    e.reconstruct_domain = {-0.5, 0.5, -0.5, 0.5};
    e.x = {"u1", "2/5*u2^5 + u2^2", "u1*u2^2"};
    e.w1 = {"1", "0", "u2^2"};
    e.w2 = {"0", "u2^3 + 1", "u1"};
    e.Lambda = {"1", "0", "0", "2*u2"};
    e.known.lambda = "2*u2";
    e.known.K = "(u2 + 1)^2*(u2^2 - u2 + 1)^2/(u2^10 + 2*u2^7 + u2^6 + u2^4 + 2*u2^3 + u1^2 + 1)^2";
    const std::string den = "(4*(u2^2 + u2 + 1)^(3/2)*(u2 + 1)^(3/2))";
    e.known.xi = {"3*u2/" + den, "0", "(7*u2^3 + 4)/" + den};
    const std::string exact = "(4*(u2^3 + 1)^(3/2))";
    e.known.xi_exact = {"3*u2/" + exact, "0", "(7*u2^3 + 4)/" + exact};
    e.known.note = "K vanishes at u2 = -1";
    c.push_back(e);
  }
  {
    CatalogEntry e;
    e.name = "ex-5.10";
    e.description = "rank-1 wave front from h = u1^4 - 6 u1^2 u2^2 + u2^4, an improper affine sphere";
    e.domain = {-1, 1, -1, 1};
    e.blaschke_domain = e.reconstruct_domain = e.domain;
    e.x = {"u1", "12*u1^2*u2 - 4*u2^3", "u1^4 + 6*u1^2*u2^2 - 3*u2^4"};
    e.w1 = {"1", "24*u1*u2", "4*u1^3 + 12*u1*u2^2"};
    e.w2 = {"0", "1", "u2"};
    e.Lambda = {"1", "0", "0", "12*u1^2 - 12*u2^2"};
    e.known.lambda = "-12*u1^2 + 12*u2^2";
    e.known.K = "-1/(16*u1^6 - 96*u1^4*u2^2 + 144*u1^2*u2^4 + u2^2 + 1)^2";
    e.known.xi = {"0", "0", "1"};
    e.known.xi_exact = {"0", "0", "1"};
    c.push_back(e);
  }
  {
    CatalogEntry e;
    e.name = "paraboloid";
    e.description = "elliptic paraboloid, a regular improper affine sphere";
    e.domain = {-1, 1, -1, 1};
    e.blaschke_domain = e.reconstruct_domain = e.domain;
    e.x = {"u1", "u2", "(u1^2 + u2^2)/2"};
    e.w1 = {"1", "0", "u1"};
    e.w2 = {"0", "1", "u2"};
    e.Lambda = {"1", "0", "0", "1"};
    e.known.lambda = "1";
    e.known.K = "1/(1 + u1^2 + u2^2)^2";
    e.known.xi_exact = {"0", "0", "1"};
    c.push_back(e);
  }
  {
    CatalogEntry e;
    e.name = "plane";
    e.description = "coordinate plane, flat";
    e.domain = {-1, 1, -1, 1};
    e.blaschke_domain = e.reconstruct_domain = e.domain;
    e.x = {"u1", "u2", "0"};
    e.w1 = {"1", "0", "0"};
    e.w2 = {"0", "1", "0"};
    e.Lambda = {"1", "0", "0", "1"};
    e.known.lambda = "1";
    e.known.K = "0";
    c.push_back(e);
  }
  return c;
}

void check_decomposition(const Frontal& f, const Tolerances& tol) {
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      const double u1 = f.domain.a1 + (f.domain.b1 - f.domain.a1) * (0.1 + 0.4 * i);
      const double u2 = f.domain.a2 + (f.domain.b2 - f.domain.a2) * (0.1 + 0.4 * j);
      const FrontalJets fj = f.at(u1, u2, 1);
      double scale = 1.0;
      for (int k = 0; k < 2; ++k)
        for (int c = 0; c < 3; ++c) scale = std::max(scale, std::abs(fj.x.derivative(k)[c].value()));
      const double r = decomposition_residual(fj);
      if (r > tol.eps_dec * scale)
        fail(ErrorKind::NotAFrontal, f.name + ": Dx != Omega Lambda^T (residual " + std::to_string(r) + ")");
    }
}

// Jet of a function of one coordinate: coefficients involving the other vanish.
Jet only(const Jet& j, int var) {
  Jet r = j;
  for (int n = 0; n <= j.order(); ++n)
    for (int a = 0; a <= n; ++a)
      if ((var == 0 && a != 0) || (var == 1 && a != n)) r[jet_index(n - a, a)] = 0.0;
  return r;
}

QuadratureConfig quad(const Tolerances& tol) {
  QuadratureConfig q;
  q.nodes = tol.quad_nodes;
  q.max_nodes = tol.quad_max_nodes;
  return q;
}

void check_identity(const Expression& lhs, const Expression& rhs, const Domain& d, const std::string& what) {
  for (int i = 0; i < 5; ++i)
    for (int j = 0; j < 5; ++j) {
      const double u1 = d.a1 + (d.b1 - d.a1) * i / 4.0, u2 = d.a2 + (d.b2 - d.a2) * j / 4.0;
      const double a = lhs.eval(u1, u2), b = rhs.eval(u1, u2);
      if (std::abs(a - b) > 1e-9 * std::max({1.0, std::abs(a), std::abs(b)}))
        fail(ErrorKind::ConditionFailed, what + " fails at (" + std::to_string(u1) + ", " + std::to_string(u2) + ")");
    }
}

}  // namespace

Frontal CatalogEntry::frontal(const Tolerances& tol) const {
  Frontal f = frontal_from_expressions(name, x, w1, w2, Lambda, domain, "catalog", tol);
  check_decomposition(f, tol);
  return f;
}

const std::vector<CatalogEntry>& catalog() {
  static const std::vector<CatalogEntry> c = build_catalog();
  return c;
}

const CatalogEntry& find_entry(const std::string& name) {
  for (const auto& e : catalog())
    if (e.name == name) return e;
  fail(ErrorKind::InputError, "unknown catalog entry '" + name + "'");
}

Frontal gen_rank1_wavefront(const std::string& h_text, const std::string& c_text, const Domain& domain,
                            const Tolerances& tol) {
  struct D {
    Expression h, h1, h2, h11, h12, h22;
  };
  auto d = std::make_shared<D>();
  d->h = Expression::parse(h_text);
  d->h1 = d->h.derivative(Var::U1);
  d->h2 = d->h.derivative(Var::U2);
  d->h11 = d->h1.derivative(Var::U1);
  d->h12 = d->h2.derivative(Var::U1);
  d->h22 = d->h2.derivative(Var::U2);
  if (!c_text.empty()) {
    const Expression c = Expression::parse(c_text);
    const Expression pde = Expression::parse(d->h11.print() + " + " + print(c.root()) + " * " + d->h22.print());
    check_identity(pde, Expression::parse("0"), domain, "h_{u1u1} + c h_{u2u2} = 0");
  }
  const QuadratureConfig q = quad(tol);
  Frontal f;
  f.name = "gen-rank1-wavefront";
  f.source = "generator";
  f.domain = domain;
  f.eval = [d, q](double u1, double u2, int order) {
    const JetFn g = [d](double a, double b, int o) {
      return d->h1.eval_jet(a, b, o) - Jet::variable(1, b, o) * d->h12.eval_jet(a, b, o);
    };
    const JetFn k = [d](double, double t, int o) {
      return Jet::variable(1, t, o) * only(d->h22.eval_jet(0.0, t, o), 1);
    };
    FrontalJets fj;
    fj.x = JetVec3(Jet::variable(0, u1, order), -d->h2.eval_jet(u1, u2, order),
                   integrate_jet(g, 0.0, 0, u1, u2, order, q) - integrate_jet(k, 0.0, 1, u1, u2, order, q));
    fj.w1 = JetVec3(Jet(order, 1.0), Jet(order, 0.0), d->h1.eval_jet(u1, u2, order));
    fj.w2 = JetVec3(Jet(order, 0.0), Jet(order, 1.0), Jet::variable(1, u2, order));
    fj.Lambda(0, 0) = Jet(order, 1.0);
    fj.Lambda(0, 1) = -d->h12.eval_jet(u1, u2, order);
    fj.Lambda(1, 0) = Jet(order, 0.0);
    fj.Lambda(1, 1) = -d->h22.eval_jet(u1, u2, order);
    return fj;
  };
  check_decomposition(f, tol);
  return f;
}

Frontal gen_extendable(const std::string& b_text, const std::string& h_text, const std::string& l_text,
                       const std::string& r_text, const Domain& domain, const Tolerances& tol) {
  struct D {
    Expression b, b1, b2, h, l, r;
  };
  auto d = std::make_shared<D>();
  d->b = Expression::parse(b_text);
  d->b1 = d->b.derivative(Var::U1);
  d->b2 = d->b.derivative(Var::U2);
  d->h = Expression::parse(h_text);
  d->l = Expression::parse(l_text);
  d->r = Expression::parse(r_text);
  if (d->l.uses(Var::U2) || d->r.uses(Var::U2))
    fail(ErrorKind::InputError, "l and r are functions of u1 only");
  const QuadratureConfig q = quad(tol);
  Frontal f;
  f.name = "gen-extendable";
  f.source = "generator";
  f.domain = domain;
  f.eval = [d, q](double u1, double u2, int order) {
    if (order + 1 > kMaxOrder) fail(ErrorKind::InsufficientJetOrder, "generator needs y3 at order + 1");
    const int o1 = order + 1;
    // G = int_0^{u2} h b_{u2},  P = int_0^{u2} h b b_{u2}
    const JetFn hb2 = [d](double a, double t, int o) { return d->h.eval_jet(a, t, o) * d->b2.eval_jet(a, t, o); };
    const JetFn hbb2 = [d](double a, double t, int o) {
      return d->h.eval_jet(a, t, o) * d->b.eval_jet(a, t, o) * d->b2.eval_jet(a, t, o);
    };
    // L = int_0^{u1} l,  M = int_0^{u1} l(t) b(t, 0) dt,  R = int_0^{u1} (u1 - t) r(t) dt
    const JetFn lj = [d](double t, double, int o) { return only(d->l.eval_jet(t, 0.0, o), 0); };
    const JetFn lb = [d](double t, double, int o) {
      return only(d->l.eval_jet(t, 0.0, o), 0) * only(d->b.eval_jet(t, 0.0, o), 0);
    };
    const JetFn rj = [d](double t, double, int o) { return only(d->r.eval_jet(t, 0.0, o), 0); };
    const JetFn trj = [d](double t, double, int o) {
      return Jet::variable(0, t, o) * only(d->r.eval_jet(t, 0.0, o), 0);
    };
    const Jet G = integrate_jet(hb2, 0.0, 1, u1, u2, o1, q);
    const Jet P = integrate_jet(hbb2, 0.0, 1, u1, u2, o1, q);
    const Jet L = integrate_jet(lj, 0.0, 0, u1, u2, o1, q);
    const Jet M = integrate_jet(lb, 0.0, 0, u1, u2, o1, q);
    const Jet R = Jet::variable(0, u1, o1) * integrate_jet(rj, 0.0, 0, u1, u2, o1, q) -
                  integrate_jet(trj, 0.0, 0, u1, u2, o1, q);
    const Jet b = d->b.eval_jet(u1, u2, o1);
    const Jet y3 = b * (G + L) - P - M + R;
    const Jet GL = (G + L).truncate(order);
    const Jet b1 = d->b1.eval_jet(u1, u2, order);
    FrontalJets fj;
    fj.x = JetVec3(Jet::variable(0, u1, order), b.truncate(order), y3.truncate(order));
    fj.w2 = JetVec3(Jet(order, 0.0), Jet(order, 1.0), GL);
    fj.w1 = JetVec3(Jet(order, 1.0), Jet(order, 0.0), y3.derivative(0) - b1 * GL);
    fj.Lambda(0, 0) = Jet(order, 1.0);
    fj.Lambda(0, 1) = b1;
    fj.Lambda(1, 0) = Jet(order, 0.0);
    fj.Lambda(1, 1) = d->b2.eval_jet(u1, u2, order);
    return fj;
  };
  check_decomposition(f, tol);
  return f;
}

Frontal gen_nonparabolic(const std::string& a_text, const std::string& b_text, const Domain& domain,
                         const Tolerances& tol) {
  struct D {
    Expression a, b, a1, a2, b1, b2;
  };
  auto d = std::make_shared<D>();
  d->a = Expression::parse(a_text);
  d->b = Expression::parse(b_text);
  d->a1 = d->a.derivative(Var::U1);
  d->a2 = d->a.derivative(Var::U2);
  d->b1 = d->b.derivative(Var::U1);
  d->b2 = d->b.derivative(Var::U2);
  check_identity(d->a2, d->b1, domain, "a_{u2} = b_{u1}");
  const QuadratureConfig q = quad(tol);
  Frontal f;
  f.name = "gen-nonparabolic";
  f.source = "generator";
  f.domain = domain;
  f.eval = [d, q](double u1, double u2, int order) {
    const JetFn g = [d](double t, double s, int o) {
      return Jet::variable(0, t, o) * d->a1.eval_jet(t, s, o) + Jet::variable(1, s, o) * d->b1.eval_jet(t, s, o);
    };
    const JetFn k = [d](double, double t, int o) {
      return Jet::variable(1, t, o) * only(d->b2.eval_jet(0.0, t, o), 1);
    };
    FrontalJets fj;
    fj.x = JetVec3(d->a.eval_jet(u1, u2, order), d->b.eval_jet(u1, u2, order),
                   integrate_jet(g, 0.0, 0, u1, u2, order, q) + integrate_jet(k, 0.0, 1, u1, u2, order, q));
    fj.w1 = JetVec3(Jet(order, 1.0), Jet(order, 0.0), Jet::variable(0, u1, order));
    fj.w2 = JetVec3(Jet(order, 0.0), Jet(order, 1.0), Jet::variable(1, u2, order));
    fj.Lambda(0, 0) = d->a1.eval_jet(u1, u2, order);
    fj.Lambda(0, 1) = d->b1.eval_jet(u1, u2, order);
    fj.Lambda(1, 0) = d->a2.eval_jet(u1, u2, order);
    fj.Lambda(1, 1) = d->b2.eval_jet(u1, u2, order);
    return fj;
  };
  check_decomposition(f, tol);
  return f;
}

}  // namespace frontal
