#include "frontal/frame.hpp"

#include <cmath>
#include <mutex>

#include "frontal/expr.hpp"
#include "frontal/parallel.hpp"

namespace frontal {

namespace {

Mat2 to_mat(const Mat2J& m) { return m.value(); }

Mat2J gram(const JetVec3& a, const JetVec3& b) {
  Mat2J g;
  g(0, 0) = dot(a, a);
  g(0, 1) = dot(a, b);
  g(1, 0) = g(0, 1);
  g(1, 1) = dot(b, b);
  return g;
}

double smallest_singular(double g00, double g01, double g11) {
  const double tr = g00 + g11, d = g00 * g11 - g01 * g01;
  const double disc = std::sqrt(std::max(0.0, 0.25 * tr * tr - d));
  return std::sqrt(std::max(0.0, 0.5 * tr - disc));
}

}  // namespace

JetVec3 apply(const Eigen::Matrix3d& A, const JetVec3& v) {
  JetVec3 r;
  for (int i = 0; i < 3; ++i) r[i] = A(i, 0) * v[0] + A(i, 1) * v[1] + A(i, 2) * v[2];
  return r;
}

void check_basis_rank(const JetVec3& w1, const JetVec3& w2, double eps_rank) {
  const auto a = w1.value(), b = w2.value();
  const double g00 = a[0] * a[0] + a[1] * a[1] + a[2] * a[2];
  const double g11 = b[0] * b[0] + b[1] * b[1] + b[2] * b[2];
  const double g01 = a[0] * b[0] + a[1] * b[1] + a[2] * b[2];
  const double scale = std::sqrt(std::max(g00, g11));
  if (!(smallest_singular(g00, g01, g11) > eps_rank * std::max(scale, 1e-300)))
    fail(ErrorKind::DegenerateBasis, "moving basis columns are linearly dependent");
}

Mat2J factor_lambda(const JetVec3& x, const JetVec3& w1, const JetVec3& w2, const Tolerances& tol) {
  check_basis_rank(w1, w2, tol.eps_rank);
  const int order = std::min(x.order() - 1, w1.order());
  const JetVec3 a = w1.truncate(order), b = w2.truncate(order);
  const Mat2J ginv = inverse(gram(a, b));
  Mat2J L;
  for (int j = 0; j < 2; ++j) {
    const JetVec3 xu = x.derivative(j);
    const Jet p = dot(a, xu), q = dot(b, xu);
    L(j, 0) = ginv(0, 0) * p + ginv(0, 1) * q;
    L(j, 1) = ginv(1, 0) * p + ginv(1, 1) * q;
  }
  FrontalJets fj{x, a, b, L};
  const double res = decomposition_residual(fj);
  double scale = 1.0;
  for (int j = 0; j < 2; ++j)
    for (int i = 0; i < 3; ++i) scale = std::max(scale, std::abs(x.derivative(j)[i].value()));
  if (res > tol.eps_dec * scale)
    fail(ErrorKind::NotAFrontal, "Dx is not in the span of the moving basis (residual " +
                                     std::to_string(res) + ")");
  return L;
}

JetVec3 unit_normal(const JetVec3& w1, const JetVec3& w2, double eps_rank) {
  check_basis_rank(w1, w2, eps_rank);
  const JetVec3 c = cross(w1, w2);
  return inv(norm(c)) * c;
}

double decomposition_residual(const FrontalJets& fj) {
  double res = 0.0;
  for (int j = 0; j < 2; ++j) {
    const JetVec3 d = fj.x.derivative(j) - (fj.Lambda(j, 0) * fj.w1 + fj.Lambda(j, 1) * fj.w2);
    for (int i = 0; i < 3; ++i)
      for (int k = 0; k < d[i].size(); ++k) res = std::max(res, std::abs(d[i][k]));
  }
  return res;
}

Frontal frontal_from_expressions(const std::string& name, const std::array<std::string, 3>& x,
                                 const std::array<std::string, 3>& w1,
                                 const std::array<std::string, 3>& w2,
                                 const std::optional<std::array<std::string, 4>>& lambda,
                                 const Domain& domain, const std::string& source,
                                 const Tolerances& tol) {
  struct Exprs {
    std::array<Expression, 3> x, w1, w2;
    std::optional<std::array<Expression, 4>> L;
  };
  auto e = std::make_shared<Exprs>();
  for (int i = 0; i < 3; ++i) {
    e->x[i] = Expression::parse(x[i]);
    e->w1[i] = Expression::parse(w1[i]);
    e->w2[i] = Expression::parse(w2[i]);
    e->x[i].validate_abs(domain);
    e->w1[i].validate_abs(domain);
    e->w2[i].validate_abs(domain);
  }
  if (lambda) {
    e->L.emplace();
    for (int k = 0; k < 4; ++k) {
      (*e->L)[k] = Expression::parse((*lambda)[k]);
      (*e->L)[k].validate_abs(domain);
    }
  }
  Frontal f;
  f.name = name;
  f.source = source;
  f.domain = domain;
  f.eval = [e, tol](double u1, double u2, int order) {
    FrontalJets fj;
    auto vec = [&](const std::array<Expression, 3>& v, int o) {
      return JetVec3(v[0].eval_jet(u1, u2, o), v[1].eval_jet(u1, u2, o), v[2].eval_jet(u1, u2, o));
    };
    fj.w1 = vec(e->w1, order);
    fj.w2 = vec(e->w2, order);
    if (e->L) {
      fj.x = vec(e->x, order);
      for (int k = 0; k < 4; ++k) fj.Lambda(k / 2, k % 2) = (*e->L)[k].eval_jet(u1, u2, order);
    } else {
      if (order + 1 > kMaxOrder)
        fail(ErrorKind::InsufficientJetOrder, "factoring Lambda needs x at order + 1");
      const JetVec3 xx = vec(e->x, order + 1);
      fj.Lambda = factor_lambda(xx, fj.w1, fj.w2, tol);
      fj.x = xx.truncate(order);
    }
    return fj;
  };
  return f;
}

Frontal affine_image(const Frontal& f, const Eigen::Matrix3d& A, const Eigen::Vector3d& b) {
  Frontal g = f;
  g.name = f.name + "/affine";
  g.eval = [inner = f.eval, A, b](double u1, double u2, int order) {
    FrontalJets fj = inner(u1, u2, order);
    fj.x = apply(A, fj.x);
    for (int i = 0; i < 3; ++i) fj.x[i] += b[i];
    fj.w1 = apply(A, fj.w1);
    fj.w2 = apply(A, fj.w2);
    return fj;
  };
  return g;
}

Frontal swap_basis(const Frontal& f) {
  Frontal g = f;
  g.name = f.name + "/swapped";
  g.eval = [inner = f.eval](double u1, double u2, int order) {
    FrontalJets fj = inner(u1, u2, order);
    std::swap(fj.w1, fj.w2);
    for (int j = 0; j < 2; ++j) std::swap(fj.Lambda(j, 0), fj.Lambda(j, 1));
    return fj;
  };
  return g;
}

FrameJets frame_jets(const Frontal& f, double u1, double u2, int order, const Tolerances& tol) {
  if (order < 1) fail(ErrorKind::InsufficientJetOrder, "frame data needs order >= 1");
  FrameJets F;
  F.f = f.at(u1, u2, order);
  const JetVec3 &w1 = F.f.w1, &w2 = F.f.w2;
  F.n = unit_normal(w1, w2, tol.eps_rank);
  F.I_Omega = gram(w1, w2);
  const JetVec3* w[2] = {&w1, &w2};
  Mat2J Tm[2];
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) {
      const JetVec3 wij = w[i]->derivative(j);
      F.II_Omega(i, j) = dot(wij, F.n);
      F.II_alt(i, j) = -dot(*w[i], F.n.derivative(j));
      Tm[j](i, 0) = dot(wij, w1);
      Tm[j](i, 1) = dot(wij, w2);
    }
  const Mat2J Iinv = inverse(F.I_Omega);
  F.T1 = Tm[0] * Iinv;
  F.T2 = Tm[1] * Iinv;
  F.lambda = det(F.f.Lambda);
  F.K_Omega = det(F.II_Omega) / det(F.I_Omega);
  F.I = F.f.Lambda * F.I_Omega * F.f.Lambda.transpose();
  F.II = F.f.Lambda * F.II_Omega;
  return F;
}

FrameData frame_data(const Frontal& f, double u1, double u2, const Tolerances& tol) {
  const FrameJets F = frame_jets(f, u1, u2, 1, tol);
  FrameData d;
  d.I_Omega = to_mat(F.I_Omega);
  d.II_Omega = to_mat(F.II_Omega);
  Mat2J mu = Jet(0, -1.0) * (F.II_Omega.transpose() * inverse(F.I_Omega));
  d.mu_Omega = to_mat(mu);
  d.T1 = to_mat(F.T1);
  d.T2 = to_mat(F.T2);
  d.I = to_mat(F.I);
  d.II = to_mat(F.II);
  d.n = F.n.value();
  d.lambda = F.lambda.value();
  d.K_Omega = F.K_Omega.value();
  d.regular = std::abs(d.lambda) > tol.eps_sing;
  d.K = d.regular ? d.K_Omega / d.lambda : NAN;
  return d;
}

SingularScan singular_scan(const Frontal& f, const Grid& g, const Tolerances& tol) {
  std::vector<double> lam(g.size());
  parallel_for(g.size(), [&](std::size_t k) {
    const int i = static_cast<int>(k) % g.nx, j = static_cast<int>(k) / g.nx;
    lam[k] = det(f.at(g.u1(i), g.u2(j), 0).Lambda).value();
  });
  SingularScan s;
  auto L = [&](int i, int j) { return lam[j * g.nx + i]; };
  auto sing = [&](double v) { return std::abs(v) < tol.eps_sing; };
  for (int j = 0; j < g.ny; ++j)
    for (int i = 0; i < g.nx; ++i)
      if (sing(L(i, j))) s.nodes.push_back({i, j});
  for (int j = 0; j + 1 < g.ny; ++j)
    for (int i = 0; i + 1 < g.nx; ++i) {
      const double c[4] = {L(i, j), L(i + 1, j), L(i, j + 1), L(i + 1, j + 1)};
      bool pos = false, neg = false, any = false, all = true;
      for (double v : c) {
        pos |= v > 0;
        neg |= v < 0;
        any |= sing(v);
        all &= sing(v);
      }
      if (any || (pos && neg)) s.cells.push_back({i, j});
      if (all) s.regular_dense = false;
    }
  return s;
}

namespace {

template <class Margin>
GridVerdict grid_test(const Grid& g, Margin margin) {
  std::vector<double> m(g.size());
  parallel_for(g.size(), [&](std::size_t k) {
    const int i = static_cast<int>(k) % g.nx, j = static_cast<int>(k) / g.nx;
    m[k] = margin(g.u1(i), g.u2(j));
  });
  GridVerdict v;
  v.worst = INFINITY;
  for (int k = 0; k < g.size(); ++k) {
    v.worst = std::min(v.worst, m[k]);
    if (m[k] <= 0) {
      v.holds = false;
      if (v.witnesses.size() < 16) v.witnesses.push_back({g.u1(k % g.nx), g.u2(k / g.nx)});
    }
  }
  return v;
}

}  // namespace

GridVerdict wavefront_test(const Frontal& f, const Grid& g, const Tolerances& tol) {
  return grid_test(g, [&](double u1, double u2) {
    const FrontalJets fj = f.at(u1, u2, 1);
    const JetVec3 n = unit_normal(fj.w1, fj.w2, tol.eps_rank);
    double c[2][6];
    for (int j = 0; j < 2; ++j) {
      const JetVec3 xu = fj.x.derivative(j), nu = n.derivative(j);
      for (int i = 0; i < 3; ++i) {
        c[j][i] = xu[i].value();
        c[j][3 + i] = nu[i].value();
      }
    }
    double g00 = 0, g01 = 0, g11 = 0;
    for (int i = 0; i < 6; ++i) {
      g00 += c[0][i] * c[0][i];
      g01 += c[0][i] * c[1][i];
      g11 += c[1][i] * c[1][i];
    }
    const double s2 = smallest_singular(g00, g01, g11);
    const double s1 = std::sqrt(std::max(0.0, g00 + g11 - s2 * s2));
    return s2 - tol.eps_rank * std::max(1.0, s1);
  });
}

GridVerdict nonparabolic_test(const Frontal& f, const Grid& g, const Tolerances& tol) {
  return grid_test(g, [&](double u1, double u2) {
    return std::abs(frame_jets(f, u1, u2, 1, tol).K_Omega.value()) - tol.eps_K;
  });
}

}  // namespace frontal
