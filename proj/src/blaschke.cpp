#include "frontal/blaschke.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "frontal/expr.hpp"
#include "frontal/parallel.hpp"

namespace frontal {

ProbeConfig probe_config(const Tolerances& tol) {
  ProbeConfig c;
  c.tol_limit = tol.tol_limit;
  return c;
}

const char* to_string(ProbeVerdict v) {
  switch (v) {
    case ProbeVerdict::Extendable: return "Extendable";
    case ProbeVerdict::NotExtendable: return "NotExtendable";
    case ProbeVerdict::Indeterminate: return "Indeterminate";
  }
  return "?";
}

namespace {

double rel(double d, double ref) { return std::abs(d) / std::max(1.0, std::abs(ref)); }

bool finite(const std::vector<double>& v) {
  return std::all_of(v.begin(), v.end(), [](double x) { return std::isfinite(x); });
}

}  // namespace

ProbeResult limit_probe(const VectorFn& f, double u1, double u2, const ProbeConfig& cfg) {
  const int nd = cfg.directions;
  // Per direction and component: the selected extrapolant and its Cauchy gap.
  std::vector<std::vector<double>> last(nd), gap(nd);
  std::vector<char> usable(nd, 0);
  parallel_for(nd, [&](std::size_t d) {
    const double th = std::numbers::pi / nd + 2 * std::numbers::pi * static_cast<double>(d) / nd;
    const double c = std::cos(th), s = std::sin(th);
    std::vector<std::vector<double>> vals;
    double r = cfg.r0;
    for (int k = 0; k < cfg.levels; ++k, r *= cfg.ratio) {
      std::vector<double> v;
      try {
        v = f(u1 + r * c, u2 + r * s);
      } catch (const Error&) {
        break;
      }
      if (!finite(v) || (!vals.empty() && v.size() != vals[0].size())) break;
      vals.push_back(std::move(v));
    }
    if (vals.size() < 4) return;
    const double q1 = cfg.ratio, q2 = cfg.ratio * cfg.ratio;
    const std::size_t m = vals[0].size();
    auto extrap = [m](const std::vector<std::vector<double>>& in, double q) {
      std::vector<std::vector<double>> out(in.size() - 1, std::vector<double>(m));
      for (std::size_t k = 0; k + 1 < in.size(); ++k)
        for (std::size_t i = 0; i < m; ++i) out[k][i] = (in[k + 1][i] - q * in[k][i]) / (1 - q);
      return out;
    };
    const auto R1 = extrap(vals, q1);
    const auto R2 = extrap(R1, q2);
    // Per component, round-off grows as the radius shrinks: walk down a
    // column while consecutive extrapolants keep getting closer. The second
    // column is preferred; the first one takes over when noise reaches the
    // second column before it settles.
    auto walk = [](const std::vector<std::vector<double>>& R, std::size_t i, double& diff) {
      auto gap_at = [&](std::size_t k) { return rel(R[k + 1][i] - R[k][i], R[k + 1][i]); };
      std::size_t best = 0;
      diff = gap_at(0);
      while (best + 2 < R.size()) {
        const double next = gap_at(best + 1);
        if (!(next < diff)) break;
        diff = next;
        ++best;
      }
      return R[best + 1][i];
    };
    last[d].resize(m);
    gap[d].resize(m);
    for (std::size_t i = 0; i < m; ++i) {
      double d2 = 0, d1 = 0;
      const double v2 = walk(R2, i, d2), v1 = walk(R1, i, d1);
      const bool first = d2 > cfg.tol_limit && d1 < d2;
      last[d][i] = first ? v1 : v2;
      gap[d][i] = first ? d1 : d2;
    }
    usable[d] = 1;
  });

  ProbeResult res;
  std::size_t m = 0;
  for (int d = 0; d < nd; ++d)
    if (usable[d]) {
      ++res.used_directions;
      m = last[d].size();
    }
  if (res.used_directions == 0) return res;
  res.limit.assign(m, 0.0);
  for (int d = 0; d < nd; ++d)
    if (usable[d])
      for (std::size_t i = 0; i < m; ++i) res.limit[i] += last[d][i] / res.used_directions;
  for (int d = 0; d < nd; ++d) {
    if (!usable[d]) continue;
    for (std::size_t i = 0; i < m; ++i) {
      res.spread = std::max(res.spread, rel(last[d][i] - res.limit[i], res.limit[i]));
      res.cauchy = std::max(res.cauchy, gap[d][i]);
    }
  }
  if (res.spread > cfg.tol_limit)
    res.verdict = ProbeVerdict::NotExtendable;
  else if (res.cauchy > cfg.tol_limit)
    res.verdict = ProbeVerdict::Indeterminate;
  else
    res.verdict = ProbeVerdict::Extendable;
  return res;
}

namespace {

[[noreturn]] void fail_probe(const ProbeResult& p, const std::string& what) {
  const std::string detail = what + " (directions " + std::to_string(p.used_directions) + ", spread " +
                             std::to_string(p.spread) + ", cauchy " + std::to_string(p.cauchy) + ")";
  fail(p.verdict == ProbeVerdict::NotExtendable ? ErrorKind::NotExtendable : ErrorKind::Indeterminate,
       detail);
}

double gauss_regular(const Frontal& f, double u1, double u2, const Tolerances& tol) {
  const FrameJets F = frame_jets(f, u1, u2, 1, tol);
  const double lam = F.lambda.value();
  if (std::abs(lam) <= tol.sing_band) fail(ErrorKind::SingularPoint, "inside the singular band");
  return F.K_Omega.value() / lam;
}

}  // namespace

GaussExtension gauss_extension(const Frontal& f, double u1, double u2, const Tolerances& tol) {
  GaussExtension g;
  const double lam = det(f.at(u1, u2, 0).Lambda).value();
  if (std::abs(lam) > tol.sing_band) {
    g.K = gauss_regular(f, u1, u2, tol);
    return g;
  }
  g.singular = true;
  g.probe = limit_probe(
      [&](double a, double b) { return std::vector<double>{gauss_regular(f, a, b, tol)}; }, u1, u2,
      probe_config(tol));
  if (g.probe.verdict != ProbeVerdict::Extendable) fail_probe(g.probe, "K does not extend");
  g.K = g.probe.limit[0];
  return g;
}

namespace {

// Regular-point Blaschke data with jets of the requested order.
BlaschkePoint blaschke_regular(const Frontal& f, double u1, double u2, int order, const Tolerances& tol,
                               int sign) {
  const FrameJets F = frame_jets(f, u1, u2, order + 2, tol);
  if (std::abs(F.lambda.value()) <= tol.sing_band) fail(ErrorKind::SingularPoint, "inside the singular band");
  const Jet K = F.K_Omega / F.lambda.truncate(order + 1);
  BlaschkePoint p;
  p.K = K.value();
  const int s = sign != 0 ? sign : (p.K < 0 ? -1 : 1);
  if (!(s * p.K > tol.eps_K)) fail(ErrorKind::KVanishes, "|K| <= eps_K or K has the wrong sign");
  const Jet phi = pow(s * K, 0.25);
  const Mat2J M = F.II_Omega.truncate(order).transpose();
  const Jet dM = det(M);
  if (!(std::abs(dM.value()) > tol.eps_K * std::max(1.0, std::abs(p.K))))
    fail(ErrorKind::SingularIIOmega, "II_Omega is singular where K does not vanish");
  const Mat2J Mi = inverse(M);
  const Jet g1 = phi.derivative(0), g2 = phi.derivative(1);
  p.phi = phi.truncate(order);
  p.a = -(Mi(0, 0) * g1 + Mi(0, 1) * g2);
  p.b = -(Mi(1, 0) * g1 + Mi(1, 1) * g2);
  p.xi = p.phi * F.n.truncate(order) + p.a * F.f.w1.truncate(order) + p.b * F.f.w2.truncate(order);
  return p;
}

// K, phi, a, b and the components of xi, every jet coefficient up to `order`.
std::vector<double> pack(const BlaschkePoint& p, int order) {
  const int m = ncoeffs(order);
  std::vector<double> v;
  v.reserve(1 + 6 * m);
  v.push_back(p.K);
  for (const Jet* j : {&p.phi, &p.a, &p.b, &p.xi[0], &p.xi[1], &p.xi[2]})
    for (int k = 0; k < m; ++k) v.push_back((*j)[k]);
  return v;
}

Jet unpack(const std::vector<double>& v, int slot, int order) {
  const int m = ncoeffs(order);
  Jet j(order);
  for (int k = 0; k < m; ++k) j[k] = v[1 + slot * m + k];
  return j;
}

}  // namespace

BlaschkePoint blaschke_at(const Frontal& f, double u1, double u2, int order, const Tolerances& tol,
                          int sign) {
  const double lam = det(f.at(u1, u2, 0).Lambda).value();
  if (std::abs(lam) > tol.sing_band) return blaschke_regular(f, u1, u2, order, tol, sign);

  // Jet coefficients extend smoothly across the singular set, so each is probed.
  BlaschkePoint p;
  p.singular = true;
  p.probe = limit_probe(
      [&](double a, double b) { return pack(blaschke_regular(f, a, b, order, tol, sign), order); }, u1, u2,
      probe_config(tol));
  if (p.probe.verdict != ProbeVerdict::Extendable) fail_probe(p.probe, "Blaschke field does not extend");
  const auto& L = p.probe.limit;
  p.K = L[0];
  if (!(std::abs(p.K) > tol.eps_K)) fail(ErrorKind::KVanishes, "extended K vanishes");
  p.phi = unpack(L, 0, order);
  p.a = unpack(L, 1, order);
  p.b = unpack(L, 2, order);
  p.xi = JetVec3(unpack(L, 3, order), unpack(L, 4, order), unpack(L, 5, order));
  return p;
}

TransversalField blaschke_transversal(const Frontal& f, const Tolerances& tol, int sign) {
  TransversalField t;
  t.name = "blaschke";
  t.xi = [f, tol, sign](double u1, double u2, int order) { return blaschke_at(f, u1, u2, order, tol, sign).xi; };
  t.split = [f, tol, sign](double u1, double u2, int order) {
    const BlaschkePoint p = blaschke_at(f, u1, u2, order, tol, sign);
    return FieldSplit{p.phi, p.a, p.b};
  };
  return t;
}

double volume_residual(const Frontal& f, const TransversalField& xi, double u1, double u2,
                       const Tolerances& tol) {
  const FrontalJets fj = f.at(u1, u2, 1);
  const double lam = det(fj.Lambda).value();
  const auto s = structure_from_jets(fj, xi.xi(u1, u2, 1), tol);
  const double dh = det(s.h).value();
  return std::abs(std::sqrt(std::abs(lam)) * std::abs(s.theta.value()) / std::sqrt(std::abs(dh)) - 1.0);
}

BlaschkeVerify blaschke_verify(const Frontal& f, const TransversalField& xi, const Grid& g,
                               const Tolerances& tol) {
  std::vector<double> tau(g.size(), -1.0), vol(g.size(), -1.0);
  parallel_for(g.size(), [&](std::size_t k) {
    const double u1 = g.u1(static_cast<int>(k) % g.nx), u2 = g.u2(static_cast<int>(k) / g.nx);
    const FrontalJets fj = f.at(u1, u2, 1);
    const double lam = det(fj.Lambda).value();
    if (std::abs(lam) <= tol.sing_band) return;
    const auto s = structure_from_jets(fj, xi.xi(u1, u2, 1), tol);
    tau[k] = std::max(std::abs(s.tau[0].value()), std::abs(s.tau[1].value()));
    const double dh = det(s.h).value();
    vol[k] = std::abs(std::sqrt(std::abs(lam)) * std::abs(s.theta.value()) / std::sqrt(std::abs(dh)) - 1.0);
  });
  BlaschkeVerify v;
  for (int k = 0; k < g.size(); ++k) {
    if (tau[k] < 0) continue;
    ++v.points;
    v.max_tau = std::max(v.max_tau, tau[k]);
    v.max_volume = std::max(v.max_volume, vol[k]);
  }
  return v;
}

BlaschkeField blaschke_field(const Frontal& f, const Grid& g, const Tolerances& tol) {
  BlaschkeField bf;
  bf.grid = g;
  const auto n = static_cast<std::size_t>(g.size());
  bf.K.resize(n);
  bf.phi.resize(n);
  bf.a.resize(n);
  bf.b.resize(n);
  bf.xi.resize(n);
  bf.singular.resize(n);
  std::vector<double> spread(n, 0.0);
  parallel_for(n, [&](std::size_t k) {
    const double u1 = g.u1(static_cast<int>(k) % g.nx), u2 = g.u2(static_cast<int>(k) / g.nx);
    const BlaschkePoint p = blaschke_at(f, u1, u2, 0, tol, 0);
    bf.K[k] = p.K;
    bf.phi[k] = p.phi.value();
    bf.a[k] = p.a.value();
    bf.b[k] = p.b.value();
    bf.xi[k] = p.xi.value();
    bf.singular[k] = p.singular;
    spread[k] = p.probe.spread;
  });
  const bool pos = std::any_of(bf.K.begin(), bf.K.end(), [](double K) { return K > 0; });
  const bool neg = std::any_of(bf.K.begin(), bf.K.end(), [](double K) { return K < 0; });
  if (pos && neg) fail(ErrorKind::KVanishes, "K changes sign on the grid");
  bf.sign = neg ? -1 : 1;
  double dev = 0;
  for (std::size_t k = 0; k < n; ++k) {
    if (bf.singular[k]) ++bf.probed;
    bf.worst_spread = std::max(bf.worst_spread, spread[k]);
    for (int i = 0; i < 3; ++i) dev = std::max(dev, rel(bf.xi[k][i] - bf.xi[0][i], bf.xi[0][i]));
  }
  bf.improper_sphere = dev <= 1e-6;
  bf.verify = blaschke_verify(f, blaschke_transversal(f, tol, bf.sign), g, tol);
  return bf;
}

namespace {

Mat2J gram(const JetVec3& a, const JetVec3& b) {
  Mat2J m;
  m(0, 0) = dot(a, a);
  m(0, 1) = dot(a, b);
  m(1, 0) = m(0, 1);
  m(1, 1) = dot(b, b);
  return m;
}

}  // namespace

ExtensionFn extension_inputs(const Frontal& f) {
  return [f](double u1, double u2, int order) {
    const FrontalJets fj = f.at(u1, u2, order);
    ExtensionData d;
    d.Lambda = fj.Lambda;
    d.I_Omega = gram(fj.w1, fj.w2);
    d.I = d.Lambda * d.I_Omega * d.Lambda.transpose();
    return d;
  };
}

ExtensionFn extension_from_expressions(const std::array<std::string, 4>& lambda,
                                       const std::array<std::string, 4>& i_omega,
                                       const std::vector<std::string>& classical_i) {
  if (!classical_i.empty() && classical_i.size() != 3)
    fail(ErrorKind::InputError, "classical first fundamental form needs E, F, G");
  struct Exprs {
    std::array<Expression, 4> L, Io;
    std::vector<Expression> I;
  };
  auto e = std::make_shared<Exprs>();
  for (int k = 0; k < 4; ++k) {
    e->L[k] = Expression::parse(lambda[k]);
    e->Io[k] = Expression::parse(i_omega[k]);
  }
  for (const auto& s : classical_i) e->I.push_back(Expression::parse(s));
  return [e](double u1, double u2, int order) {
    ExtensionData d;
    for (int k = 0; k < 4; ++k) {
      d.Lambda(k / 2, k % 2) = e->L[k].eval_jet(u1, u2, order);
      d.I_Omega(k / 2, k % 2) = e->Io[k].eval_jet(u1, u2, order);
    }
    if (e->I.empty()) {
      d.I = d.Lambda * d.I_Omega * d.Lambda.transpose();
    } else {
      d.I(0, 0) = e->I[0].eval_jet(u1, u2, order);
      d.I(0, 1) = e->I[1].eval_jet(u1, u2, order);
      d.I(1, 0) = d.I(0, 1);
      d.I(1, 1) = e->I[2].eval_jet(u1, u2, order);
    }
    return d;
  };
}

Jet extension_G(const ExtensionData& d, int which) {
  if (which != 1 && which != 2) fail(ErrorKind::InputError, "extension condition index must be 1 or 2");
  const int v = which - 1;
  const Mat2J Lu = d.Lambda.derivative(v);
  const int o = Lu.order();
  const Mat2J L = d.Lambda.truncate(o), Io = d.I_Omega.truncate(o);
  // a I_Omega b^T for row vectors a, b.
  auto form = [&](const Jet& a0, const Jet& a1, const Jet& b0, const Jet& b1) {
    return a0 * (Io(0, 0) * b0 + Io(0, 1) * b1) + a1 * (Io(1, 0) * b0 + Io(1, 1) * b1);
  };
  const Jet lin = form(Lu(0, 0), Lu(0, 1), L(1, 0), L(1, 1)) - form(L(0, 0), L(0, 1), Lu(1, 0), Lu(1, 1));
  const Mat2J I1 = d.I.derivative(0), I2 = d.I.derivative(1);
  const Jet skew = which == 1 ? I2(0, 0) - I1(0, 1) : I2(0, 1) - I1(1, 1);
  return lin + skew;
}

ExtensionVerdict extension_condition(const ExtensionFn& data, int which, double u1, double u2,
                                     const Tolerances& tol) {
  auto ratio = [&](double a, double b) {
    const ExtensionData d = data(a, b, 1);
    const double lam = det(d.Lambda).value();
    if (std::abs(lam) <= tol.sing_band) fail(ErrorKind::SingularPoint, "inside the singular band");
    return extension_G(d, which).value() / lam;
  };
  ExtensionVerdict v;
  const double lam = det(data(u1, u2, 0).Lambda).value();
  if (std::abs(lam) > tol.sing_band) {
    v.verdict = ProbeVerdict::Extendable;
    v.omega = ratio(u1, u2);
    return v;
  }
  v.singular = true;
  v.probe = limit_probe([&](double a, double b) { return std::vector<double>{ratio(a, b)}; }, u1, u2,
                        probe_config(tol));
  v.verdict = v.probe.verdict;
  if (!v.probe.limit.empty()) v.omega = v.probe.limit[0];
  return v;
}

TangentSplitFn tangent_split(const Frontal& f, const TransversalField& xi, const Tolerances& tol) {
  return [f, xi, tol](double u1, double u2) {
    const auto s = structure_from_field(f, xi, u1, u2, 0, tol);
    TangentSplit t;
    t.h = s.h.value();
    FieldSplit sp;
    if (xi.split) {
      sp = xi.split(u1, u2, 0);
    } else {
      const FrameJets F = frame_jets(f, u1, u2, 1, tol);
      sp = split_field(F, xi.xi(u1, u2, 1));
    }
    t.at = sp.at.value();
    t.bt = sp.bt.value();
    return t;
  };
}

ExtendedD extend_D(const ExtensionFn& data, const TangentSplitFn& split, int which, double u1, double u2,
                   const Tolerances& tol) {
  ExtendedD r;
  r.verdict = extension_condition(data, which, u1, u2, tol);
  if (r.verdict.verdict != ProbeVerdict::Extendable)
    fail(ErrorKind::ConditionFailed, std::string("omega_") + std::to_string(which) + " does not extend (" +
                                         to_string(r.verdict.verdict) + ")");
  r.omega = r.verdict.omega;
  const ExtensionData d = data(u1, u2, 1);
  const Mat2 Io = d.I_Omega.value();
  const Mat2 Iu = d.I_Omega.derivative(which - 1).value();
  const TangentSplit t = split(u1, u2);
  const int j = which - 1;
  Mat2 H{};
  for (int i = 0; i < 2; ++i) {
    H[i][0] = t.at * t.h[i][j];
    H[i][1] = t.bt * t.h[i][j];
  }
  Eigen::Matrix2d N, I;
  for (int i = 0; i < 2; ++i)
    for (int k = 0; k < 2; ++k) {
      double HI = H[i][0] * Io[0][k] + H[i][1] * Io[1][k];
      N(i, k) = Iu[i][k] - 2 * HI;
      I(i, k) = Io[i][k];
    }
  N(0, 1) -= r.omega;
  N(1, 0) += r.omega;
  const Eigen::Matrix2d D = 0.5 * N * I.inverse();
  for (int i = 0; i < 2; ++i)
    for (int k = 0; k < 2; ++k) r.D[i][k] = D(i, k);
  return r;
}

namespace {

Vec3 rank1_eval(const Expression& h, const Expression& c, double u1, double u2, double eps) {
  const Jet hj = h.eval_jet(u1, u2, 2), cj = c.eval_jet(u1, u2, 1);
  const double cv = cj.value();
  if (!(cv > 0)) fail(ErrorKind::DomainError, "c must be positive");
  const double h11 = hj.coeff(2, 0), h12 = hj.coeff(1, 1), hu1 = hj.coeff(1, 0);
  const double c1 = cj.coeff(1, 0), c2 = cj.coeff(0, 1);
  if (std::abs(h11) <= eps) fail(ErrorKind::DivisionByZero, "h_{u1u1} vanishes");
  const double den = std::pow(cv, 0.75) * h11;
  return {-0.25 * c1 / den, -0.25 * (c2 * h11 - c1 * h12) / den,
          0.25 * (-u2 * c2 * h11 + u2 * c1 * h12 + 4 * cv * h11 - c1 * hu1) / den};
}

}  // namespace

Vec3 rank1_closed_form(const std::string& h, const std::string& c, double u1, double u2,
                       const Rank1Options& opt, const Tolerances& tol) {
  const Expression he = Expression::parse(h), ce = Expression::parse(c);
  try {
    return rank1_eval(he, ce, u1, u2, opt.eps);
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::DivisionByZero || !opt.allow_limit) throw;
  }
  const ProbeResult p = limit_probe(
      [&](double a, double b) {
        const Vec3 v = rank1_eval(he, ce, a, b, opt.eps);
        return std::vector<double>(v.begin(), v.end());
      },
      u1, u2, probe_config(tol));
  if (p.verdict != ProbeVerdict::Extendable) fail_probe(p, "closed form does not extend");
  return {p.limit[0], p.limit[1], p.limit[2]};
}

JetVec3 conormal(const Frontal& f, const TransversalField& xi, double u1, double u2, int order,
                 const Tolerances& tol) {
  const FrontalJets fj = f.at(u1, u2, order);
  const JetVec3 n = unit_normal(fj.w1, fj.w2, tol.eps_rank);
  const JetVec3 x = xi.xi(u1, u2, order);
  const Jet d = dot(n, x);
  const auto xv = x.value();
  const double xn = std::sqrt(xv[0] * xv[0] + xv[1] * xv[1] + xv[2] * xv[2]);
  if (!(std::abs(d.value()) > tol.eps_rank * xn)) fail(ErrorKind::NotTransversal, "<n, xi> vanishes");
  return inv(d) * n;
}

ConormalReport conormal_verify(const Frontal& f, const TransversalField& xi, const Grid& g,
                               const Tolerances& tol) {
  struct Node {
    bool regular = false, rank_checked = false;
    double dual = 0, tangent = 0, dxi = 0, dh = 0, sigma2 = INFINITY;
  };
  std::vector<Node> out(g.size());
  parallel_for(g.size(), [&](std::size_t k) {
    const double u1 = g.u1(static_cast<int>(k) % g.nx), u2 = g.u2(static_cast<int>(k) / g.nx);
    Node& o = out[k];
    const FrameJets F = frame_jets(f, u1, u2, 1, tol);
    JetVec3 nu, x;
    try {
      nu = conormal(f, xi, u1, u2, 1, tol);
      x = xi.xi(u1, u2, 1);
    } catch (const Error& e) {
      if (std::abs(F.lambda.value()) > tol.sing_band) throw;
      return;
    }
    if (std::abs(F.K_Omega.value()) > tol.eps_K) {
      o.rank_checked = true;
      double G[2][2] = {};
      for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b) G[a][b] = dot(nu.derivative(a), nu.derivative(b)).value();
      const double tr = G[0][0] + G[1][1], dt = G[0][0] * G[1][1] - G[0][1] * G[1][0];
      const double disc = std::sqrt(std::max(0.0, 0.25 * tr * tr - dt));
      const double s1 = std::sqrt(std::max(0.0, 0.5 * tr + disc));
      const double s2 = std::sqrt(std::max(0.0, 0.5 * tr - disc));
      o.sigma2 = s2 - tol.eps_rank * std::max(1.0, s1);
    }
    if (std::abs(F.lambda.value()) <= tol.sing_band) return;
    o.regular = true;
    const auto s = structure_from_jets(F.f, x, tol);
    const JetVec3* w[2] = {&F.f.w1, &F.f.w2};
    o.dual = std::abs(dot(nu, x).value() - 1.0);
    for (int i = 0; i < 2; ++i) {
      o.tangent = std::max(o.tangent, std::abs(dot(nu, *w[i]).value()));
      const JetVec3 nui = nu.derivative(i);
      o.dxi = std::max(o.dxi, std::abs(dot(nui, x.truncate(0)).value()));
      for (int j = 0; j < 2; ++j)
        o.dh = std::max(o.dh, std::abs(dot(nui, w[j]->truncate(0)).value() + s.h(j, i).value()));
    }
  });
  ConormalReport r;
  r.min_sigma2 = INFINITY;
  for (const Node& o : out) {
    if (o.rank_checked) {
      ++r.nonparabolic_points;
      r.min_sigma2 = std::min(r.min_sigma2, o.sigma2);
      if (!(o.sigma2 > 0)) r.immersion = false;
    }
    if (!o.regular) continue;
    ++r.points;
    r.dual = std::max(r.dual, o.dual);
    r.tangent = std::max(r.tangent, o.tangent);
    r.dxi = std::max(r.dxi, o.dxi);
    r.dh = std::max(r.dh, o.dh);
  }
  if (r.nonparabolic_points == 0) r.min_sigma2 = 0;
  return r;
}

}  // namespace frontal
