#include "frontal/reconstruct.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>

#include "frontal/blaschke.hpp"
#include "frontal/expr.hpp"
#include "frontal/parallel.hpp"

namespace frontal {

const std::vector<ChannelGroup>& channel_groups() {
  static const std::vector<ChannelGroup> groups = {
      {"Lambda", 0, 4}, {"I_Omega", 4, 4}, {"h", 8, 4},   {"D1", 12, 4},
      {"D2", 16, 4},    {"S", 20, 4},      {"phi", 24, 1}, {"tau", 25, 2},
  };
  return groups;
}

namespace {

void put(std::vector<Jet>& c, int off, const Mat2J& m) {
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) c[off + 2 * i + j] = m(i, j);
}

Mat2J take(const std::vector<Jet>& c, int off) {
  Mat2J m;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) m(i, j) = c[off + 2 * i + j];
  return m;
}

}  // namespace

std::vector<Jet> to_channels(const StructureJets& s) {
  std::vector<Jet> c(kChannels);
  put(c, 0, s.Lambda);
  put(c, 4, s.I_Omega);
  put(c, 8, s.h);
  put(c, 12, s.D1);
  put(c, 16, s.D2);
  put(c, 20, s.S);
  c[24] = s.phi;
  c[25] = s.tau[0];
  c[26] = s.tau[1];
  return c;
}

StructureJets from_channels(const std::vector<Jet>& c) {
  if (static_cast<int>(c.size()) != kChannels) fail(ErrorKind::InputError, "expected 27 channels");
  StructureJets s;
  s.Lambda = take(c, 0);
  s.I_Omega = take(c, 4);
  s.h = take(c, 8);
  s.D1 = take(c, 12);
  s.D2 = take(c, 16);
  s.S = take(c, 20);
  s.phi = c[24];
  s.tau = {c[25], c[26]};
  return s;
}

StructureFn structure_expressions(const std::map<std::string, std::vector<std::string>>& entries) {
  std::vector<Expression> ex(kChannels);
  std::vector<bool> set(kChannels, false);
  for (const auto& [name, texts] : entries) {
    const auto& groups = channel_groups();
    auto g = std::find_if(groups.begin(), groups.end(), [&](const ChannelGroup& c) { return name == c.name; });
    if (g == groups.end()) fail(ErrorKind::InputError, "unknown structure entry '" + name + "'");
    if (static_cast<int>(texts.size()) != g->size)
      fail(ErrorKind::InputError, "entry '" + name + "' needs " + std::to_string(g->size) + " expressions");
    for (int k = 0; k < g->size; ++k) {
      ex[g->offset + k] = Expression::parse(texts[k]);
      set[g->offset + k] = true;
    }
  }
  if (!set[24]) {
    ex[24] = Expression::parse("1");
    set[24] = true;
  }
  return [ex, set](double u1, double u2, int order) {
    std::vector<Jet> c(kChannels);
    for (int k = 0; k < kChannels; ++k) c[k] = set[k] ? ex[k].eval_jet(u1, u2, order) : Jet(order, 0.0);
    return from_channels(c);
  };
}

namespace {

// First derivative at index i of n equally spaced samples from a 7-point
// window (sixth order, one-sided near the ends). Weights by Fornberg's recursion.
constexpr int kStencil = 7;

std::array<double, kStencil> fd_weights(double x0, const std::array<double, kStencil>& x) {
  double c[kStencil][2] = {};
  c[0][0] = 1;
  double c1 = 1, c4 = x[0] - x0;
  for (int i = 1; i < kStencil; ++i) {
    const int mn = std::min(i, 1);
    double c2 = 1;
    const double c5 = c4;
    c4 = x[i] - x0;
    for (int j = 0; j < i; ++j) {
      const double c3 = x[i] - x[j];
      c2 *= c3;
      if (j == i - 1) {
        for (int k = mn; k >= 1; --k) c[i][k] = c1 * (k * c[i - 1][k - 1] - c5 * c[i - 1][k]) / c2;
        c[i][0] = -c1 * c5 * c[i - 1][0] / c2;
      }
      for (int k = mn; k >= 1; --k) c[j][k] = (c4 * c[j][k] - k * c[j][k - 1]) / c3;
      c[j][0] = c4 * c[j][0] / c3;
    }
    c1 = c2;
  }
  std::array<double, kStencil> w{};
  for (int i = 0; i < kStencil; ++i) w[i] = c[i][1];
  return w;
}

template <class Get>
double slope(const Get& f, int i, int n, double h) {
  const int lo = std::clamp(i - kStencil / 2, 0, n - kStencil);
  std::array<double, kStencil> x{};
  for (int k = 0; k < kStencil; ++k) x[k] = lo + k;
  const auto w = fd_weights(i, x);
  double d = 0;
  for (int k = 0; k < kStencil; ++k) d += w[k] * f(lo + k);
  return d / h;
}

struct Hermite {
  Grid grid;
  double hx = 0, hy = 0;
  // Per node: value, d/du1, d/du2, d2/du1du2 for every channel.
  std::vector<std::array<std::array<double, kChannels>, 4>> node;
};

// Cubic Hermite basis on [0, 1]: h00, h10, h01, h11 and their derivatives.
void basis(double t, double b[4], double d[4]) {
  const double t2 = t * t, t3 = t2 * t;
  b[0] = 2 * t3 - 3 * t2 + 1;
  b[1] = t3 - 2 * t2 + t;
  b[2] = -2 * t3 + 3 * t2;
  b[3] = t3 - t2;
  d[0] = 6 * t2 - 6 * t;
  d[1] = 3 * t2 - 4 * t + 1;
  d[2] = -6 * t2 + 6 * t;
  d[3] = 3 * t2 - 2 * t;
}

}  // namespace

StructureFn structure_interpolated(const SampledStructure& s) {
  const Grid& g = s.grid;
  if (g.nx < kStencil || g.ny < kStencil) fail(ErrorKind::InputError, "grid-backed data needs at least 7x7 nodes");
  if (static_cast<int>(s.values.size()) != g.size()) fail(ErrorKind::InputError, "grid value count mismatch");
  for (const auto& v : s.values)
    for (double x : v)
      if (!std::isfinite(x)) fail(ErrorKind::InputError, "non-finite grid value");
  auto H = std::make_shared<Hermite>();
  H->grid = g;
  H->hx = (g.domain.b1 - g.domain.a1) / (g.nx - 1);
  H->hy = (g.domain.b2 - g.domain.a2) / (g.ny - 1);
  H->node.resize(g.size());
  const int nx = g.nx, ny = g.ny;
  std::vector<std::array<double, kChannels>> dx(g.size());
  for (int j = 0; j < ny; ++j)
    for (int i = 0; i < nx; ++i)
      for (int c = 0; c < kChannels; ++c) {
        const int k = j * nx + i;
        H->node[k][0][c] = s.values[k][c];
        dx[k][c] = slope([&](int a) { return s.values[j * nx + a][c]; }, i, nx, H->hx);
      }
  for (int j = 0; j < ny; ++j)
    for (int i = 0; i < nx; ++i)
      for (int c = 0; c < kChannels; ++c) {
        const int k = j * nx + i;
        H->node[k][1][c] = dx[k][c];
        H->node[k][2][c] = slope([&](int b) { return s.values[b * nx + i][c]; }, j, ny, H->hy);
        H->node[k][3][c] = slope([&](int b) { return dx[b * nx + i][c]; }, j, ny, H->hy);
      }

  return [H](double u1, double u2, int order) {
    if (order > 1) fail(ErrorKind::InsufficientJetOrder, "grid-backed data carries first derivatives only");
    const Grid& g = H->grid;
    const double fx = (u1 - g.domain.a1) / H->hx, fy = (u2 - g.domain.a2) / H->hy;
    const int i = std::clamp(static_cast<int>(std::floor(fx)), 0, g.nx - 2);
    const int j = std::clamp(static_cast<int>(std::floor(fy)), 0, g.ny - 2);
    double bx[4], dbx[4], by[4], dby[4];
    basis(fx - i, bx, dbx);
    basis(fy - j, by, dby);
    // Weights for (value, d1, d2, d12) at the four corners, for f, f_u1, f_u2.
    double w[3][4][4];
    for (int cx = 0; cx < 2; ++cx)
      for (int cy = 0; cy < 2; ++cy) {
        const int corner = 2 * cy + cx;
        const double ax = bx[2 * cx], sx = bx[2 * cx + 1] * H->hx;
        const double ay = by[2 * cy], sy = by[2 * cy + 1] * H->hy;
        const double dax = dbx[2 * cx] / H->hx, dsx = dbx[2 * cx + 1];
        const double day = dby[2 * cy] / H->hy, dsy = dby[2 * cy + 1];
        const double vx[2] = {ax, sx}, vy[2] = {ay, sy}, gx[2] = {dax, dsx}, gy[2] = {day, dsy};
        for (int p = 0; p < 4; ++p) {
          const int px = p & 1, py = p >> 1;  // p = 0 value, 1 d/du1, 2 d/du2, 3 cross
          w[0][corner][p] = vx[px] * vy[py];
          w[1][corner][p] = gx[px] * vy[py];
          w[2][corner][p] = vx[px] * gy[py];
        }
      }
    std::vector<Jet> c(kChannels, Jet(order, 0.0));
    for (int corner = 0; corner < 4; ++corner) {
      const auto& nd = H->node[(j + (corner >> 1)) * g.nx + i + (corner & 1)];
      for (int p = 0; p < 4; ++p)
        for (int ch = 0; ch < kChannels; ++ch) {
          c[ch][0] += w[0][corner][p] * nd[p][ch];
          if (order == 1) {
            c[ch][1] += w[1][corner][p] * nd[p][ch];
            c[ch][2] += w[2][corner][p] * nd[p][ch];
          }
        }
    }
    return from_channels(c);
  };
}

StructureFn structure_of_field(const Frontal& f, const TransversalField& xi, const Tolerances& tol) {
  return [f, xi, tol](double u1, double u2, int order) {
    const FrontalJets fj = f.at(u1, u2, order + 1);
    const JetVec3 x = xi.xi(u1, u2, order + 1);
    const EquiaffineStructure e = structure_from_jets(fj, x, tol);
    StructureJets s;
    s.Lambda = fj.Lambda.truncate(order);
    const JetVec3 w1 = fj.w1.truncate(order), w2 = fj.w2.truncate(order);
    s.I_Omega.m = {{{dot(w1, w1), dot(w1, w2)}, {dot(w2, w1), dot(w2, w2)}}};
    s.h = e.h.truncate(order);
    s.D1 = e.D1.truncate(order);
    s.D2 = e.D2.truncate(order);
    s.S = e.S.truncate(order);
    s.tau = {e.tau[0].truncate(order), e.tau[1].truncate(order)};
    s.phi = dot(x.truncate(order), unit_normal(w1, w2, tol.eps_rank));
    return s;
  };
}

namespace {

std::array<double, kChannels> values_of(const StructureJets& s) {
  const auto c = to_channels(s);
  std::array<double, kChannels> v{};
  for (int k = 0; k < kChannels; ++k) v[k] = c[k].value();
  return v;
}

bool singular_value(const StructureJets& s, const Tolerances& tol) {
  return std::abs(det(s.Lambda).value()) <= tol.sing_band;
}

}  // namespace

SampledStructure sample_structure(const Frontal& f, const TransversalField& xi, const Grid& grid,
                                  const Tolerances& tol) {
  SampledStructure out;
  out.grid = grid;
  out.values.resize(grid.size());
  const StructureFn direct = structure_of_field(f, xi, tol);
  parallel_for(grid.size(), [&](std::size_t k) {
    const double u1 = grid.u1(static_cast<int>(k) % grid.nx), u2 = grid.u2(static_cast<int>(k) / grid.nx);
    const FrontalJets fj = f.at(u1, u2, 0);
    if (std::abs(det(fj.Lambda).value()) > tol.sing_band) {
      out.values[k] = values_of(direct(u1, u2, 0));
      return;
    }
    const ProbeResult p = limit_probe(
        [&](double a, double b) {
          const StructureJets s = direct(a, b, 0);
          if (singular_value(s, tol)) fail(ErrorKind::SingularPoint, "probe point inside the band");
          const auto v = values_of(s);
          return std::vector<double>(v.begin(), v.end());
        },
        u1, u2, probe_config(tol));
    if (p.verdict != ProbeVerdict::Extendable)
      fail(p.verdict == ProbeVerdict::NotExtendable ? ErrorKind::NotExtendable : ErrorKind::Indeterminate,
           "structure symbols do not extend at (" + std::to_string(u1) + ", " + std::to_string(u2) + ")");
    std::copy(p.limit.begin(), p.limit.end(), out.values[k].begin());
    // Lambda and I_Omega are smooth inputs and need no probing.
    const StructureJets exact = direct(u1, u2, 0);
    const auto v = values_of(exact);
    std::copy(v.begin(), v.begin() + 8, out.values[k].begin());
  });
  return out;
}

namespace {

void set_base(StructureData& sd, const Frontal& f, const TransversalField& xi) {
  const double q1 = 0.5 * (sd.domain.a1 + sd.domain.b1), q2 = 0.5 * (sd.domain.a2 + sd.domain.b2);
  sd.basepoint = {q1, q2};
  const FrontalJets fj = f.at(q1, q2, 0);
  const Vec3 x = xi.xi(q1, q2, 0).value();
  for (int r = 0; r < 3; ++r) {
    sd.W0(r, 0) = fj.w1[r].value();
    sd.W0(r, 1) = fj.w2[r].value();
    sd.W0(r, 2) = x[r];
    sd.p(r) = fj.x[r].value();
  }
}

}  // namespace

StructureData extract_structure(const Frontal& f, const TransversalField& xi, const Grid& grid,
                                const Tolerances& tol, SampledStructure* samples) {
  StructureData sd;
  sd.backing = "grid";
  sd.domain = grid.domain;
  SampledStructure s = sample_structure(f, xi, grid, tol);
  sd.eval = structure_interpolated(s);
  if (samples) *samples = std::move(s);
  set_base(sd, f, xi);
  return sd;
}

StructureData extract_field(const Frontal& f, const TransversalField& xi, const Domain& domain,
                            const Tolerances& tol) {
  StructureData sd;
  sd.backing = "field";
  sd.domain = domain;
  sd.eval = structure_of_field(f, xi, tol);
  set_base(sd, f, xi);
  return sd;
}

namespace {

// Coefficient k (0 value, 1 d/du1, 2 d/du2) of the block Dj.
Mat3 block_coeff(const StructureJets& s, int j, int k) {
  const Mat2J& D = j == 0 ? s.D1 : s.D2;
  Mat3 B;
  for (int r = 0; r < 2; ++r) {
    B(r, 0) = D(r, 0)[k];
    B(r, 1) = D(r, 1)[k];
    B(r, 2) = s.h(r, j)[k];
  }
  B(2, 0) = -s.S(j, 0)[k];
  B(2, 1) = -s.S(j, 1)[k];
  B(2, 2) = s.tau[j][k];
  return B;
}

struct NodeEval {
  double regular = -1, singular = -1, scale = 0;
};

template <class Fn>
ResidualReport over_nodes(const StructureData& sd, const Grid& grid, const Tolerances& tol, const Fn& fn) {
  std::vector<NodeEval> r(grid.size());
  parallel_for(grid.size(), [&](std::size_t k) {
    const double u1 = grid.u1(static_cast<int>(k) % grid.nx), u2 = grid.u2(static_cast<int>(k) / grid.nx);
    const StructureJets s = sd.at(u1, u2, 1);
    double scale = 0;
    const double v = fn(s, scale);
    (singular_value(s, tol) ? r[k].singular : r[k].regular) = v;
    r[k].scale = scale;
  });
  ResidualReport out;
  for (int k = 0; k < grid.size(); ++k) {
    out.scale = std::max(out.scale, r[k].scale);
    out.singular = std::max(out.singular, r[k].singular);
    if (r[k].regular > out.regular) {
      out.regular = r[k].regular;
      out.where = {grid.u1(k % grid.nx), grid.u2(k / grid.nx)};
    }
  }
  return out;
}

Eigen::Matrix2d coeff2(const Mat2J& m, int k) {
  Eigen::Matrix2d out;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) out(i, j) = m(i, j)[k];
  return out;
}

}  // namespace

Mat3 block(const StructureJets& s, int j) { return block_coeff(s, j, 0); }

ResidualReport compat_residual(const StructureData& sd, const Grid& grid, const Tolerances& tol) {
  return over_nodes(sd, grid, tol, [](const StructureJets& s, double& scale) {
    const Mat3 B1 = block_coeff(s, 0, 0), B2 = block_coeff(s, 1, 0);
    scale = std::max(B1.cwiseAbs().maxCoeff(), B2.cwiseAbs().maxCoeff());
    const Mat3 R = block_coeff(s, 0, 2) - block_coeff(s, 1, 1) + B1 * B2 - B2 * B1;
    return R.norm();
  });
}

IntegrabilityReport integrability_residual(const StructureData& sd, const Grid& grid, const Tolerances& tol) {
  IntegrabilityReport out;
  out.sym = over_nodes(sd, grid, tol, [](const StructureJets& s, double& scale) {
    const Eigen::Matrix2d c = coeff2(s.Lambda, 0) * coeff2(s.h, 0);
    scale = c.cwiseAbs().maxCoeff();
    return std::abs(c(0, 1) - c(1, 0));
  });
  out.row = over_nodes(sd, grid, tol, [](const StructureJets& s, double& scale) {
    const Eigen::Matrix2d L = coeff2(s.Lambda, 0);
    const Eigen::Matrix2d A1 = L * coeff2(s.D1, 0) + coeff2(s.Lambda, 1);
    const Eigen::Matrix2d A2 = L * coeff2(s.D2, 0) + coeff2(s.Lambda, 2);
    scale = std::max(A1.cwiseAbs().maxCoeff(), A2.cwiseAbs().maxCoeff());
    return (A1.row(1) - A2.row(0)).cwiseAbs().maxCoeff();
  });
  return out;
}

ResidualReport gamma_flatness_residual(const Frontal& f, const TransversalField& xi, const Grid& grid,
                                       const Tolerances& tol) {
  std::vector<double> r(grid.size(), -1.0), sc(grid.size(), 0.0);
  parallel_for(grid.size(), [&](std::size_t k) {
    const double u1 = grid.u1(static_cast<int>(k) % grid.nx), u2 = grid.u2(static_cast<int>(k) / grid.nx);
    if (std::abs(det(f.at(u1, u2, 0).Lambda).value()) <= tol.sing_band) return;
    const ClassicalSymbols c = classical_symbols(f, xi, u1, u2, tol);
    auto G = [&](int j, int k2) {
      const Mat2J& Gt = j == 0 ? c.Gammat1 : c.Gammat2;
      Mat3 B;
      for (int a = 0; a < 2; ++a) {
        B(a, 0) = Gt(a, 0)[k2];
        B(a, 1) = Gt(a, 1)[k2];
        B(a, 2) = c.c(a, j)[k2];
      }
      B(2, 0) = -c.b(j, 0)[k2];
      B(2, 1) = -c.b(j, 1)[k2];
      B(2, 2) = c.tau[j][k2];
      return B;
    };
    const Mat3 B1 = G(0, 0), B2 = G(1, 0);
    sc[k] = std::max(B1.cwiseAbs().maxCoeff(), B2.cwiseAbs().maxCoeff());
    r[k] = (G(0, 2) - G(1, 1) + B1 * B2 - B2 * B1).norm();
  });
  ResidualReport out;
  for (int k = 0; k < grid.size(); ++k) {
    out.scale = std::max(out.scale, sc[k]);
    if (r[k] > out.regular) {
      out.regular = r[k];
      out.where = {grid.u1(k % grid.nx), grid.u2(k / grid.nx)};
    }
  }
  return out;
}

ResidualReport apolarity_check(const StructureData& sd, const Grid& grid, const Tolerances& tol) {
  ResidualReport out = over_nodes(sd, grid, tol, [&](const StructureJets& s, double& scale) {
    if (singular_value(s, tol)) return 0.0;
    const Mat2J c = s.Lambda * s.h;
    const Jet dc = det(c);
    if (!(std::abs(dc.value()) > tol.eps_rank)) fail(ErrorKind::DegenerateMetric, "det(Lambda h) vanishes");
    const Jet root = sqrt(abs(dc));
    const Eigen::Matrix2d L = coeff2(s.Lambda, 0), Li = L.inverse();
    double worst = 0;
    for (int k = 0; k < 2; ++k) {
      const Eigen::Matrix2d Gt = (L * coeff2(k == 0 ? s.D1 : s.D2, 0) + coeff2(s.Lambda, k + 1)) * Li;
      scale = std::max(scale, Gt.cwiseAbs().maxCoeff());
      worst = std::max(worst, std::abs(root[k + 1] - Gt.trace() * root.value()));
    }
    return worst;
  });
  return out;
}

namespace {

using State = Eigen::Matrix<double, 3, 4>;  // (w1 w2 xi | x)

State rhs(const StructureData& sd, double u1, double u2, int dir, const State& Y) {
  const StructureJets s = sd.at(u1, u2, 0);
  const Mat3 B = block(s, dir);
  State d;
  d.leftCols<3>() = Y.leftCols<3>() * B.transpose();
  d.col(3) = s.Lambda(dir, 0).value() * Y.col(0) + s.Lambda(dir, 1).value() * Y.col(1);
  return d;
}

// RK4 along coordinate `dir` from `from` to `to` with the other coordinate fixed.
State segment(const StructureData& sd, State Y, int dir, double fixed, double from, double to, double step) {
  const double len = to - from;
  if (len == 0) return Y;
  const int n = std::max(1, static_cast<int>(std::ceil(std::abs(len) / step - 1e-9)));
  const double h = len / n;
  auto at = [&](double t) { return dir == 0 ? std::array<double, 2>{t, fixed} : std::array<double, 2>{fixed, t}; };
  for (int s = 0; s < n; ++s) {
    const double t = from + s * h;
    auto p0 = at(t), pm = at(t + 0.5 * h), p1 = at(t + h);
    const State k1 = rhs(sd, p0[0], p0[1], dir, Y);
    const State k2 = rhs(sd, pm[0], pm[1], dir, Y + 0.5 * h * k1);
    const State k3 = rhs(sd, pm[0], pm[1], dir, Y + 0.5 * h * k2);
    const State k4 = rhs(sd, p1[0], p1[1], dir, Y + h * k3);
    Y += h / 6.0 * (k1 + 2 * k2 + 2 * k3 + k4);
  }
  return Y;
}

// States at every target coordinate, marching outward from `start` in both directions.
std::vector<State> sweep(const StructureData& sd, const State& Y0, int dir, double fixed, double start,
                         const std::vector<double>& targets, double step) {
  std::vector<State> out(targets.size());
  const int n = static_cast<int>(targets.size());
  int first_up = 0;
  while (first_up < n && targets[first_up] < start) ++first_up;
  State Y = Y0;
  double at = start;
  for (int k = first_up; k < n; ++k) {
    Y = segment(sd, Y, dir, fixed, at, targets[k], step);
    at = targets[k];
    out[k] = Y;
  }
  Y = Y0;
  at = start;
  for (int k = first_up - 1; k >= 0; --k) {
    Y = segment(sd, Y, dir, fixed, at, targets[k], step);
    at = targets[k];
    out[k] = Y;
  }
  return out;
}

}  // namespace

Reconstruction integrate_system(const StructureData& sd, const Grid& grid, double step) {
  if (!(step > 0)) fail(ErrorKind::InputError, "integration step must be positive");
  const int nx = grid.nx, ny = grid.ny;
  std::vector<double> us(nx), vs(ny);
  for (int i = 0; i < nx; ++i) us[i] = grid.u1(i);
  for (int j = 0; j < ny; ++j) vs[j] = grid.u2(j);
  const double q1 = sd.basepoint[0], q2 = sd.basepoint[1];
  State Yq;
  Yq.leftCols<3>() = sd.W0;
  Yq.col(3) = sd.p;

  std::vector<State> A(grid.size()), B(grid.size());
  const State left = segment(sd, Yq, 0, q2, q1, grid.domain.a1, step);
  const std::vector<State> spineA = sweep(sd, left, 1, grid.domain.a1, q2, vs, step);
  parallel_for(ny, [&](std::size_t j) {
    const auto row = sweep(sd, spineA[j], 0, vs[j], grid.domain.a1, us, step);
    for (int i = 0; i < nx; ++i) A[j * nx + i] = row[i];
  });
  const State bottom = segment(sd, Yq, 1, q1, q2, grid.domain.a2, step);
  const std::vector<State> spineB = sweep(sd, bottom, 0, grid.domain.a2, q1, us, step);
  parallel_for(nx, [&](std::size_t i) {
    const auto col = sweep(sd, spineB[i], 1, us[i], grid.domain.a2, vs, step);
    for (int j = 0; j < ny; ++j) B[j * nx + i] = col[j];
  });

  Reconstruction r;
  r.grid = grid;
  r.W.resize(grid.size());
  r.x.resize(grid.size());
  const double det0 = sd.W0.determinant();
  r.min_abs_det = std::numeric_limits<double>::infinity();
  for (int k = 0; k < grid.size(); ++k) {
    r.W[k] = A[k].leftCols<3>();
    r.x[k] = A[k].col(3);
    r.frame_discrepancy =
        std::max(r.frame_discrepancy, (A[k].leftCols<3>() - B[k].leftCols<3>()).cwiseAbs().maxCoeff());
    r.position_discrepancy = std::max(r.position_discrepancy, (A[k].col(3) - B[k].col(3)).norm());
    const double d = r.W[k].determinant();
    r.min_abs_det = std::min(r.min_abs_det, std::abs(d));
    if (!(d * det0 > 0)) r.det_sign_stable = false;
  }
  auto per_cell = [&](double width, int n) {
    return n > 1 ? static_cast<int>(std::ceil(width / (n - 1) / step - 1e-9)) : 0;
  };
  r.steps_per_cell_u1 = per_cell(grid.domain.b1 - grid.domain.a1, nx);
  r.steps_per_cell_u2 = per_cell(grid.domain.b2 - grid.domain.a2, ny);
  return r;
}

namespace {

std::string at_text(const std::array<double, 2>& w) {
  return "(" + std::to_string(w[0]) + ", " + std::to_string(w[1]) + ")";
}

}  // namespace

Reconstruction integrate_frame(const StructureData& sd, const Grid& grid, double step, const Tolerances& tol) {
  const ResidualReport c = compat_residual(sd, grid, tol);
  const double bound = tol.tol_compat * std::max(1.0, c.scale);
  if (c.regular > bound)
    fail(ErrorKind::CompatibilityViolated,
         "compatibility residual " + std::to_string(c.regular) + " at " + at_text(c.where));
  Reconstruction r = integrate_system(sd, grid, step);
  if (r.frame_discrepancy > tol.tol_path)
    fail(ErrorKind::CompatibilityViolated, "frame path discrepancy " + std::to_string(r.frame_discrepancy));
  if (!r.det_sign_stable || r.min_abs_det <= tol.eps_rank * std::abs(sd.W0.determinant()))
    fail(ErrorKind::FrameDegenerate, "det W degenerates (min |det| " + std::to_string(r.min_abs_det) + ")");
  return r;
}

Reconstruction integrate_position(const StructureData& sd, const Grid& grid, double step,
                                  const Tolerances& tol) {
  const IntegrabilityReport ir = integrability_residual(sd, grid, tol);
  for (const ResidualReport* rr : {&ir.sym, &ir.row})
    if (rr->regular > tol.tol_compat * std::max(1.0, rr->scale))
      fail(ErrorKind::IntegrabilityViolated,
           "integrability residual " + std::to_string(rr->regular) + " at " + at_text(rr->where));
  Reconstruction r = integrate_frame(sd, grid, step, tol);
  if (r.position_discrepancy > tol.tol_path)
    fail(ErrorKind::IntegrabilityViolated, "position path discrepancy " + std::to_string(r.position_discrepancy));
  return r;
}

Alignment affine_align(const std::vector<Eigen::Vector3d>& x, const std::vector<Eigen::Vector3d>& y) {
  if (x.size() != y.size() || x.size() < 4) fail(ErrorKind::InputError, "alignment needs matching point sets");
  const int n = static_cast<int>(x.size());
  Eigen::MatrixXd A(n, 4), Y(n, 3);
  Eigen::Vector3d mean = Eigen::Vector3d::Zero();
  for (const auto& p : x) mean += p;
  mean /= n;
  Eigen::MatrixXd C(n, 3);
  for (int k = 0; k < n; ++k) {
    A.row(k) << x[k].transpose(), 1.0;
    Y.row(k) = y[k].transpose();
    C.row(k) = (x[k] - mean).transpose();
  }
  const Eigen::JacobiSVD<Eigen::MatrixXd> svd(C);
  const auto s = svd.singularValues();
  if (!(s(2) > 1e-9 * s(0))) fail(ErrorKind::RankDeficient, "reconstructed points are coplanar");
  const Eigen::MatrixXd M = A.colPivHouseholderQr().solve(Y);
  Alignment al;
  al.L = M.topRows<3>().transpose();
  al.a = M.row(3).transpose();
  for (int k = 0; k < n; ++k) al.sup_error = std::max(al.sup_error, (al.L * x[k] + al.a - y[k]).norm());
  return al;
}

std::vector<Eigen::Vector3d> sample_surface(const Frontal& f, const Grid& grid) {
  std::vector<Eigen::Vector3d> out(grid.size());
  parallel_for(grid.size(), [&](std::size_t k) {
    const Vec3 x = f.at(grid.u1(static_cast<int>(k) % grid.nx), grid.u2(static_cast<int>(k) / grid.nx), 0).x.value();
    out[k] = Eigen::Vector3d(x[0], x[1], x[2]);
  });
  return out;
}

}  // namespace frontal
