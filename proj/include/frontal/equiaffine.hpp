#pragma once

#include <array>
#include <functional>
#include <string>

#include "frontal/frame.hpp"

namespace frontal {

using FieldFn = std::function<JetVec3(double, double, int)>;

// Coefficients of xi = phi n + at w1 + bt w2.
struct FieldSplit {
  Jet phi, at, bt;
};
using SplitFn = std::function<FieldSplit(double, double, int)>;

struct TransversalField {
  std::string name;
  FieldFn xi;
  SplitFn split;  // optional; empty when only components are known
};

TransversalField constant_field(const Vec3& v);
// xi = scale * n for the given frontal.
TransversalField normal_field(const Frontal& f, double scale = 1.0, const Tolerances& tol = {});
// Pointwise product rho * xi with rho given as expression text.
TransversalField rescaled_field(const TransversalField& xi, const std::string& rho);
TransversalField expression_field(const std::array<std::string, 3>& components);

FieldSplit split_field(const FrameJets& F, const JetVec3& xi);

// Symbols of xi in the basis (w1, w2, xi):
//   (w_i)_{u_j} = D_j[i][0] w1 + D_j[i][1] w2 + h[i][j] xi
//   xi_{u_i}   = -S[i][0] w1 - S[i][1] w2 + tau[i] xi
struct EquiaffineStructure {
  Mat2J h, D1, D2, S;
  std::array<Jet, 2> tau;
  Jet theta;  // det(w1 w2 xi)
  double residual_w = 0, residual_xi = 0;
};

// Symbols carry `order`; the frontal and the field are evaluated at order + 1.
EquiaffineStructure structure_from_field(const Frontal& f, const TransversalField& xi, double u1,
                                         double u2, int order = 0, const Tolerances& tol = {});
EquiaffineStructure structure_from_jets(const FrontalJets& fj, const JetVec3& xi,
                                        const Tolerances& tol = {});

struct GridMax {
  double value = 0;
  int points = 0;  // points that entered the maximum
  std::array<double, 2> where{};
};

// max |tau_i| over grid nodes; nodes with |lambda| <= skip_band are skipped
// (pass a negative band to include every node).
GridMax max_tau(const Frontal& f, const TransversalField& xi, const Grid& grid,
                double skip_band = -1, const Tolerances& tol = {});
bool is_equiaffine(const Frontal& f, const TransversalField& xi, const Grid& grid, double tol_tau,
                   GridMax* report = nullptr, const Tolerances& tol = {});

struct TauFormulaResidual {
  double h = 0;    // max |h_ij - p_ij / phi|
  double tau = 0;  // max |tau_i - (at p_1i + bt p_2i + phi_{u_i}) / phi|
};

// Uses xi.split when present, otherwise the split computed from xi itself.
TauFormulaResidual check_tau_formula(const Frontal& f, const TransversalField& xi, double u1, double u2,
                                     const Tolerances& tol = {});

// Residual of d_k theta - (D^1_{1k} + D^2_{2k} + tau_k) theta at one regular point.
double parallel_volume_residual(const Frontal& f, const TransversalField& xi, double u1, double u2,
                                const Tolerances& tol = {});
GridMax parallel_volume_check(const Frontal& f, const TransversalField& xi, const Grid& grid,
                              const Tolerances& tol = {});

struct ClassicalSymbols {
  Mat2J Gamma1, Gamma2;    // Gamma_j[i][k] = Gamma^k_{ij}
  Mat2J Gammat1, Gammat2;  // induced connection of xi in the x_u basis
  Mat2J c;                 // II / phi
  Mat2J b;                 // S Lambda^{-1}
  Jet phi, a, b_coef;      // xi = phi n + a x_{u1} + b x_{u2}
  std::array<Jet, 2> tau;
};

// Regular points only: throws SingularPoint when |lambda| <= sing_band.
// Every symbol carries first derivatives.
ClassicalSymbols classical_symbols(const Frontal& f, const TransversalField& xi, double u1, double u2,
                                   const Tolerances& tol = {});
// D_j = Lambda^{-1} (Gammat_j Lambda - Lambda_{u_j}).
std::array<Mat2J, 2> D_from_gamma(const Frontal& f, const TransversalField& xi, double u1, double u2,
                                  const Tolerances& tol = {});

}  // namespace frontal
