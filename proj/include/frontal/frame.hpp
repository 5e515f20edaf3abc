#pragma once

#include <Eigen/Dense>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "frontal/config.hpp"
#include "frontal/jet.hpp"
#include "frontal/types.hpp"

namespace frontal {

// Jets of a frontal at one point: x, the moving basis Omega = (w1 w2) and the
// factor Lambda with Dx = Omega Lambda^T, i.e. x_{u_j} = sum_k Lambda[j][k] w_k.
struct FrontalJets {
  JetVec3 x, w1, w2;
  Mat2J Lambda;
};

using FrontalFn = std::function<FrontalJets(double, double, int)>;

struct Frontal {
  std::string name;
  std::string source = "user";
  Domain domain;
  FrontalFn eval;

  FrontalJets at(double u1, double u2, int order) const { return eval(u1, u2, order); }
};

// Builds a frontal from expression text. When lambda is empty it is factored
// from Dx at every evaluation (x is then evaluated one order higher).
Frontal frontal_from_expressions(const std::string& name, const std::array<std::string, 3>& x,
                                 const std::array<std::string, 3>& w1,
                                 const std::array<std::string, 3>& w2,
                                 const std::optional<std::array<std::string, 4>>& lambda,
                                 const Domain& domain, const std::string& source = "user",
                                 const Tolerances& tol = {});

// Phi o x for the affine map Phi(y) = A y + b.
Frontal affine_image(const Frontal& f, const Eigen::Matrix3d& A, const Eigen::Vector3d& b);
// Same surface with the two basis columns exchanged (n flips sign).
Frontal swap_basis(const Frontal& f);

JetVec3 apply(const Eigen::Matrix3d& A, const JetVec3& v);

// Lambda^T = (Omega^T Omega)^{-1} Omega^T Dx; x must carry one order more than w.
Mat2J factor_lambda(const JetVec3& x, const JetVec3& w1, const JetVec3& w2, const Tolerances& tol);
JetVec3 unit_normal(const JetVec3& w1, const JetVec3& w2, double eps_rank = 1e-9);
// max |x_{u_j} - sum_k Lambda[j][k] w_k| over all carried coefficients.
double decomposition_residual(const FrontalJets& fj);
// Throws DegenerateBasis when the smallest singular value of Omega is below
// eps_rank times the largest column norm.
void check_basis_rank(const JetVec3& w1, const JetVec3& w2, double eps_rank);

struct FrameJets {
  FrontalJets f;
  JetVec3 n;
  Mat2J I_Omega;   // Gram matrix of (w1, w2)
  Mat2J II_Omega;  // II_Omega[i][j] = <(w_i)_{u_j}, n>
  Mat2J II_alt;    // -<w_i, n_{u_j}>, independent route
  Mat2J T1, T2;    // (Omega_{u_j}^T Omega) I_Omega^{-1}
  Mat2J I, II;     // classical forms Lambda I_Omega Lambda^T and Lambda II_Omega
  Jet lambda;      // det Lambda
  Jet K_Omega;     // det II_Omega / det I_Omega
};

// w and Lambda at `order`; II_Omega, K_Omega, T_j carry order - 1.
FrameJets frame_jets(const Frontal& f, double u1, double u2, int order, const Tolerances& tol = {});

struct FrameData {
  Mat2 I_Omega, II_Omega, mu_Omega, T1, T2, I, II;
  Vec3 n;
  double lambda = 0, K_Omega = 0;
  bool regular = false;  // |lambda| > eps_sing; classical I, II are rank-deficient otherwise
  double K = 0;          // K_Omega / lambda, NaN at singular points
};

FrameData frame_data(const Frontal& f, double u1, double u2, const Tolerances& tol = {});

struct SingularScan {
  std::vector<std::array<int, 2>> cells;  // (i, j): cell [u1_i, u1_{i+1}] x [u2_j, u2_{j+1}]
  std::vector<std::array<int, 2>> nodes;  // grid nodes with |lambda| < eps_sing
  bool regular_dense = true;              // no cell with all corners singular
};

SingularScan singular_scan(const Frontal& f, const Grid& grid, const Tolerances& tol = {});

struct GridVerdict {
  bool holds = true;
  std::vector<std::array<double, 2>> witnesses;  // failing points, at most 16
  double worst = 0;                              // smallest margin seen
};

// (x, n) immersion test via the second singular value of the 6x2 Jacobian.
GridVerdict wavefront_test(const Frontal& f, const Grid& grid, const Tolerances& tol = {});
// |K_Omega| > eps_K at every grid point.
GridVerdict nonparabolic_test(const Frontal& f, const Grid& grid, const Tolerances& tol = {});

}  // namespace frontal
