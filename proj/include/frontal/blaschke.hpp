#pragma once

#include <functional>
#include <string>
#include <vector>

#include "frontal/equiaffine.hpp"

namespace frontal {

// Numerical limit certificate: Richardson-extrapolated values along rays
// q + r_k d with r_k = r0 * ratio^k. Per direction and component the
// extrapolants are followed while consecutive ones keep getting closer, since
// round-off grows as r shrinks.
// Agreement is a certificate, not a proof.
struct ProbeConfig {
  int directions = 8;
  double r0 = 4e-2;
  double ratio = 0.5;
  int levels = 9;
  double tol_limit = 1e-4;
};

ProbeConfig probe_config(const Tolerances& tol);

enum class ProbeVerdict { Extendable, NotExtendable, Indeterminate };
const char* to_string(ProbeVerdict v);

struct ProbeResult {
  ProbeVerdict verdict = ProbeVerdict::Indeterminate;
  std::vector<double> limit;  // direction average
  double spread = 0;          // max relative disagreement across directions
  double cauchy = 0;          // max relative change within the selected extrapolant pair
  int used_directions = 0;
};

using VectorFn = std::function<std::vector<double>(double, double)>;

// Directions whose probe points throw are skipped.
ProbeResult limit_probe(const VectorFn& f, double u1, double u2, const ProbeConfig& cfg = {});

struct GaussExtension {
  double K = 0;
  bool singular = false;
  ProbeResult probe;
};

// K_Omega / lambda at regular points, its probed limit inside the band |lambda| <= sing_band.
GaussExtension gauss_extension(const Frontal& f, double u1, double u2, const Tolerances& tol = {});

struct BlaschkePoint {
  bool singular = false;
  double K = 0;
  Jet phi, a, b;  // xi = phi n + a w1 + b w2
  JetVec3 xi;
  ProbeResult probe;
};

// xi and its split to `order` (the frontal is evaluated at order + 2).
// sign = +1/-1 fixes the sign of K; 0 reads it at the point.
BlaschkePoint blaschke_at(const Frontal& f, double u1, double u2, int order = 1,
                          const Tolerances& tol = {}, int sign = 0);

// The Blaschke field as a transversal field, usable by the equiaffine checks.
TransversalField blaschke_transversal(const Frontal& f, const Tolerances& tol = {}, int sign = 0);

struct BlaschkeVerify {
  double max_tau = 0;
  double max_volume = 0;  // | sqrt|lambda| |theta| / sqrt|det h| - 1 |
  int points = 0;         // regular nodes checked
};

double volume_residual(const Frontal& f, const TransversalField& xi, double u1, double u2,
                       const Tolerances& tol = {});
BlaschkeVerify blaschke_verify(const Frontal& f, const TransversalField& xi, const Grid& grid,
                               const Tolerances& tol = {});

struct BlaschkeField {
  Grid grid;
  int sign = 1;  // sign of K on the grid
  std::vector<double> K, phi, a, b;
  std::vector<Vec3> xi;
  std::vector<char> singular;
  int probed = 0;
  double worst_spread = 0;
  bool improper_sphere = false;  // xi constant to 1e-6
  BlaschkeVerify verify;
};

// Throws KVanishes when |K| <= eps_K somewhere or K changes sign on the grid,
// NotExtendable/Indeterminate when a singular node fails its probe.
BlaschkeField blaschke_field(const Frontal& f, const Grid& grid, const Tolerances& tol = {});

// Data entering the extension criteria: Lambda, I_Omega and the classical
// first fundamental form (E F; F G), which for genuine frontals equals
// Lambda I_Omega Lambda^T but may be supplied independently.
struct ExtensionData {
  Mat2J Lambda, I_Omega, I;
};
using ExtensionFn = std::function<ExtensionData(double, double, int)>;

ExtensionFn extension_inputs(const Frontal& f);
// Lambda and I_Omega entries row-major; I as (E, F, G), empty to derive it.
ExtensionFn extension_from_expressions(const std::array<std::string, 4>& lambda,
                                       const std::array<std::string, 4>& i_omega,
                                       const std::vector<std::string>& classical_i = {});

// G_1 = L1_{u1} I_Omega L2^T - L1 I_Omega L2_{u1}^T + E_{u2} - F_{u1}
// G_2 = L1_{u2} I_Omega L2^T - L1 I_Omega L2_{u2}^T + F_{u2} - G_{u1}
// with L1, L2 the rows of Lambda; which = 1 or 2.
Jet extension_G(const ExtensionData& d, int which);

struct ExtensionVerdict {
  ProbeVerdict verdict = ProbeVerdict::Indeterminate;
  double omega = 0;  // limit of G / lambda
  bool singular = false;
  ProbeResult probe;
};

ExtensionVerdict extension_condition(const ExtensionFn& data, int which, double u1, double u2,
                                     const Tolerances& tol = {});

struct TangentSplit {
  Mat2 h{};
  double at = 0, bt = 0;
};
using TangentSplitFn = std::function<TangentSplit(double, double)>;

TangentSplitFn tangent_split(const Frontal& f, const TransversalField& xi, const Tolerances& tol = {});

struct ExtendedD {
  Mat2 D{};
  double omega = 0;
  ExtensionVerdict verdict;
};

// D_j = 1/2 (I_{Omega,u_j} - 2 H_j I_Omega + [[0, -omega_j], [omega_j, 0]]) I_Omega^{-1},
// H_j rows (at h_{ij}, bt h_{ij}); throws ConditionFailed when omega_j does not extend.
ExtendedD extend_D(const ExtensionFn& data, const TangentSplitFn& split, int which, double u1,
                   double u2, const Tolerances& tol = {});

struct Rank1Options {
  bool allow_limit = false;
  double eps = 1e-12;
};

// Closed-form Blaschke field of the rank-1 wave-front class for h, c.
Vec3 rank1_closed_form(const std::string& h, const std::string& c, double u1, double u2,
                       const Rank1Options& opt = {}, const Tolerances& tol = {});

// nu = n / <n, xi>, carrying the order of xi.
JetVec3 conormal(const Frontal& f, const TransversalField& xi, double u1, double u2, int order = 1,
                 const Tolerances& tol = {});

struct ConormalReport {
  double dual = 0;       // |<nu, xi> - 1|
  double tangent = 0;    // |<nu, w_i>|
  double dxi = 0;        // |<nu_{u_i}, xi>|
  double dh = 0;         // |<nu_{u_i}, w_j> + h_{ji}|
  bool immersion = true; // rank D nu = 2 wherever |K_Omega| > eps_K
  double min_sigma2 = 0; // min of sigma2 - eps_rank max(1, sigma1) over those points
  int points = 0;
  int nonparabolic_points = 0;
};

ConormalReport conormal_verify(const Frontal& f, const TransversalField& xi, const Grid& grid,
                               const Tolerances& tol = {});

}  // namespace frontal
