#pragma once

#include <Eigen/Dense>
#include <array>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "frontal/equiaffine.hpp"

namespace frontal {

// Structure symbols at one point. The frame W = (w1 w2 xi) obeys
// W_{u_j} = W Dj^T with the 3x3 block Dj = [[D_j, h_{.j}], [-S_j, tau_j]],
// and the position obeys x_{u_j} = Lambda[j][0] w1 + Lambda[j][1] w2.
struct StructureJets {
  Mat2J Lambda, I_Omega, h, D1, D2, S;
  Jet phi;
  std::array<Jet, 2> tau;
};

// Channel layout used by files and grids.
constexpr int kChannels = 27;
struct ChannelGroup {
  const char* name;
  int offset, size;
};
const std::vector<ChannelGroup>& channel_groups();  // Lambda I_Omega h D1 D2 S phi tau
std::vector<Jet> to_channels(const StructureJets& s);
StructureJets from_channels(const std::vector<Jet>& c);

using StructureFn = std::function<StructureJets(double, double, int)>;

struct StructureData {
  std::string backing;  // "expr", "grid" or "field"
  Domain domain;
  std::array<double, 2> basepoint{};
  Eigen::Matrix3d W0 = Eigen::Matrix3d::Identity();
  Eigen::Vector3d p = Eigen::Vector3d::Zero();
  StructureFn eval;  // orders 0 and 1

  StructureJets at(double u1, double u2, int order) const { return eval(u1, u2, order); }
};

// Expression text per group (row-major matrices); missing groups default to
// zero, except tau which defaults to zero and phi to one.
StructureFn structure_expressions(const std::map<std::string, std::vector<std::string>>& entries);

// Samples on a grid, values[k][c] for node k = j * nx + i and channel c.
struct SampledStructure {
  Grid grid;
  std::vector<std::array<double, kChannels>> values;
};
// Hermite bicubic interpolation with sixth-order difference node slopes.
StructureFn structure_interpolated(const SampledStructure& s);

// Exact symbols of (f, xi) through jets.
StructureFn structure_of_field(const Frontal& f, const TransversalField& xi, const Tolerances& tol = {});

// Samples (f, xi) on the grid. Nodes inside the singular band get their
// symbols from the limit probe; Lambda and I_Omega are always direct.
SampledStructure sample_structure(const Frontal& f, const TransversalField& xi, const Grid& grid,
                                  const Tolerances& tol = {});

// Grid- or field-backed data with W0 = (w1 w2 xi)(q), p = x(q) and q the domain centre.
// The node samples are copied to `samples` when given.
StructureData extract_structure(const Frontal& f, const TransversalField& xi, const Grid& grid,
                                const Tolerances& tol = {}, SampledStructure* samples = nullptr);
StructureData extract_field(const Frontal& f, const TransversalField& xi, const Domain& domain,
                            const Tolerances& tol = {});

using Mat3 = Eigen::Matrix3d;

Mat3 block(const StructureJets& s, int j);  // values of Dj

struct ResidualReport {
  double regular = 0;   // max over regular nodes
  double singular = 0;  // max over nodes in the singular band (reported, not gated)
  double scale = 0;     // max |D| entry seen, for relative gating
  std::array<double, 2> where{};
};

// Frobenius norm of D1_{u2} - D2_{u1} + [D1, D2].
ResidualReport compat_residual(const StructureData& sd, const Grid& grid, const Tolerances& tol = {});

struct IntegrabilityReport {
  ResidualReport sym;  // |(Lambda h)_12 - (Lambda h)_21|
  ResidualReport row;  // row 2 of (Lambda D1 + Lambda_u1) minus row 1 of (Lambda D2 + Lambda_u2)
};
IntegrabilityReport integrability_residual(const StructureData& sd, const Grid& grid, const Tolerances& tol = {});

// Flatness of the classical blocks [[Gt_j, c_.j], [-b_j, tau_j]] on the regular part.
ResidualReport gamma_flatness_residual(const Frontal& f, const TransversalField& xi, const Grid& grid,
                                       const Tolerances& tol = {});

// d_k sqrt|det c| - tr(Gt_k) sqrt|det c| with c = Lambda h and
// Gt_k = (Lambda D_k + Lambda_{u_k}) Lambda^{-1}, regular nodes only.
ResidualReport apolarity_check(const StructureData& sd, const Grid& grid, const Tolerances& tol = {});

struct Reconstruction {
  Grid grid;
  std::vector<Mat3> W;              // path A, node k = j * nx + i
  std::vector<Eigen::Vector3d> x;   // path A
  double frame_discrepancy = 0;     // max |W_A - W_B| over nodes
  double position_discrepancy = 0;  // max |x_A - x_B| over nodes
  double min_abs_det = 0;
  bool det_sign_stable = true;
  int steps_per_cell_u1 = 0, steps_per_cell_u2 = 0;
};

// Joint RK4 for (W, x). Path A: from q along u1 to the left edge, the u2
// spine there, then rows. Path B: along u2 to the bottom edge, the u1 spine,
// then columns. No gating.
Reconstruction integrate_system(const StructureData& sd, const Grid& grid, double step);

// Gated runs. integrate_frame throws CompatibilityViolated (residual or frame
// path discrepancy) and FrameDegenerate; integrate_position additionally
// throws IntegrabilityViolated.
Reconstruction integrate_frame(const StructureData& sd, const Grid& grid, double step,
                               const Tolerances& tol = {});
Reconstruction integrate_position(const StructureData& sd, const Grid& grid, double step,
                                  const Tolerances& tol = {});

struct Alignment {
  Mat3 L = Mat3::Identity();
  Eigen::Vector3d a = Eigen::Vector3d::Zero();
  double sup_error = 0;
};

// Least squares y ~ L x + a; throws RankDeficient when the x points are coplanar.
Alignment affine_align(const std::vector<Eigen::Vector3d>& x, const std::vector<Eigen::Vector3d>& y);

// Samples of f.x on the grid.
std::vector<Eigen::Vector3d> sample_surface(const Frontal& f, const Grid& grid);

}  // namespace frontal
