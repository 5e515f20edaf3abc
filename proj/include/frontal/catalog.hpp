#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "frontal/frame.hpp"

namespace frontal {

// Closed forms printed alongside an example. Empty strings mean "not given".
struct KnownAnswers {
  std::string lambda;
  std::string K;
  std::array<std::string, 3> xi;        // printed Blaschke field
  std::array<std::string, 3> xi_exact;  // analytic Blaschke field when it differs from the printed one
  std::string note;
};

struct CatalogEntry {
  std::string name;
  std::string description;
  Domain domain;
  Domain blaschke_domain;     // where K stays away from zero
  Domain reconstruct_domain;  // where grid-backed structure data resolve the field
  std::array<std::string, 3> x, w1, w2;
  std::optional<std::array<std::string, 4>> Lambda;
  KnownAnswers known;

  // Parses the expressions and checks the decomposition at a few points.
  Frontal frontal(const Tolerances& tol = {}) const;
};

const std::vector<CatalogEntry>& catalog();
// Throws InputError for unknown names.
const CatalogEntry& find_entry(const std::string& name);

// Generators. Each returns a frontal whose x is assembled from quadratures.

// x = (u1, -h_{u2}, int_0^{u1} (h_{u1} - u2 h_{u2u1})(t, u2) dt - int_0^{u2} t h_{u2u2}(0, t) dt),
// Omega = ((1, 0, h_{u1}), (0, 1, u2)). When c is given, h_{u1u1} + c h_{u2u2} = 0 is checked.
Frontal gen_rank1_wavefront(const std::string& h, const std::string& c, const Domain& domain,
                            const Tolerances& tol = {});

// x = (u1, b, y3) with y3_{u2} = b_{u2} (G + L), G = int_0^{u2} h b_{u2} dt, L = int_0^{u1} l,
// and y3(u1, 0) assembled from l and r (functions of u1).
Frontal gen_extendable(const std::string& b, const std::string& h, const std::string& l,
                       const std::string& r, const Domain& domain, const Tolerances& tol = {});

// x = (a, b, y3) with Omega = ((1, 0, u1), (0, 1, u2)), Lambda = (a_{u1} b_{u1}; a_{u2} b_{u2});
// requires a_{u2} = b_{u1}.
Frontal gen_nonparabolic(const std::string& a, const std::string& b, const Domain& domain,
                         const Tolerances& tol = {});

}  // namespace frontal
