#pragma once

#include <json.hpp>
#include <string>
#include <vector>

#include "frontal/reconstruct.hpp"

namespace frontal {

using Json = nlohmann::json;

inline constexpr const char* kReportSchema = "frontal-lab/report/v1";
inline constexpr const char* kStructureSchema = "frontal-lab/structure/v1";
inline constexpr const char* kFrontalSchema = "frontal-lab/frontal/v1";

// StructureFile:
//   {schema, domain: [a1, b1, a2, b2], basepoint: [q1, q2], W0: 3x3 rows, p: [3],
//    entries: {Lambda, I_Omega, h, D1, D2, S, phi, tau}}
// Each entry is {"expr": [...]} or {"grid": {nx, ny, values}}, values indexed
// ((j * nx + i) * size + c). All entries of a file share one backing; omitted
// entries default to zero (phi to one). basepoint defaults to the domain
// centre, W0 to the identity, p to the origin.
StructureData structure_from_json(const Json& doc);
StructureData read_structure(const std::string& path);
Json structure_to_json(const SampledStructure& s, const StructureData& base);

// Frontal file: {schema, name, domain, x: [3], w1: [3], w2: [3], Lambda: [4] (optional)}.
Frontal frontal_from_json(const Json& doc, const Tolerances& tol = {});

Json read_json(const std::string& path);
// Pretty-printed with sorted keys and a trailing newline.
void write_json(const std::string& path, const Json& doc);

// Vertices row-major over the grid, one quad per cell.
void write_obj(const std::string& path, const Grid& grid, const std::vector<Eigen::Vector3d>& x);
// Columns u1,u2,x,y,z,xi1,xi2,xi3.
void write_field_csv(const std::string& path, const Grid& grid, const std::vector<Eigen::Vector3d>& x,
                     const std::vector<Vec3>& xi);

// {"value", "tol", "pass"} with pass = value <= tol.
Json judged(double value, double tol);
// Report skeleton: schema, command, tolerances.
Json report_header(const std::string& command, const Tolerances& tol);

Json to_json(const Domain& d);
Domain domain_from_json(const Json& j);

}  // namespace frontal
