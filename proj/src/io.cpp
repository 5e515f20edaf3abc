#include "frontal/io.hpp"

#include <cmath>
#include <fstream>
#include <iomanip>
#include <sstream>

namespace frontal {

namespace {

[[noreturn]] void bad(const std::string& what) { fail(ErrorKind::InputError, what); }

double number(const Json& j, const std::string& what) {
  if (!j.is_number()) bad(what + " must be a number");
  const double v = j.get<double>();
  if (!std::isfinite(v)) bad(what + " must be finite");
  return v;
}

std::vector<double> numbers(const Json& j, std::size_t n, const std::string& what) {
  if (!j.is_array() || j.size() != n) bad(what + " must be an array of " + std::to_string(n) + " numbers");
  std::vector<double> out;
  for (const auto& v : j) out.push_back(number(v, what));
  return out;
}

template <std::size_t N>
std::array<std::string, N> strings(const Json& j, const std::string& what) {
  if (!j.is_array() || j.size() != N) bad(what + " must be an array of " + std::to_string(N) + " strings");
  std::array<std::string, N> out;
  for (std::size_t k = 0; k < N; ++k) {
    if (!j[k].is_string()) bad(what + " must contain strings");
    out[k] = j[k].get<std::string>();
  }
  return out;
}

const ChannelGroup& group(const std::string& name) {
  for (const auto& g : channel_groups())
    if (name == g.name) return g;
  bad("unknown structure entry '" + name + "'");
}

}  // namespace

Json to_json(const Domain& d) { return Json::array({d.a1, d.b1, d.a2, d.b2}); }

Domain domain_from_json(const Json& j) {
  const auto v = numbers(j, 4, "domain");
  const Domain d{v[0], v[1], v[2], v[3]};
  if (!(d.a1 < d.b1 && d.a2 < d.b2)) bad("domain must satisfy a1 < b1 and a2 < b2");
  return d;
}

StructureData structure_from_json(const Json& doc) {
  if (!doc.is_object()) bad("structure file must be a JSON object");
  if (doc.contains("schema") && doc["schema"] != kStructureSchema)
    bad("unsupported structure schema " + doc["schema"].dump());
  if (!doc.contains("domain")) bad("structure file needs a domain");
  if (!doc.contains("entries") || !doc["entries"].is_object()) bad("structure file needs an entries object");

  StructureData sd;
  sd.domain = domain_from_json(doc["domain"]);
  sd.basepoint = {0.5 * (sd.domain.a1 + sd.domain.b1), 0.5 * (sd.domain.a2 + sd.domain.b2)};
  if (doc.contains("basepoint")) {
    const auto q = numbers(doc["basepoint"], 2, "basepoint");
    sd.basepoint = {q[0], q[1]};
    if (!sd.domain.contains(q[0], q[1])) bad("basepoint lies outside the domain");
  }
  if (doc.contains("W0")) {
    const Json& w = doc["W0"];
    if (!w.is_array() || w.size() != 3) bad("W0 must be 3 rows of 3 numbers");
    for (int r = 0; r < 3; ++r) {
      const auto row = numbers(w[r], 3, "W0 row");
      for (int c = 0; c < 3; ++c) sd.W0(r, c) = row[c];
    }
  }
  if (doc.contains("p")) {
    const auto p = numbers(doc["p"], 3, "p");
    sd.p = Eigen::Vector3d(p[0], p[1], p[2]);
  }

  std::string backing;
  for (const auto& [name, e] : doc["entries"].items()) {
    if (!e.is_object() || e.size() != 1 || !(e.contains("expr") || e.contains("grid")))
      bad("entry '" + name + "' must be {\"expr\": [...]} or {\"grid\": {...}}");
    const std::string kind = e.contains("expr") ? "expr" : "grid";
    if (!backing.empty() && kind != backing) bad("all entries must share one backing");
    backing = kind;
  }
  if (backing.empty()) bad("structure file has no entries");
  sd.backing = backing;

  if (backing == "expr") {
    std::map<std::string, std::vector<std::string>> m;
    for (const auto& [name, e] : doc["entries"].items()) {
      const Json& list = e["expr"];
      if (!list.is_array()) bad("entry '" + name + "' expr must be an array");
      std::vector<std::string> texts;
      for (const auto& t : list) {
        if (!t.is_string()) bad("entry '" + name + "' expr must contain strings");
        texts.push_back(t.get<std::string>());
      }
      m[name] = texts;
    }
    sd.eval = structure_expressions(m);
    return sd;
  }

  SampledStructure s;
  s.grid.domain = sd.domain;
  s.grid.nx = s.grid.ny = 0;
  for (const auto& [name, e] : doc["entries"].items()) {
    const Json& g = e["grid"];
    if (!g.is_object() || !g.contains("nx") || !g.contains("ny") || !g.contains("values"))
      bad("entry '" + name + "' grid needs nx, ny and values");
    if (!g["nx"].is_number_integer() || !g["ny"].is_number_integer()) bad("nx and ny must be integers");
    const int nx = g["nx"].get<int>(), ny = g["ny"].get<int>();
    if (nx < 2 || ny < 2) bad("grid entries need at least 2 nodes per direction");
    if (s.grid.nx == 0) {
      s.grid.nx = nx;
      s.grid.ny = ny;
      s.values.assign(static_cast<std::size_t>(nx) * ny, {});
      for (auto& v : s.values) v[24] = 1.0;
    } else if (nx != s.grid.nx || ny != s.grid.ny) {
      bad("all grid entries must share nx and ny");
    }
    const ChannelGroup& cg = group(name);
    const auto vals = numbers(g["values"], static_cast<std::size_t>(nx) * ny * cg.size, "entry '" + name + "' values");
    for (int k = 0; k < nx * ny; ++k)
      for (int c = 0; c < cg.size; ++c) s.values[k][cg.offset + c] = vals[static_cast<std::size_t>(k) * cg.size + c];
  }
  sd.eval = structure_interpolated(s);
  return sd;
}

Json read_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) bad("cannot open " + path);
  try {
    return Json::parse(in);
  } catch (const Json::exception& e) {
    bad(path + ": " + e.what());
  }
}

StructureData read_structure(const std::string& path) { return structure_from_json(read_json(path)); }

Json structure_to_json(const SampledStructure& s, const StructureData& base) {
  Json doc;
  doc["schema"] = kStructureSchema;
  doc["domain"] = to_json(s.grid.domain);
  doc["basepoint"] = {base.basepoint[0], base.basepoint[1]};
  Json W = Json::array();
  for (int r = 0; r < 3; ++r) W.push_back({base.W0(r, 0), base.W0(r, 1), base.W0(r, 2)});
  doc["W0"] = W;
  doc["p"] = {base.p(0), base.p(1), base.p(2)};
  Json entries = Json::object();
  for (const auto& g : channel_groups()) {
    Json vals = Json::array();
    for (const auto& node : s.values)
      for (int c = 0; c < g.size; ++c) vals.push_back(node[g.offset + c]);
    entries[g.name] = {{"grid", {{"nx", s.grid.nx}, {"ny", s.grid.ny}, {"values", vals}}}};
  }
  doc["entries"] = entries;
  return doc;
}

Frontal frontal_from_json(const Json& doc, const Tolerances& tol) {
  if (!doc.is_object()) bad("frontal file must be a JSON object");
  if (doc.contains("schema") && doc["schema"] != kFrontalSchema) bad("unsupported frontal schema " + doc["schema"].dump());
  for (const char* k : {"x", "w1", "w2"})
    if (!doc.contains(k)) bad(std::string("frontal file needs ") + k);
  const Domain d = doc.contains("domain") ? domain_from_json(doc["domain"]) : Domain{};
  std::optional<std::array<std::string, 4>> lambda;
  if (doc.contains("Lambda")) lambda = strings<4>(doc["Lambda"], "Lambda");
  const std::string name = doc.contains("name") && doc["name"].is_string() ? doc["name"].get<std::string>() : "input";
  return frontal_from_expressions(name, strings<3>(doc["x"], "x"), strings<3>(doc["w1"], "w1"),
                                  strings<3>(doc["w2"], "w2"), lambda, d, "file", tol);
}

void write_json(const std::string& path, const Json& doc) {
  std::ofstream out(path);
  if (!out) bad("cannot write " + path);
  out << doc.dump(2) << "\n";
}

void write_obj(const std::string& path, const Grid& grid, const std::vector<Eigen::Vector3d>& x) {
  std::ofstream out(path);
  if (!out) bad("cannot write " + path);
  out << std::setprecision(12);
  for (const auto& p : x) out << "v " << p(0) << " " << p(1) << " " << p(2) << "\n";
  for (int j = 0; j + 1 < grid.ny; ++j)
    for (int i = 0; i + 1 < grid.nx; ++i) {
      const int a = j * grid.nx + i + 1;  // OBJ indices start at 1
      out << "f " << a << " " << a + 1 << " " << a + 1 + grid.nx << " " << a + grid.nx << "\n";
    }
}

void write_field_csv(const std::string& path, const Grid& grid, const std::vector<Eigen::Vector3d>& x,
                     const std::vector<Vec3>& xi) {
  std::ofstream out(path);
  if (!out) bad("cannot write " + path);
  out << std::setprecision(12) << "u1,u2,x,y,z,xi1,xi2,xi3\n";
  for (int k = 0; k < grid.size(); ++k)
    out << grid.u1(k % grid.nx) << "," << grid.u2(k / grid.nx) << "," << x[k](0) << "," << x[k](1) << ","
        << x[k](2) << "," << xi[k][0] << "," << xi[k][1] << "," << xi[k][2] << "\n";
}

Json judged(double value, double tol) { return {{"value", value}, {"tol", tol}, {"pass", value <= tol}}; }

Json report_header(const std::string& command, const Tolerances& tol) {
  Json doc;
  doc["schema"] = kReportSchema;
  doc["command"] = command;
  Json t = Json::object();
  for (const auto& [k, v] : describe(tol)) t[k] = v;
  doc["tolerances"] = t;
  return doc;
}

}  // namespace frontal
