#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "frontal/catalog.hpp"
#include "frontal/config.hpp"
#include "frontal/io.hpp"
#include "support.hpp"

using namespace frontal;
namespace fs = std::filesystem;

namespace {

ErrorKind kind_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("no error thrown");
  return ErrorKind::InputError;
}

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / "frontal-lab-tests";
  fs::create_directories(dir);
  return dir / name;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST_CASE("exit codes by error kind") {
  CHECK(exit_code(ErrorKind::SyntaxError) == 2);
  CHECK(exit_code(ErrorKind::InputError) == 2);
  CHECK(exit_code(ErrorKind::KVanishes) == 3);
  CHECK(exit_code(ErrorKind::NotTransversal) == 3);
  CHECK(exit_code(ErrorKind::CompatibilityViolated) == 4);
  CHECK(exit_code(ErrorKind::IntegrabilityViolated) == 4);
}

TEST_CASE("tolerance settings") {
  Tolerances t;
  apply_setting(t, "tol_compat", "2e-6");
  apply_setting(t, "jet_order", "\"4\"");
  CHECK(t.tol_compat == 2e-6);
  CHECK(t.jet_order == 4);
  CHECK(kind_of([&] { apply_setting(t, "nonsense", "1"); }) == ErrorKind::InputError);
  CHECK(kind_of([&] { apply_setting(t, "eps_rank", "abc"); }) == ErrorKind::InputError);
  CHECK(kind_of([&] { apply_setting(t, "jet_order", "9"); }) == ErrorKind::InputError);

  const fs::path p = scratch("tol.toml");
  std::ofstream(p) << "# tolerances\n[tolerances]\nrk4_step = 5e-4  # finer\ntol_limit = '1e-5'\n";
  const Tolerances u = load_config(p.string());
  CHECK(u.rk4_step == 5e-4);
  CHECK(u.tol_limit == 1e-5);
  std::ofstream(p) << "rk4_step 5e-4\n";
  CHECK(kind_of([&] { (void)load_config(p.string()); }) == ErrorKind::InputError);
}

TEST_CASE("catalog listing") {
  std::vector<std::string> names;
  for (const auto& e : catalog()) names.push_back(e.name);
  for (const char* want : {"ex-5.8", "ex-5.9", "ex-5.10", "paraboloid", "plane"})
    CHECK(std::find(names.begin(), names.end(), want) != names.end());
  CHECK(kind_of([] { (void)find_entry("ex-9.9"); }) == ErrorKind::InputError);
}

TEST_CASE("structure file with expression entries") {
  const Json doc = Json::parse(R"({
    "schema": "frontal-lab/structure/v1",
    "domain": [0, 1, 0, 2],
    "entries": {"Lambda": {"expr": ["1", "0", "0", "1"]}, "D1": {"expr": ["0", "u2", "0", "0"]}}
  })");
  const StructureData sd = structure_from_json(doc);
  CHECK(sd.backing == "expr");
  CHECK(sd.basepoint[0] == 0.5);
  CHECK(sd.basepoint[1] == 1.0);
  CHECK(sd.W0 == Eigen::Matrix3d::Identity());
  const StructureJets s = sd.at(0.2, 0.7, 1);
  CHECK(s.D1(0, 1).value() == doctest::Approx(0.7));
  CHECK(s.phi.value() == 1);
}

TEST_CASE("malformed structure files") {
  const char* bad[] = {
      R"([1, 2])",
      R"({"entries": {"Lambda": {"expr": ["1", "0", "0", "1"]}}})",
      R"({"domain": [1, 0, 0, 1], "entries": {"Lambda": {"expr": ["1", "0", "0", "1"]}}})",
      R"({"domain": [0, 1, 0, 1], "entries": {}})",
      R"({"domain": [0, 1, 0, 1], "entries": {"Omega": {"expr": ["1"]}}})",
      R"({"domain": [0, 1, 0, 1], "basepoint": [2, 0], "entries": {"Lambda": {"expr": ["1", "0", "0", "1"]}}})",
      R"({"domain": [0, 1, 0, 1], "entries": {"Lambda": {"expr": ["1", "0", "0", "1"]},
          "h": {"grid": {"nx": 2, "ny": 2, "values": [0, 0, 0, 0]}}}})",
      R"({"domain": [0, 1, 0, 1], "entries": {"phi": {"grid": {"nx": 2, "ny": 2, "values": [1, 1, 1]}}}})",
      R"({"schema": "other/v9", "domain": [0, 1, 0, 1], "entries": {"Lambda": {"expr": ["1", "0", "0", "1"]}}})",
  };
  for (const char* text : bad) {
    CAPTURE(text);
    CHECK(kind_of([&] { (void)structure_from_json(Json::parse(text)); }) == ErrorKind::InputError);
  }
  CHECK(kind_of([] { (void)read_json("/nonexistent/file.json"); }) == ErrorKind::InputError);
}

TEST_CASE("grid structure round trip through JSON") {
  const Frontal f = testing::entry("paraboloid");
  const Grid grid{Domain{-0.5, 0.5, -0.5, 0.5}, 9, 9};
  SampledStructure samples;
  const StructureData sd = extract_structure(f, constant_field({0, 0, 1}), grid, {}, &samples);
  const fs::path p = scratch("structure.json");
  write_json(p.string(), structure_to_json(samples, sd));
  const StructureData back = read_structure(p.string());
  CHECK(back.backing == "grid");
  CHECK((back.W0 - sd.W0).norm() < 1e-15);
  CHECK((back.p - sd.p).norm() < 1e-15);
  for (auto [u1, u2] : {std::pair{0.1, 0.2}, {-0.37, 0.41}}) {
    const auto a = to_channels(sd.at(u1, u2, 1)), b = to_channels(back.at(u1, u2, 1));
    for (int c = 0; c < kChannels; ++c)
      for (int k = 0; k < 3; ++k) CHECK(std::abs(a[c][k] - b[c][k]) < 1e-13);
  }
}

TEST_CASE("frontal files") {
  const Json doc = Json::parse(R"({"name": "par", "domain": [-1, 1, -1, 1],
    "x": ["u1", "u2", "(u1^2 + u2^2)/2"], "w1": ["1", "0", "u1"], "w2": ["0", "1", "u2"]})");
  const Frontal f = frontal_from_json(doc);
  CHECK(f.name == "par");
  CHECK(frame_data(f, 0.2, 0.3).lambda == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(kind_of([] { (void)frontal_from_json(Json::parse(R"({"x": ["u1", "u2", "0"]})")); }) ==
        ErrorKind::InputError);
}

TEST_CASE("surface and field exports") {
  const Grid grid{Domain{0, 1, 0, 1}, 3, 2};
  std::vector<Eigen::Vector3d> x;
  std::vector<Vec3> xi;
  for (int k = 0; k < grid.size(); ++k) {
    x.emplace_back(k, 0, 0);
    xi.push_back({0, 0, 1});
  }
  const fs::path obj = scratch("s.obj"), csv = scratch("f.csv");
  write_obj(obj.string(), grid, x);
  write_field_csv(csv.string(), grid, x, xi);
  const std::string o = slurp(obj);
  CHECK(o.find("v 5 0 0\n") != std::string::npos);
  CHECK(o.find("f 1 2 5 4\n") != std::string::npos);
  CHECK(o.find("f 2 3 6 5\n") != std::string::npos);
  const std::string c = slurp(csv);
  CHECK(c.rfind("u1,u2,x,y,z,xi1,xi2,xi3\n", 0) == 0);
  CHECK(c.find("\n0.5,0,1,0,0,0,0,1\n") != std::string::npos);
}

TEST_CASE("report pieces") {
  const Json j = judged(2e-7, 1e-6);
  CHECK(j["pass"] == true);
  CHECK(judged(2e-6, 1e-6)["pass"] == false);
  const Json h = report_header("check", Tolerances{});
  CHECK(h["schema"] == kReportSchema);
  CHECK(h["tolerances"].contains("tol_compat"));
  CHECK(domain_from_json(to_json(Domain{-1, 2, -3, 4})).b2 == 4);
}
