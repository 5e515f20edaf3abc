#include <CLI11.hpp>
#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>

#include "frontal/blaschke.hpp"
#include "frontal/catalog.hpp"
#include "frontal/expr.hpp"
#include "frontal/io.hpp"
#include "frontal/parallel.hpp"
#include "frontal/reconstruct.hpp"

using namespace frontal;
namespace fs = std::filesystem;

namespace {

struct Options {
  std::string entry, input, grid, out, config, domain;
  std::vector<std::string> sets;
  bool json = false;
  double step = 0;
  std::string h, c, b, l, r, a;
  std::string generator;  // positional argument of `catalog`
  std::string xi = "blaschke";
};

struct Source {
  Frontal f;
  Domain domain, blaschke_domain, reconstruct_domain;
  const CatalogEntry* entry = nullptr;
  Json describe;
};

struct Outcome {
  Json report;
  std::vector<std::string> summary;
  int code = 0;
};

Tolerances tolerances(const Options& o) {
  Tolerances t = o.config.empty() ? Tolerances{} : load_config(o.config);
  for (const auto& kv : o.sets) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos) fail(ErrorKind::InputError, "--set expects key=value, got '" + kv + "'");
    apply_setting(t, kv.substr(0, eq), kv.substr(eq + 1));
  }
  return t;
}

Domain parse_domain(const std::string& text) {
  std::stringstream ss(text);
  std::vector<double> v;
  std::string part;
  while (std::getline(ss, part, ',')) {
    try {
      std::size_t used = 0;
      v.push_back(std::stod(part, &used));
      if (used != part.size()) throw std::invalid_argument(part);
    } catch (const std::exception&) {
      fail(ErrorKind::InputError, "--domain expects a1,b1,a2,b2");
    }
  }
  if (v.size() != 4) fail(ErrorKind::InputError, "--domain expects a1,b1,a2,b2");
  return domain_from_json(Json(v));
}

Grid parse_grid(const std::string& text, const Domain& d, int fallback) {
  Grid g{d, fallback, fallback};
  if (text.empty()) return g;
  const auto x = text.find_first_of("xX");
  try {
    std::size_t a = 0, b = 0;
    if (x == std::string::npos) throw std::invalid_argument(text);
    g.nx = std::stoi(text.substr(0, x), &a);
    g.ny = std::stoi(text.substr(x + 1), &b);
    if (a != x || b != text.size() - x - 1) throw std::invalid_argument(text);
  } catch (const std::exception&) {
    fail(ErrorKind::InputError, "--grid expects NxM, got '" + text + "'");
  }
  if (g.nx < 2 || g.ny < 2 || g.nx > 4001 || g.ny > 4001)
    fail(ErrorKind::InputError, "--grid sizes must lie in [2, 4001]");
  return g;
}

bool is_generator(const std::string& name) { return name.rfind("gen-", 0) == 0; }

Source generator(const std::string& name, const Options& o, const Tolerances& tol) {
  const Domain d = o.domain.empty() ? Domain{} : parse_domain(o.domain);
  Source s;
  s.domain = s.blaschke_domain = s.reconstruct_domain = d;
  s.describe = {{"generator", name}, {"domain", to_json(d)}};
  auto need = [&](const std::string& v, const char* flag) {
    if (v.empty()) fail(ErrorKind::InputError, name + " needs " + flag);
  };
  if (name == "gen-rank1-wavefront") {
    need(o.h, "--h");
    s.f = gen_rank1_wavefront(o.h, o.c, d, tol);
    s.describe["h"] = o.h;
    if (!o.c.empty()) s.describe["c"] = o.c;
  } else if (name == "gen-extendable") {
    need(o.b, "--b");
    need(o.h, "--h");
    const std::string l = o.l.empty() ? "0" : o.l, r = o.r.empty() ? "0" : o.r;
    s.f = gen_extendable(o.b, o.h, l, r, d, tol);
    s.describe.update({{"b", o.b}, {"h", o.h}, {"l", l}, {"r", r}});
  } else if (name == "gen-nonparabolic") {
    need(o.a, "--a");
    need(o.b, "--b");
    s.f = gen_nonparabolic(o.a, o.b, d, tol);
    s.describe.update({{"a", o.a}, {"b", o.b}});
  } else {
    fail(ErrorKind::InputError, "unknown generator '" + name + "'");
  }
  return s;
}

Source resolve(const Options& o, const Tolerances& tol) {
  if (o.entry.empty() == o.input.empty()) fail(ErrorKind::InputError, "give exactly one of --entry and --input");
  Source s;
  if (!o.input.empty()) {
    s.f = frontal_from_json(read_json(o.input), tol);
    s.domain = s.blaschke_domain = s.reconstruct_domain = s.f.domain;
    s.describe = {{"input", fs::path(o.input).filename().string()}, {"domain", to_json(s.domain)}};
  } else if (is_generator(o.entry)) {
    s = generator(o.entry, o, tol);
  } else {
    const CatalogEntry& e = find_entry(o.entry);
    s.f = e.frontal(tol);
    s.entry = &e;
    s.domain = e.domain;
    s.blaschke_domain = e.blaschke_domain;
    s.reconstruct_domain = e.reconstruct_domain;
    s.describe = {{"entry", e.name}, {"domain", to_json(e.domain)}};
  }
  if (!o.domain.empty()) {
    s.domain = s.blaschke_domain = s.reconstruct_domain = parse_domain(o.domain);
    s.f.domain = s.domain;
    s.describe["domain"] = to_json(s.domain);
  }
  return s;
}

fs::path out_dir(const Options& o) {
  const fs::path p = o.out;
  std::error_code ec;
  fs::create_directories(p, ec);
  if (ec) fail(ErrorKind::InputError, "cannot create " + p.string() + ": " + ec.message());
  return p;
}

Json grid_json(const Grid& g) { return {{"domain", to_json(g.domain)}, {"nx", g.nx}, {"ny", g.ny}}; }

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(6);
  os << v;
  return os.str();
}

std::string verdict_line(const std::string& name, const Json& j) {
  return name + ": " + fmt(j["value"].get<double>()) + " (tol " + fmt(j["tol"].get<double>()) + ") " +
         (j["pass"].get<bool>() ? "pass" : "FAIL");
}

// Judged entries anywhere in the tree that did not pass.
int failures(const Json& j) {
  int n = 0;
  if (j.is_object()) {
    if (j.contains("pass") && j["pass"].is_boolean() && !j["pass"].get<bool>()) ++n;
    for (const auto& [k, v] : j.items()) n += failures(v);
  } else if (j.is_array()) {
    for (const auto& v : j) n += failures(v);
  }
  return n;
}

Json vec_json(const Vec3& v) { return Json::array({v[0], v[1], v[2]}); }

// ---------------------------------------------------------------- catalog

Outcome cmd_catalog(const Options& o) {
  const Tolerances tol = tolerances(o);
  Outcome out;
  out.report = report_header("catalog", tol);
  if (o.generator.empty()) {
    Json list = Json::array();
    for (const auto& e : catalog()) {
      Json known = Json::object();
      if (!e.known.lambda.empty()) known["lambda"] = e.known.lambda;
      if (!e.known.K.empty()) known["K"] = e.known.K;
      if (!e.known.xi[0].empty()) known["xi"] = e.known.xi;
      if (!e.known.xi_exact[0].empty()) known["xi_exact"] = e.known.xi_exact;
      if (!e.known.note.empty()) known["note"] = e.known.note;
      list.push_back({{"name", e.name},
                      {"description", e.description},
                      {"domain", to_json(e.domain)},
                      {"blaschke_domain", to_json(e.blaschke_domain)},
                      {"reconstruct_domain", to_json(e.reconstruct_domain)},
                      {"x", e.x},
                      {"w1", e.w1},
                      {"w2", e.w2},
                      {"known", known}});
      out.summary.push_back(e.name + "  " + e.description);
    }
    for (const char* g : {"gen-rank1-wavefront --h H [--c C]", "gen-extendable --b B --h H [--l L] [--r R]",
                          "gen-nonparabolic --a A --b B"})
      out.summary.push_back(std::string("generator: ") + g);
    out.report["entries"] = list;
    out.report["generators"] = {"gen-rank1-wavefront", "gen-extendable", "gen-nonparabolic"};
    return out;
  }

  Options go = o;
  go.entry = o.generator;
  const Source s = generator(o.generator, go, tol);
  const Grid g = parse_grid(o.grid, s.domain, 11);
  std::vector<double> dec(g.size()), lam(g.size(), 0.0);
  std::optional<Expression> h22;
  if (o.generator == "gen-rank1-wavefront")
    h22 = Expression::parse(o.h).derivative(Var::U2).derivative(Var::U2);
  parallel_for(g.size(), [&](std::size_t k) {
    const double u1 = g.u1(static_cast<int>(k) % g.nx), u2 = g.u2(static_cast<int>(k) / g.nx);
    const FrontalJets fj = s.f.at(u1, u2, 1);
    dec[k] = decomposition_residual(fj);
    if (h22) lam[k] = std::abs(det(fj.Lambda).value() + h22->eval(u1, u2));
  });
  out.report["generator"] = s.describe;
  out.report["grid"] = grid_json(g);
  out.report["decomposition_residual"] = judged(*std::max_element(dec.begin(), dec.end()), tol.eps_dec);
  out.summary.push_back(verdict_line("decomposition residual", out.report["decomposition_residual"]));
  if (h22) {
    out.report["lambda_vs_minus_h22"] = judged(*std::max_element(lam.begin(), lam.end()), 1e-8);
    out.summary.push_back(verdict_line("lambda + h_u2u2", out.report["lambda_vs_minus_h22"]));
  }
  if (!o.out.empty()) write_obj((out_dir(o) / "surface.obj").string(), g, sample_surface(s.f, g));
  if (failures(out.report)) out.code = 4;
  return out;
}

// ---------------------------------------------------------------- analyze

Outcome cmd_analyze(const Options& o) {
  const Tolerances tol = tolerances(o);
  const Source s = resolve(o, tol);
  const Grid g = parse_grid(o.grid, s.domain, 101);
  std::vector<FrameData> fd(g.size());
  parallel_for(g.size(), [&](std::size_t k) {
    fd[k] = frame_data(s.f, g.u1(static_cast<int>(k) % g.nx), g.u2(static_cast<int>(k) / g.nx), tol);
  });
  const SingularScan scan = singular_scan(s.f, g, tol);
  const GridVerdict wf = wavefront_test(s.f, g, tol);
  const GridVerdict np = nonparabolic_test(s.f, g, tol);

  std::vector<char> sing(g.size(), 0);
  for (const auto& n : scan.nodes) sing[n[1] * g.nx + n[0]] = 1;
  Json rows = Json::array(), cols = Json::array();
  for (int j = 0; j < g.ny; ++j) {
    bool all = true;
    for (int i = 0; i < g.nx && all; ++i) all = sing[j * g.nx + i];
    if (all) rows.push_back(g.u2(j));
  }
  for (int i = 0; i < g.nx; ++i) {
    bool all = true;
    for (int j = 0; j < g.ny && all; ++j) all = sing[j * g.nx + i];
    if (all) cols.push_back(g.u1(i));
  }
  double lmin = INFINITY, lmax = -INFINITY;
  for (const auto& d : fd) {
    lmin = std::min(lmin, d.lambda);
    lmax = std::max(lmax, d.lambda);
  }
  auto witnesses = [](const GridVerdict& v) {
    Json w = Json::array();
    for (const auto& p : v.witnesses) w.push_back({p[0], p[1]});
    return w;
  };

  Outcome out;
  out.report = report_header("analyze", tol);
  out.report["source"] = s.describe;
  out.report["grid"] = grid_json(g);
  out.report["lambda_range"] = {lmin, lmax};
  out.report["singular"] = {{"nodes", static_cast<int>(scan.nodes.size())},
                            {"cells", static_cast<int>(scan.cells.size())},
                            {"rows_u2", rows},
                            {"columns_u1", cols},
                            {"regular_dense", scan.regular_dense},
                            {"eps_sing", tol.eps_sing}};
  out.report["wavefront"] = {{"holds", wf.holds}, {"worst_margin", wf.worst}, {"witnesses", witnesses(wf)},
                             {"eps_rank", tol.eps_rank}};
  out.report["nonparabolic"] = {{"holds", np.holds}, {"worst_margin", np.worst}, {"witnesses", witnesses(np)},
                                {"eps_K", tol.eps_K}};

  out.summary.push_back("lambda range: [" + fmt(lmin) + ", " + fmt(lmax) + "]");
  out.summary.push_back("singular nodes: " + std::to_string(scan.nodes.size()));
  for (const auto& r : rows) out.summary.push_back("singular row: u2 = " + fmt(r.get<double>()));
  for (const auto& c : cols) out.summary.push_back("singular column: u1 = " + fmt(c.get<double>()));
  out.summary.push_back(std::string("wave front: ") + (wf.holds ? "true" : "false"));
  out.summary.push_back(std::string("non-parabolic: ") + (np.holds ? "true" : "false"));

  if (!o.out.empty()) {
    const fs::path dir = out_dir(o);
    std::ofstream csv(dir / "frame.csv");
    csv.precision(12);
    csv << "u1,u2,lambda,K_Omega,K,n1,n2,n3\n";
    for (int k = 0; k < g.size(); ++k) {
      const auto& d = fd[k];
      csv << g.u1(k % g.nx) << "," << g.u2(k / g.nx) << "," << d.lambda << "," << d.K_Omega << ","
          << (d.regular ? d.K : NAN) << "," << d.n[0] << "," << d.n[1] << "," << d.n[2] << "\n";
    }
    write_json((dir / "report.json").string(), out.report);
  }
  return out;
}

// ---------------------------------------------------------------- blaschke

double known_deviation(const std::array<std::string, 3>& text, const Grid& g, const std::vector<Vec3>& xi) {
  std::array<Expression, 3> e;
  for (int c = 0; c < 3; ++c) e[c] = Expression::parse(text[c]);
  double worst = 0;
  for (int k = 0; k < g.size(); ++k)
    for (int c = 0; c < 3; ++c)
      worst = std::max(worst, std::abs(e[c].eval(g.u1(k % g.nx), g.u2(k / g.nx)) - xi[k][c]));
  return worst;
}

Outcome cmd_blaschke(const Options& o) {
  const Tolerances tol = tolerances(o);
  const Source s = resolve(o, tol);
  const Grid g = parse_grid(o.grid, s.blaschke_domain, 101);
  const BlaschkeField bf = blaschke_field(s.f, g, tol);

  Outcome out;
  out.report = report_header("blaschke", tol);
  out.report["source"] = s.describe;
  out.report["grid"] = grid_json(g);
  out.report["sign_K"] = bf.sign;
  out.report["probed_nodes"] = bf.probed;
  out.report["worst_probe_spread"] = judged(bf.worst_spread, tol.tol_limit);
  out.report["improper_sphere"] = {{"holds", bf.improper_sphere}, {"tol", 1e-6}};
  out.report["max_tau"] = judged(bf.verify.max_tau, 1e-6);
  out.report["volume_residual"] = judged(bf.verify.max_volume, 1e-6);
  out.report["regular_nodes_checked"] = bf.verify.points;
  out.report["xi_at_basepoint"] = vec_json(bf.xi[(g.ny / 2) * g.nx + g.nx / 2]);
  out.summary.push_back("sign of K: " + std::to_string(bf.sign));
  out.summary.push_back("probed nodes: " + std::to_string(bf.probed));
  out.summary.push_back(verdict_line("max |tau|", out.report["max_tau"]));
  out.summary.push_back(verdict_line("volume residual", out.report["volume_residual"]));
  out.summary.push_back(std::string("improper affine sphere: ") + (bf.improper_sphere ? "true" : "false"));
  if (s.entry) {
    if (!s.entry->known.xi_exact[0].empty()) {
      out.report["known_xi_deviation"] = judged(known_deviation(s.entry->known.xi_exact, g, bf.xi), 1e-6);
      out.summary.push_back(verdict_line("deviation from the exact field", out.report["known_xi_deviation"]));
    }
    if (!s.entry->known.xi[0].empty()) {
      // Printed closed forms may carry typos; reported without a verdict.
      out.report["printed_xi_deviation"] = {{"value", known_deviation(s.entry->known.xi, g, bf.xi)},
                                            {"informational", true}};
      out.summary.push_back("deviation from the printed field: " +
                            fmt(out.report["printed_xi_deviation"]["value"].get<double>()) + " (informational)");
    }
  }
  if (!o.out.empty()) {
    const fs::path dir = out_dir(o);
    const auto x = sample_surface(s.f, g);
    write_obj((dir / "surface.obj").string(), g, x);
    write_field_csv((dir / "field.csv").string(), g, x, bf.xi);
    write_json((dir / "report.json").string(), out.report);
  }
  if (failures(out.report)) out.code = 4;
  return out;
}

// ---------------------------------------------------------------- reconstruct

// The transversal field used for extraction. A constant Blaschke field
// (improper affine sphere) is replaced by that constant, which avoids
// probing its derivatives at singular nodes.
TransversalField extraction_field(const Options& o, const Source& s, const Grid& g, const Tolerances& tol,
                                  Json& desc) {
  if (o.xi != "blaschke") {
    std::array<std::string, 3> parts;
    std::stringstream ss(o.xi);
    int n = 0;
    for (std::string p; std::getline(ss, p, ',');) {
      if (n == 3) fail(ErrorKind::InputError, "--xi expects blaschke or three comma-separated expressions");
      parts[n++] = p;
    }
    if (n != 3) fail(ErrorKind::InputError, "--xi expects blaschke or three comma-separated expressions");
    desc = {{"kind", "expression"}, {"components", parts}};
    return expression_field(parts);
  }
  const BlaschkeField bf = blaschke_field(s.f, g, tol);
  if (bf.improper_sphere) {
    const Vec3 c = bf.xi[(g.ny / 2) * g.nx + g.nx / 2];
    desc = {{"kind", "blaschke"}, {"constant", vec_json(c)}};
    return constant_field(c);
  }
  desc = {{"kind", "blaschke"}};
  return blaschke_transversal(s.f, tol);
}

Json residual_json(const ResidualReport& r, double tol) {
  Json j = judged(r.regular, tol * std::max(1.0, r.scale));
  j["singular_band_max"] = r.singular;
  j["scale"] = r.scale;
  j["where"] = {r.where[0], r.where[1]};
  return j;
}

Outcome cmd_reconstruct(const Options& o) {
  const Tolerances tol = tolerances(o);
  const double step = o.step > 0 ? o.step : tol.rk4_step;
  Outcome out;
  out.report = report_header("reconstruct", tol);
  out.report["step"] = step;

  StructureData sd;
  Grid g;
  std::optional<Source> src;
  if (!o.input.empty() && o.entry.empty()) {
    sd = read_structure(o.input);
    g = parse_grid(o.grid, sd.domain, 101);
    out.report["source"] = {{"structure", fs::path(o.input).filename().string()}, {"backing", sd.backing}};
  } else {
    src = resolve(o, tol);
    g = parse_grid(o.grid, src->reconstruct_domain, 101);
    Json field;
    const TransversalField xi = extraction_field(o, *src, g, tol, field);
    sd = extract_structure(src->f, xi, g, tol);
    out.report["source"] = src->describe;
    out.report["source"]["backing"] = sd.backing;
    out.report["field"] = field;
  }
  out.report["grid"] = grid_json(g);

  const ResidualReport compat = compat_residual(sd, g, tol);
  const IntegrabilityReport integ = integrability_residual(sd, g, tol);
  out.report["compatibility"] = residual_json(compat, tol.tol_compat);
  out.report["integrability_sym"] = residual_json(integ.sym, tol.tol_compat);
  out.report["integrability_row"] = residual_json(integ.row, tol.tol_compat);
  out.summary.push_back(verdict_line("compatibility residual", out.report["compatibility"]));
  out.summary.push_back(verdict_line("integrability (symmetry)", out.report["integrability_sym"]));
  out.summary.push_back(verdict_line("integrability (row)", out.report["integrability_row"]));

  const Reconstruction r = integrate_position(sd, g, step, tol);
  out.report["frame_discrepancy"] = judged(r.frame_discrepancy, tol.tol_path);
  out.report["position_discrepancy"] = judged(r.position_discrepancy, tol.tol_path);
  out.report["min_abs_det_W"] = r.min_abs_det;
  out.report["det_sign_stable"] = r.det_sign_stable;
  out.report["steps_per_cell"] = {r.steps_per_cell_u1, r.steps_per_cell_u2};
  out.summary.push_back(verdict_line("frame path discrepancy", out.report["frame_discrepancy"]));
  out.summary.push_back(verdict_line("position path discrepancy", out.report["position_discrepancy"]));
  if (src) {
    const Alignment al = affine_align(r.x, sample_surface(src->f, g));
    out.report["alignment"] = judged(al.sup_error, tol.tol_path);
    out.report["alignment"]["L"] = {{al.L(0, 0), al.L(0, 1), al.L(0, 2)},
                                    {al.L(1, 0), al.L(1, 1), al.L(1, 2)},
                                    {al.L(2, 0), al.L(2, 1), al.L(2, 2)}};
    out.report["alignment"]["a"] = {al.a(0), al.a(1), al.a(2)};
    out.summary.push_back(verdict_line("aligned sup error", out.report["alignment"]));
  }
  if (!o.out.empty()) {
    const fs::path dir = out_dir(o);
    write_obj((dir / "reconstructed.obj").string(), g, r.x);
    std::vector<Vec3> xi(g.size());
    for (int k = 0; k < g.size(); ++k) xi[k] = {r.W[k](0, 2), r.W[k](1, 2), r.W[k](2, 2)};
    write_field_csv((dir / "reconstructed.csv").string(), g, r.x, xi);
    write_json((dir / "report.json").string(), out.report);
  }
  if (failures(out.report)) out.code = 4;
  return out;
}

// ---------------------------------------------------------------- check

template <class Fn>
double grid_max(const Grid& g, const Fn& fn) {
  std::vector<double> v(g.size(), 0.0);
  parallel_for(g.size(), [&](std::size_t k) {
    v[k] = fn(g.u1(static_cast<int>(k) % g.nx), g.u2(static_cast<int>(k) / g.nx));
  });
  return *std::max_element(v.begin(), v.end());
}

Outcome cmd_check(const Options& o) {
  const Tolerances tol = tolerances(o);
  const Source s = resolve(o, tol);
  const Grid g = parse_grid(o.grid, s.blaschke_domain, 11);
  const TransversalField xi = blaschke_transversal(s.f, tol);
  auto regular = [&](double u1, double u2) {
    return std::abs(det(s.f.at(u1, u2, 0).Lambda).value()) > tol.sing_band;
  };

  Outcome out;
  out.report = report_header("check", tol);
  out.report["source"] = s.describe;
  out.report["grid"] = grid_json(g);
  Json& R = out.report["properties"];

  R["decomposition"] = judged(grid_max(g, [&](double a, double b) { return decomposition_residual(s.f.at(a, b, 1)); }),
                              tol.eps_dec);
  const BlaschkeVerify bv = blaschke_verify(s.f, xi, g, tol);
  R["blaschke_tau"] = judged(bv.max_tau, 1e-6);
  R["blaschke_volume"] = judged(bv.max_volume, 1e-6);
  R["tau_formula"] = judged(grid_max(g,
                                     [&](double a, double b) {
                                       if (!regular(a, b)) return 0.0;
                                       const auto t = check_tau_formula(s.f, xi, a, b, tol);
                                       return std::max(t.h, t.tau);
                                     }),
                            1e-8);
  R["parallel_volume"] = judged(parallel_volume_check(s.f, xi, g, tol).value, 1e-8);
  R["D_cross_path"] = judged(grid_max(g,
                                      [&](double a, double b) {
                                        if (!regular(a, b)) return 0.0;
                                        const auto D = D_from_gamma(s.f, xi, a, b, tol);
                                        const auto e = structure_from_field(s.f, xi, a, b, 0, tol);
                                        double w = 0;
                                        for (int i = 0; i < 2; ++i)
                                          for (int j = 0; j < 2; ++j)
                                            w = std::max({w, std::abs(D[0](i, j).value() - e.D1(i, j).value()),
                                                          std::abs(D[1](i, j).value() - e.D2(i, j).value())});
                                        return w;
                                      }),
                             1e-8);
  const ConormalReport cr = conormal_verify(s.f, xi, g, tol);
  R["conormal"] = judged(std::max({cr.dual, cr.tangent, cr.dxi, cr.dh}), 1e-8);
  R["conormal"]["immersion"] = cr.immersion;
  if (!cr.immersion) R["conormal"]["pass"] = false;

  // Equivariance under a fixed unimodular affine map.
  Eigen::Matrix3d A;
  A << 1, 2, 0, 0, 1, 0, 1, -1, 1;
  const Eigen::Vector3d shift(0.3, -0.2, 0.5);
  const Frontal fa = affine_image(s.f, A, shift);
  R["equivariance"] = judged(grid_max(g,
                                      [&](double a, double b) {
                                        const Vec3 x0 = blaschke_at(s.f, a, b, 0, tol).xi.value();
                                        const Vec3 x1 = blaschke_at(fa, a, b, 0, tol).xi.value();
                                        const Eigen::Vector3d m = A * Eigen::Vector3d(x0[0], x0[1], x0[2]);
                                        return (m - Eigen::Vector3d(x1[0], x1[1], x1[2])).cwiseAbs().maxCoeff();
                                      }),
                             1e-6);

  const SingularScan scan = singular_scan(s.f, g, tol);
  Json ext = Json::array();
  const ExtensionFn data = extension_inputs(s.f);
  for (std::size_t k = 0; k < scan.nodes.size() && k < 8; ++k) {
    const double a = g.u1(scan.nodes[k][0]), b = g.u2(scan.nodes[k][1]);
    for (int which = 1; which <= 2; ++which) {
      const ExtensionVerdict v = extension_condition(data, which, a, b, tol);
      ext.push_back({{"at", {a, b}},
                     {"which", which},
                     {"verdict", to_string(v.verdict)},
                     {"omega", v.omega},
                     {"pass", v.verdict == ProbeVerdict::Extendable}});
    }
  }
  R["extension_conditions"] = ext;

  for (const auto& [name, v] : R.items()) {
    if (v.is_object()) out.summary.push_back(verdict_line(name, v));
  }
  for (const auto& e : ext)
    out.summary.push_back("extension condition " + std::to_string(e["which"].get<int>()) + " at (" +
                          fmt(e["at"][0].get<double>()) + ", " + fmt(e["at"][1].get<double>()) +
                          "): " + e["verdict"].get<std::string>());
  if (!o.out.empty()) write_json((out_dir(o) / "report.json").string(), out.report);
  if (failures(out.report)) out.code = 4;
  return out;
}

// ---------------------------------------------------------------- export

Outcome cmd_export(const Options& o) {
  const Tolerances tol = tolerances(o);
  const Source s = resolve(o, tol);
  const Grid g = parse_grid(o.grid, s.reconstruct_domain, 101);
  Options oo = o;
  if (oo.out.empty()) oo.out = ".";
  const fs::path dir = out_dir(oo);
  const BlaschkeField bf = blaschke_field(s.f, g, tol);
  const auto x = sample_surface(s.f, g);
  SampledStructure samples;
  Json field;
  const TransversalField xi = extraction_field(o, s, g, tol, field);
  const StructureData sd = extract_structure(s.f, xi, g, tol, &samples);
  write_obj((dir / "surface.obj").string(), g, x);
  write_field_csv((dir / "field.csv").string(), g, x, bf.xi);
  write_json((dir / "structure.json").string(), structure_to_json(samples, sd));

  Outcome out;
  out.report = report_header("export", tol);
  out.report["source"] = s.describe;
  out.report["grid"] = grid_json(g);
  out.report["field"] = field;
  out.report["files"] = {"surface.obj", "field.csv", "structure.json"};
  for (const auto& f : out.report["files"]) out.summary.push_back("wrote " + (dir / f.get<std::string>()).string());
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Frontals, Blaschke fields and structure-equation reconstruction"};
  app.require_subcommand(1);
  Options o;

  // -h would clash with the generator option --h.
  app.set_help_flag("--help", "print this help and exit");
  auto common = [&](CLI::App* c, bool source) {
    c->set_help_flag("--help", "print this help and exit");
    if (source) {
      c->add_option("--entry", o.entry, "catalog entry or generator name");
      c->add_option("--input", o.input, "input JSON file");
      c->add_option("--domain", o.domain, "override the domain as a1,b1,a2,b2");
      c->add_option("--h", o.h, "generator function h");
      c->add_option("--c", o.c, "rank-1 generator constant c");
      c->add_option("--b", o.b, "generator function b");
      c->add_option("--l", o.l, "gen-extendable function l(u1)");
      c->add_option("--r", o.r, "gen-extendable function r(u1)");
      c->add_option("--a", o.a, "gen-nonparabolic function a");
    }
    c->add_option("--grid", o.grid, "grid size NxM");
    c->add_option("--out", o.out, "output directory");
    c->add_option("--config", o.config, "tolerance file (key = value)");
    c->add_option("--set", o.sets, "tolerance override key=value")->take_all();
    c->add_flag("--json", o.json, "print the JSON report");
  };

  auto* cat = app.add_subcommand("catalog", "list catalog entries or build a generator surface");
  cat->add_option("generator", o.generator, "generator name");
  common(cat, true);
  auto* ana = app.add_subcommand("analyze", "frame data, singular set, wave-front and non-parabolic tests");
  common(ana, true);
  auto* bl = app.add_subcommand("blaschke", "Blaschke field with verification");
  common(bl, true);
  auto* rec = app.add_subcommand("reconstruct", "integrate structure equations and audit paths");
  common(rec, true);
  rec->add_option("--step", o.step, "RK4 step (default from tolerances)");
  rec->add_option("--xi", o.xi, "extraction field: blaschke or e1,e2,e3 expressions");
  auto* chk = app.add_subcommand("check", "property suite on one entry");
  common(chk, true);
  auto* exp = app.add_subcommand("export", "write surface OBJ, field CSV and structure JSON");
  common(exp, true);
  exp->add_option("--xi", o.xi, "extraction field: blaschke or e1,e2,e3 expressions");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    Outcome r;
    if (cat->parsed()) r = cmd_catalog(o);
    else if (ana->parsed()) r = cmd_analyze(o);
    else if (bl->parsed()) r = cmd_blaschke(o);
    else if (rec->parsed()) r = cmd_reconstruct(o);
    else if (chk->parsed()) r = cmd_check(o);
    else r = cmd_export(o);
    if (o.json) {
      std::cout << r.report.dump(2) << "\n";
    } else {
      for (const auto& line : r.summary) std::cout << line << "\n";
    }
    return r.code;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    if (o.json)
      std::cout << Json{{"schema", kReportSchema}, {"error", to_string(e.kind())}, {"message", e.what()}}.dump(2)
                << "\n";
    return exit_code(e.kind());
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
