#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <optional>
#include <string>

#include "frontal/blaschke.hpp"
#include "frontal/catalog.hpp"
#include "frontal/expr.hpp"
#include "frontal/io.hpp"
#include "frontal/reconstruct.hpp"

namespace py = pybind11;
using namespace frontal;

namespace {

using DomainArg = std::optional<std::array<double, 4>>;

// A catalog name, or a path to a frontal JSON file.
struct Source {
  Frontal f;
  Domain blaschke_domain, reconstruct_domain;
};

Source load(const std::string& name) {
  if (name.size() > 5 && name.substr(name.size() - 5) == ".json") {
    Frontal f = frontal_from_json(read_json(name));
    const Domain d = f.domain;
    return {std::move(f), d, d};
  }
  const CatalogEntry& e = find_entry(name);
  return {e.frontal(), e.blaschke_domain, e.reconstruct_domain};
}

Domain pick(const DomainArg& d, const Domain& fallback) {
  return d ? Domain{(*d)[0], (*d)[1], (*d)[2], (*d)[3]} : fallback;
}

py::tuple domain_tuple(const Domain& d) { return py::make_tuple(d.a1, d.b1, d.a2, d.b2); }

py::array_t<double> vec(const Vec3& v) {
  py::array_t<double> a(3);
  for (int k = 0; k < 3; ++k) a.mutable_at(k) = v[k];
  return a;
}

py::array_t<double> mat(const Mat2& m) {
  py::array_t<double> a({2, 2});
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) a.mutable_at(i, j) = m[i][j];
  return a;
}

template <class Get>
py::array_t<double> grid_field(const Grid& g, Get get) {
  py::array_t<double> a({g.ny, g.nx, 3});
  auto r = a.mutable_unchecked<3>();
  for (int j = 0; j < g.ny; ++j)
    for (int i = 0; i < g.nx; ++i) {
      const auto v = get(j * g.nx + i);
      for (int k = 0; k < 3; ++k) r(j, i, k) = v[k];
    }
  return a;
}

py::list catalog_list() {
  py::list out;
  for (const auto& e : catalog()) {
    py::dict d;
    d["name"] = e.name;
    d["description"] = e.description;
    d["domain"] = domain_tuple(e.domain);
    d["blaschke_domain"] = domain_tuple(e.blaschke_domain);
    d["reconstruct_domain"] = domain_tuple(e.reconstruct_domain);
    out.append(d);
  }
  return out;
}

py::array_t<double> jet(const std::string& text, double u1, double u2, int order) {
  const Jet j = Expression::parse(text).eval_jet(u1, u2, order);
  py::array_t<double> a({order + 1, order + 1});
  auto r = a.mutable_unchecked<2>();
  for (int p = 0; p <= order; ++p)
    for (int q = 0; q <= order; ++q) r(p, q) = p + q <= order ? j.coeff(p, q) : 0.0;
  return a;
}

py::dict frame(const std::string& name, double u1, double u2) {
  const FrameData d = frame_data(load(name).f, u1, u2);
  py::dict out;
  out["lambda"] = d.lambda;
  out["K_Omega"] = d.K_Omega;
  out["K"] = d.K;
  out["regular"] = d.regular;
  out["n"] = vec(d.n);
  out["I_Omega"] = mat(d.I_Omega);
  out["II_Omega"] = mat(d.II_Omega);
  return out;
}

py::dict blaschke_point(const std::string& name, double u1, double u2) {
  const BlaschkePoint p = blaschke_at(load(name).f, u1, u2, 0);
  py::dict out;
  out["xi"] = vec(p.xi.value());
  out["K"] = p.K;
  out["singular"] = p.singular;
  return out;
}

py::dict blaschke_grid(const std::string& name, int nx, int ny, const DomainArg& domain) {
  const Source s = load(name);
  const Grid g{pick(domain, s.blaschke_domain), nx, ny};
  BlaschkeField bf;
  {
    py::gil_scoped_release release;
    bf = blaschke_field(s.f, g);
  }
  py::array_t<double> K({ny, nx});
  py::array_t<bool> singular({ny, nx});
  for (int j = 0; j < ny; ++j)
    for (int i = 0; i < nx; ++i) {
      K.mutable_at(j, i) = bf.K[j * nx + i];
      singular.mutable_at(j, i) = bf.singular[j * nx + i] != 0;
    }
  py::dict out;
  out["domain"] = domain_tuple(g.domain);
  out["xi"] = grid_field(g, [&](int k) { return bf.xi[k]; });
  out["K"] = K;
  out["singular"] = singular;
  out["improper_sphere"] = bf.improper_sphere;
  out["max_tau"] = bf.verify.max_tau;
  out["max_volume"] = bf.verify.max_volume;
  return out;
}

py::dict reconstruct(const std::string& name, int nx, int ny, double step, const DomainArg& domain) {
  const Source s = load(name);
  const Grid g{pick(domain, s.reconstruct_domain), nx, ny};
  Reconstruction r;
  Alignment al;
  bool constant = false;
  {
    py::gil_scoped_release release;
    const BlaschkeField bf = blaschke_field(s.f, g);
    constant = bf.improper_sphere;
    const TransversalField xi =
        constant ? constant_field(bf.xi[(ny / 2) * nx + nx / 2]) : blaschke_transversal(s.f);
    r = integrate_position(extract_structure(s.f, xi, g), g, step);
    al = affine_align(r.x, sample_surface(s.f, g));
  }
  py::dict out;
  out["domain"] = domain_tuple(g.domain);
  out["x"] = grid_field(g, [&](int k) { return r.x[k]; });
  out["constant_field"] = constant;
  out["frame_discrepancy"] = r.frame_discrepancy;
  out["position_discrepancy"] = r.position_discrepancy;
  out["align_sup_error"] = al.sup_error;
  return out;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Frontals, equiaffine structures and Blaschke fields";

  // Kept for the lifetime of the interpreter; instances carry the error kind.
  static py::handle frontal_error = py::exception<Error>(m, "FrontalError", PyExc_RuntimeError).release();
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const Error& e) {
      py::object inst = frontal_error(e.what());
      inst.attr("kind") = to_string(e.kind());
      PyErr_SetObject(frontal_error.ptr(), inst.ptr());
    }
  });

  m.def("catalog", &catalog_list, "Catalog entries with their domains.");
  m.def("parse", [](const std::string& t) { return Expression::parse(t).print(); },
        "Fully parenthesised print form of an expression.", py::arg("text"));
  m.def("evaluate", [](const std::string& t, double u1, double u2) { return Expression::parse(t).eval(u1, u2); },
        py::arg("text"), py::arg("u1"), py::arg("u2"));
  m.def("jet", &jet, "Partials c[p, q] = d^(p+q) f / du1^p du2^q (zero for p + q > order).", py::arg("text"),
        py::arg("u1"), py::arg("u2"), py::arg("order") = 2);
  m.def("frame_data", &frame, "Pointwise frame invariants.", py::arg("entry"), py::arg("u1"), py::arg("u2"));
  m.def("blaschke_at", &blaschke_point, "Blaschke normal at one point.", py::arg("entry"), py::arg("u1"),
        py::arg("u2"));
  m.def("blaschke_field", &blaschke_grid, "Blaschke normal on a grid; xi has shape (ny, nx, 3).", py::arg("entry"),
        py::arg("nx") = 21, py::arg("ny") = 21, py::arg("domain") = py::none());
  m.def("reconstruct", &reconstruct,
        "Extract grid-backed structure data with the Blaschke field and integrate it back.", py::arg("entry"),
        py::arg("nx") = 41, py::arg("ny") = 41, py::arg("step") = 1e-3, py::arg("domain") = py::none());
}
