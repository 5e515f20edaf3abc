#include "frontal/config.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include "frontal/error.hpp"

namespace frontal {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

double parse_double(const std::string& key, const std::string& v) {
  double x = 0;
  auto r = std::from_chars(v.data(), v.data() + v.size(), x);
  if (r.ec != std::errc() || r.ptr != v.data() + v.size() || !(x > 0))
    fail(ErrorKind::InputError, "bad positive number for '" + key + "': " + v);
  return x;
}

int parse_int(const std::string& key, const std::string& v) {
  int x = 0;
  auto r = std::from_chars(v.data(), v.data() + v.size(), x);
  if (r.ec != std::errc() || r.ptr != v.data() + v.size())
    fail(ErrorKind::InputError, "bad integer for '" + key + "': " + v);
  return x;
}

}  // namespace

void apply_setting(Tolerances& t, const std::string& key, const std::string& raw) {
  std::string v = trim(raw);
  if (v.size() >= 2 && (v.front() == '"' || v.front() == '\'') && v.back() == v.front())
    v = v.substr(1, v.size() - 2);
  struct D {
    const char* name;
    double Tolerances::*field;
  };
  static const D doubles[] = {
      {"eps_rank", &Tolerances::eps_rank},     {"eps_dec", &Tolerances::eps_dec},
      {"eps_sing", &Tolerances::eps_sing},     {"eps_K", &Tolerances::eps_K},
      {"tol_limit", &Tolerances::tol_limit},   {"tol_compat", &Tolerances::tol_compat},
      {"tol_path", &Tolerances::tol_path},     {"rk4_step", &Tolerances::rk4_step},
      {"sing_band", &Tolerances::sing_band},   {"fd_step", &Tolerances::fd_step},
  };
  for (const auto& d : doubles)
    if (key == d.name) {
      t.*d.field = parse_double(key, v);
      return;
    }
  if (key == "jet_order") {
    t.jet_order = parse_int(key, v);
    if (t.jet_order < 1 || t.jet_order > 4) fail(ErrorKind::InputError, "jet_order must be in 1..4");
  } else if (key == "quad_nodes") {
    t.quad_nodes = parse_int(key, v);
    if (t.quad_nodes < 2) fail(ErrorKind::InputError, "quad_nodes must be >= 2");
  } else if (key == "quad_max_nodes") {
    t.quad_max_nodes = parse_int(key, v);
  } else {
    fail(ErrorKind::InputError, "unknown setting '" + key + "'");
  }
}

Tolerances load_config(const std::string& path, Tolerances base) {
  std::ifstream in(path);
  if (!in) fail(ErrorKind::InputError, "cannot read config file " + path);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    line = trim(line);
    if (line.empty() || line.front() == '[') continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      fail(ErrorKind::InputError, path + ":" + std::to_string(lineno) + ": expected key = value");
    apply_setting(base, trim(line.substr(0, eq)), line.substr(eq + 1));
  }
  return base;
}

std::vector<std::pair<std::string, std::string>> describe(const Tolerances& t) {
  auto num = [](double x) {
    std::ostringstream os;
    os << x;
    return os.str();
  };
  return {
      {"eps_rank", num(t.eps_rank)},     {"eps_dec", num(t.eps_dec)},
      {"eps_sing", num(t.eps_sing)},     {"eps_K", num(t.eps_K)},
      {"tol_limit", num(t.tol_limit)},   {"tol_compat", num(t.tol_compat)},
      {"tol_path", num(t.tol_path)},     {"rk4_step", num(t.rk4_step)},
      {"sing_band", num(t.sing_band)},   {"fd_step", num(t.fd_step)},
      {"jet_order", std::to_string(t.jet_order)},
      {"quad_nodes", std::to_string(t.quad_nodes)},
      {"quad_max_nodes", std::to_string(t.quad_max_nodes)},
  };
}

}  // namespace frontal
