#pragma once

#include <string>
#include <vector>

namespace frontal {

struct Tolerances {
  double eps_rank = 1e-9;
  double eps_dec = 1e-8;
  double eps_sing = 1e-9;
  double eps_K = 1e-10;
  double tol_limit = 1e-4;
  double tol_compat = 1e-6;
  double tol_path = 1e-4;
  double rk4_step = 1e-3;
  // |lambda| below this switches K and the Blaschke field to limit probing.
  double sing_band = 1e-6;
  double fd_step = 1e-3;
  int jet_order = 3;
  int quad_nodes = 32;
  int quad_max_nodes = 512;
};

// Applies one key=value setting; throws InputError on unknown keys or bad values.
void apply_setting(Tolerances& tol, const std::string& key, const std::string& value);
// Flat key = value file, '#' comments, optional quotes around values.
Tolerances load_config(const std::string& path, Tolerances base = {});
std::vector<std::pair<std::string, std::string>> describe(const Tolerances& tol);

}  // namespace frontal
