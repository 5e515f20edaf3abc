#pragma once

#include <array>
#include <string>

namespace frontal {

struct Domain {
  double a1 = -1, b1 = 1, a2 = -1, b2 = 1;

  bool contains(double u1, double u2) const { return u1 >= a1 && u1 <= b1 && u2 >= a2 && u2 <= b2; }
};

struct Grid {
  Domain domain;
  int nx = 101, ny = 101;

  double u1(int i) const { return nx == 1 ? domain.a1 : domain.a1 + (domain.b1 - domain.a1) * i / (nx - 1); }
  double u2(int j) const { return ny == 1 ? domain.a2 : domain.a2 + (domain.b2 - domain.a2) * j / (ny - 1); }
  int size() const { return nx * ny; }
};

using Vec3 = std::array<double, 3>;
using Mat2 = std::array<std::array<double, 2>, 2>;

}  // namespace frontal
