#pragma once

#include <vector>

#include "capflow/errors.hpp"

namespace capflow {

/// Uniform grid on [-b, b]: n interior nodes plus the two wall nodes.
/// x_i = -b + i h for i = 0..n+1 with h = 2b/(n+1); x_0 = -b and
/// x_{n+1} = b exactly.
struct Grid {
  double b = 0.0;
  int n = 0;
  double h = 0.0;

  double x(int i) const { return i == n + 1 ? b : -b + h * static_cast<double>(i); }
  int total() const { return n + 2; }
  bool same(const Grid& other) const { return b == other.b && n == other.n; }
};

Grid make_grid(double b, int n);

/// Nodal field values (including wall nodes) at a moment in time.
struct FieldState {
  Grid grid;
  std::vector<double> u;  // size grid.total()
  double t = 0.0;
};

}  // namespace capflow
