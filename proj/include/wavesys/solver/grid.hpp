#pragma once

#include <cmath>
#include <cstdint>
#include <ostream>
#include <string>
#include <vector>

#include "wavesys/errors.hpp"
#include "wavesys/geometry.hpp"

namespace wavesys::solver {

enum class BoundaryMode { Periodic, ConstantExtension };

// Uniform space-time discretization for one solve. Periodic grids store
// cells points per axis (the right edge wraps), constant-extension grids
// store cells+1 points and clamp neighbors at the faces.
struct Grid {
  Box box;
  int n = 1;
  std::array<int, 3> cells{64, 1, 1};
  double tau = 0;
  int steps = 0;
  BoundaryMode boundary = BoundaryMode::Periodic;
  double cfl_safety = 0.45;

  double h(int axis) const { return box.extent(axis) / cells[axis]; }
  double h_min() const {
    double m = h(0);
    for (int a = 1; a < n; ++a) m = std::min(m, h(a));
    return m;
  }
  // Worst-case plane-wave CFL combination over the axes.
  double inv_h_norm() const {
    double s = 0;
    for (int a = 0; a < n; ++a) s += 1.0 / (h(a) * h(a));
    return std::sqrt(s);
  }
  int points(int axis) const {
    return boundary == BoundaryMode::Periodic ? cells[axis] : cells[axis] + 1;
  }
  std::int64_t npoints() const {
    std::int64_t p = 1;
    for (int a = 0; a < n; ++a) p *= points(a);
    return p;
  }
  double x(int axis, int i) const { return box.lo[axis] + i * h(axis); }
  double t(int level) const { return level * tau; }
  double t_end() const { return steps * tau; }

  int wrap(int i, int axis) const {
    const int p = points(axis);
    if (boundary == BoundaryMode::Periodic) {
      i %= p;
      return i < 0 ? i + p : i;
    }
    return std::min(std::max(i, 0), p - 1);
  }
};

// Time step from the CFL bound tau <= cfl_safety / (lambda_max * |1/h|),
// then rounded down so the horizon is hit exactly.
Grid make_grid(const Box& box, std::array<int, 3> cells, double horizon, double lambda_max,
               double cfl_safety = 0.45, BoundaryMode boundary = BoundaryMode::Periodic);

struct SolveDiagnostics {
  double lambda_max = 0;
  double cfl_number = 0;
  int steps = 0;
  double max_value = 0;
};

// Sampled solution fields for one epsilon: every time level is retained.
struct GridSolution {
  double eps = 0;
  Grid grid;
  int ncomp = 1;
  std::vector<double> data;  // [level][point][comp]
  double residual = 0;       // centered-difference equation residual, interior max
  SolveDiagnostics diag;

  double value(int level, std::int64_t point, int comp) const {
    return data[(static_cast<std::int64_t>(level) * grid.npoints() + point) * ncomp + comp];
  }
  double& value_ref(int level, std::int64_t point, int comp) {
    return data[(static_cast<std::int64_t>(level) * grid.npoints() + point) * ncomp + comp];
  }
  // Discrete L2 norm of one component at a time level.
  double l2(int level, int comp) const;
  // Central time derivative of a component (one-sided at the ends).
  double dt(int level, std::int64_t point, int comp) const;
};

// Text table: one header line with grid metadata, one row per grid point.
void write_solution_table(std::ostream& os, const GridSolution& sol,
                          const std::vector<std::string>& field_names);

}  // namespace wavesys::solver
