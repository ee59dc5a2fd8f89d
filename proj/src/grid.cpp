#include "wavesys/solver/grid.hpp"

#include <cmath>

namespace wavesys::solver {

Grid make_grid(const Box& box, std::array<int, 3> cells, double horizon, double lambda_max,
               double cfl_safety, BoundaryMode boundary) {
  if (horizon <= 0) throw ConfigError("make_grid: horizon must be positive");
  Grid g;
  g.box = box;
  g.n = box.n;
  g.cells = cells;
  g.boundary = boundary;
  g.cfl_safety = cfl_safety;
  for (int a = 0; a < g.n; ++a)
    if (cells[a] < 2) throw ConfigError("make_grid: need at least 2 cells per axis");
  const double lam = std::max(lambda_max, 1e-12);
  const double tau_bound = cfl_safety / (lam * g.inv_h_norm());
  g.steps = std::max(1, static_cast<int>(std::ceil(horizon / tau_bound - 1e-12)));
  g.tau = horizon / g.steps;
  return g;
}

double GridSolution::l2(int level, int comp) const {
  double cell = 1;
  for (int a = 0; a < grid.n; ++a) cell *= grid.h(a);
  double s = 0;
  for (std::int64_t p = 0; p < grid.npoints(); ++p) {
    const double v = value(level, p, comp);
    s += v * v;
  }
  return std::sqrt(s * cell);
}

double GridSolution::dt(int level, std::int64_t point, int comp) const {
  const double tau = grid.tau;
  if (level > 0 && level < grid.steps)
    return (value(level + 1, point, comp) - value(level - 1, point, comp)) / (2 * tau);
  if (level == 0)
    return (-3 * value(0, point, comp) + 4 * value(1, point, comp) - value(2, point, comp)) /
           (2 * tau);
  return (3 * value(level, point, comp) - 4 * value(level - 1, point, comp) +
          value(level - 2, point, comp)) /
         (2 * tau);
}

void write_solution_table(std::ostream& os, const GridSolution& sol,
                          const std::vector<std::string>& field_names) {
  const Grid& g = sol.grid;
  char buf[64];
  os << "# wavesys-table n=" << g.n << " cells=";
  for (int a = 0; a < g.n; ++a) os << (a ? "x" : "") << g.cells[a];
  os << " box=" << g.box.str() << " tau=" << g.tau << " steps=" << g.steps << " boundary="
     << (g.boundary == BoundaryMode::Periodic ? "periodic" : "constant") << " eps=" << sol.eps
     << " fields=";
  for (size_t i = 0; i < field_names.size(); ++i) os << (i ? "," : "") << field_names[i];
  os << "\n";
  os << "t";
  for (int a = 0; a < g.n; ++a) os << " x" << a + 1;
  for (const auto& f : field_names) os << " " << f;
  os << "\n";
  for (int level = 0; level <= sol.grid.steps; ++level) {
    std::array<int, 3> ix{};
    for (std::int64_t p = 0; p < g.npoints(); ++p) {
      std::snprintf(buf, sizeof buf, "%.17g", g.t(level));
      os << buf;
      for (int a = 0; a < g.n; ++a) {
        std::snprintf(buf, sizeof buf, " %.17g", g.x(a, ix[a]));
        os << buf;
      }
      for (int c = 0; c < sol.ncomp; ++c) {
        std::snprintf(buf, sizeof buf, " %.17g", sol.value(level, p, c));
        os << buf;
      }
      os << "\n";
      for (int a = g.n - 1; a >= 0; --a) {
        if (++ix[a] < g.points(a)) break;
        ix[a] = 0;
      }
    }
  }
}

}  // namespace wavesys::solver
