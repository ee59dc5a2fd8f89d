#include <cmath>
#include <vector>

#include "wavesys/linalg/eig.hpp"
#include "wavesys/linfit.hpp"
#include "wavesys/solver/solve.hpp"
#include "wavesys/transform/transform.hpp"

namespace wavesys::solver {

using transform::WaveProblem;

namespace {

struct PointIter {
  const Grid& grid;
  std::array<int, 3> ix{};
  std::int64_t flat = 0;

  explicit PointIter(const Grid& g) : grid(g) {}
  bool advance() {
    for (int a = grid.n - 1; a >= 0; --a) {
      if (++ix[a] < grid.points(a)) {
        ++flat;
        return true;
      }
      ix[a] = 0;
    }
    ++flat;
    return false;
  }
  SpaceVec x() const {
    SpaceVec p{};
    for (int a = 0; a < grid.n; ++a) p[a] = grid.x(a, ix[a]);
    return p;
  }
};

std::array<std::int64_t, 3> strides_of(const Grid& g) {
  std::array<std::int64_t, 3> s{0, 0, 0};
  std::int64_t acc = 1;
  for (int a = g.n - 1; a >= 0; --a) {
    s[a] = acc;
    acc *= g.points(a);
  }
  return s;
}

std::int64_t neighbor_flat(const Grid& g, const std::array<std::int64_t, 3>& stride,
                           std::int64_t flat, const std::array<int, 3>& ix, int axis,
                           int delta) {
  const int j = g.wrap(ix[axis] + delta, axis);
  return flat + (j - ix[axis]) * stride[axis];
}

// Wave-equation coefficients sampled at one time level.
struct WaveSlice {
  std::vector<double> R;  // [pt*n*n]
  std::vector<double> g;  // [pt*n]
  std::vector<double> a;  // [pt]
  std::vector<double> b;  // [pt*n]
  std::vector<double> c;  // [pt]
  std::vector<double> f;  // [pt]
};

WaveSlice sample_wave(const WaveProblem& p, double eps, const Grid& grid, double t) {
  const int n = p.n;
  const std::int64_t np = grid.npoints();
  WaveSlice s;
  s.R.resize(np * n * n);
  s.g.resize(np * n);
  s.a.resize(np);
  s.b.resize(np * n);
  s.c.resize(np);
  s.f.resize(np);
  PointIter it(grid);
  do {
    const SpaceVec x = it.x();
    const Mat r = p.R.eval(eps, t, x);
    std::copy_n(r.data(), n * n, s.R.data() + it.flat * n * n);
    const Mat g = p.g.eval(eps, t, x);
    std::copy_n(g.data(), n, s.g.data() + it.flat * n);
    const Mat b = p.b.eval(eps, t, x);
    std::copy_n(b.data(), n, s.b.data() + it.flat * n);
    s.a[it.flat] = p.a.eval(eps, t, x).as_scalar();
    s.c[it.flat] = p.c.eval(eps, t, x).as_scalar();
    s.f[it.flat] = p.f.eval(eps, t, x).as_scalar();
  } while (it.advance());
  return s;
}

}  // namespace

GridSolution solve_wave(const WaveProblem& p, const Grid& grid, double eps,
                        const SolveOptions& opt) {
  p.check_shapes();
  if (grid.n != p.n) throw ConfigError("solve_wave: grid dimension mismatch");
  const int n = p.n;
  const std::int64_t np = grid.npoints();
  const double tau = grid.tau;

  const double lambda_max = opt.lambda_max_hint > 0
                                ? opt.lambda_max_hint
                                : estimate_lambda_max(p, eps, grid, opt.seed);
  const double cfl = tau * lambda_max * grid.inv_h_norm();
  if (opt.check_cfl && cfl > grid.cfl_safety * (1 + 1e-9))
    throw CflError("solve_wave: CFL number " + std::to_string(cfl) + " exceeds " +
                   std::to_string(grid.cfl_safety));

  const bool time_dep = p.R.time_dependent() || p.g.time_dependent() ||
                        p.a.time_dependent() || p.b.time_dependent() ||
                        p.c.time_dependent() || p.f.time_dependent();

  GridSolution sol;
  sol.eps = eps;
  sol.grid = grid;
  sol.ncomp = 1;
  sol.data.resize(static_cast<std::int64_t>(grid.steps + 1) * np);
  sol.diag.lambda_max = lambda_max;
  sol.diag.cfl_number = cfl;
  sol.diag.steps = grid.steps;

  const auto stride = strides_of(grid);
  std::vector<double> u_prev(np), u_cur(np), u_next(np), u1(np);

  double init_max = 0;
  {
    PointIter it(grid);
    do {
      u_prev[it.flat] = p.u0.eval(eps, 0.0, it.x()).as_scalar();
      u1[it.flat] = p.u1.eval(eps, 0.0, it.x()).as_scalar();
      init_max = std::max({init_max, std::abs(u_prev[it.flat]), std::abs(u1[it.flat])});
    } while (it.advance());
  }
  std::copy_n(u_prev.data(), np, sol.data.data());

  WaveSlice slice = sample_wave(p, eps, grid, 0.0);
  const double f_scale = [&] {
    double fs = 0;
    for (double v : slice.f) fs = std::max(fs, std::abs(v));
    return fs;
  }();
  const double blow_threshold =
      opt.blowup_factor * (std::max(init_max, 1.0) + grid.t_end() * grid.t_end() * f_scale +
                           grid.t_end() * init_max);

  double g_max = 0;
  for (double v : slice.g) g_max = std::max(g_max, std::abs(v));

  // Spatial operator pieces at one point for a given field.
  const auto d0 = [&](const std::vector<double>& u, std::int64_t pt,
                      const std::array<int, 3>& ix, int axis) {
    const std::int64_t pp = neighbor_flat(grid, stride, pt, ix, axis, +1);
    const std::int64_t pm = neighbor_flat(grid, stride, pt, ix, axis, -1);
    return (u[pp] - u[pm]) / (2 * grid.h(axis));
  };
  const auto second = [&](const std::vector<double>& u, std::int64_t pt,
                          const std::array<int, 3>& ix, int i, int j) {
    if (i == j) {
      const std::int64_t pp = neighbor_flat(grid, stride, pt, ix, i, +1);
      const std::int64_t pm = neighbor_flat(grid, stride, pt, ix, i, -1);
      return (u[pp] - 2 * u[pt] + u[pm]) / (grid.h(i) * grid.h(i));
    }
    // Mixed second derivative via the four-corner stencil.
    const std::int64_t a1 = neighbor_flat(grid, stride, pt, ix, i, +1);
    const std::int64_t a2 = neighbor_flat(grid, stride, pt, ix, i, -1);
    std::array<int, 3> cix = ix;
    cix[i] = grid.wrap(ix[i] + 1, i);
    const std::int64_t qpp = neighbor_flat(grid, stride, a1, cix, j, +1);
    const std::int64_t qpm = neighbor_flat(grid, stride, a1, cix, j, -1);
    cix[i] = grid.wrap(ix[i] - 1, i);
    const std::int64_t qmp = neighbor_flat(grid, stride, a2, cix, j, +1);
    const std::int64_t qmm = neighbor_flat(grid, stride, a2, cix, j, -1);
    return (u[qpp] - u[qpm] - u[qmp] + u[qmm]) / (4 * grid.h(i) * grid.h(j));
  };

  const auto spatial_terms = [&](const std::vector<double>& u, std::int64_t pt,
                                 const std::array<int, 3>& ix) {
    double acc = 0;
    const double* rp = slice.R.data() + pt * n * n;
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) acc += rp[i * n + j] * second(u, pt, ix, i, j);
    const double* bp = slice.b.data() + pt * n;
    for (int i = 0; i < n; ++i) acc += bp[i] * d0(u, pt, ix, i);
    acc += slice.c[pt] * u[pt];
    return acc;
  };

  // First step by Taylor expansion: u^1 = u0 + tau u1 + tau^2/2 u_tt(0),
  // with u_tt from the equation.
  {
    PointIter it(grid);
    do {
      const std::int64_t pt = it.flat;
      double utt = spatial_terms(u_prev, pt, it.ix) + slice.a[pt] * u1[pt] - slice.f[pt];
      const double* gp = slice.g.data() + pt * n;
      for (int i = 0; i < n; ++i) utt += 2 * gp[i] * d0(u1, pt, it.ix, i);
      u_cur[pt] = u_prev[pt] + tau * u1[pt] + 0.5 * tau * tau * utt;
    } while (it.advance());
  }
  std::copy_n(u_cur.data(), np, sol.data.data() + np);

  std::vector<double> rhs(np);
  for (int step = 1; step < grid.steps; ++step) {
    const double t = step * tau;
    if (time_dep) {
      slice = sample_wave(p, eps, grid, t);
      g_max = 0;
      for (double v : slice.g) g_max = std::max(g_max, std::abs(v));
    }

    // kappa u^{n+1} - (g_i / tau) D0_i u^{n+1} = rhs
    {
      PointIter it(grid);
      do {
        const std::int64_t pt = it.flat;
        double acc = (2 * u_cur[pt] - u_prev[pt]) / (tau * tau);
        acc += spatial_terms(u_cur, pt, it.ix);
        acc -= slice.a[pt] * u_prev[pt] / (2 * tau);
        acc -= slice.f[pt];
        const double* gp = slice.g.data() + pt * n;
        for (int i = 0; i < n; ++i) acc -= gp[i] * d0(u_prev, pt, it.ix, i) / tau;
        rhs[pt] = acc;
      } while (it.advance());
    }

    double step_max = 0;
    double a_max = 0;
    for (double v : slice.a) a_max = std::max(a_max, std::abs(v));
    if (a_max * tau >= 2.0)
      throw CflError("solve_wave: zeroth-order term too stiff for tau (|a| tau >= 2)");
    if (g_max < 1e-14) {
      PointIter it(grid);
      do {
        const std::int64_t pt = it.flat;
        const double kappa = 1.0 / (tau * tau) - slice.a[pt] / (2 * tau);
        u_next[pt] = rhs[pt] / kappa;
        step_max = std::max(step_max, std::abs(u_next[pt]));
      } while (it.advance());
    } else {
      // The mixed term couples the new level; iterate the fixed point,
      // contraction factor ~ |g| tau / h under the CFL bound.
      std::vector<double> iter = u_cur, next(np);
      double delta = 0;
      for (int sweep = 0; sweep < 100; ++sweep) {
        delta = 0;
        PointIter it(grid);
        do {
          const std::int64_t pt = it.flat;
          const double kappa = 1.0 / (tau * tau) - slice.a[pt] / (2 * tau);
          double acc = rhs[pt];
          const double* gp = slice.g.data() + pt * n;
          for (int i = 0; i < n; ++i) acc += gp[i] * d0(iter, pt, it.ix, i) / tau;
          next[pt] = acc / kappa;
          delta = std::max(delta, std::abs(next[pt] - iter[pt]));
        } while (it.advance());
        std::swap(iter, next);
        if (delta < 1e-13 * std::max(1.0, init_max)) break;
      }
      u_next = iter;
      for (double v : u_next) step_max = std::max(step_max, std::abs(v));
    }

    if (!std::isfinite(step_max) || step_max > blow_threshold)
      throw BlowUpError("solve_wave: solution reached " + std::to_string(step_max) +
                        " at step " + std::to_string(step + 1) +
                        "; non-hyperbolic data or CFL violation");
    sol.diag.max_value = std::max(sol.diag.max_value, step_max);

    std::swap(u_prev, u_cur);
    std::swap(u_cur, u_next);
    std::copy_n(u_cur.data(), np, sol.data.data() + static_cast<std::int64_t>(step + 1) * np);
  }

  // Centered-equation residual on sampled interior levels.
  const int stride_l = opt.residual_stride > 0 ? opt.residual_stride
                                               : std::max(1, grid.steps / 16);
  double res = 0;
  for (int level = 1; level + 1 <= grid.steps; level += stride_l) {
    const WaveSlice sl = time_dep ? sample_wave(p, eps, grid, level * tau) : slice;
    std::vector<double> ul(np), um(np), up(np);
    for (std::int64_t q = 0; q < np; ++q) {
      um[q] = sol.value(level - 1, q, 0);
      ul[q] = sol.value(level, q, 0);
      up[q] = sol.value(level + 1, q, 0);
    }
    PointIter it(grid);
    do {
      bool interior = true;
      if (grid.boundary == BoundaryMode::ConstantExtension)
        for (int a2 = 0; a2 < n; ++a2)
          interior = interior && it.ix[a2] >= 2 && it.ix[a2] <= grid.points(a2) - 3;
      if (!interior) continue;
      const std::int64_t pt = it.flat;
      double acc = -(up[pt] - 2 * ul[pt] + um[pt]) / (tau * tau);
      const double* rp = sl.R.data() + pt * n * n;
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) acc += rp[i * n + j] * second(ul, pt, it.ix, i, j);
      const double* gp = sl.g.data() + pt * n;
      for (int i = 0; i < n; ++i)
        acc += gp[i] * (d0(up, pt, it.ix, i) - d0(um, pt, it.ix, i)) / tau;
      acc += sl.a[pt] * (up[pt] - um[pt]) / (2 * tau);
      const double* bp = sl.b.data() + pt * n;
      for (int i = 0; i < n; ++i) acc += bp[i] * d0(ul, pt, it.ix, i);
      acc += sl.c[pt] * ul[pt] - sl.f[pt];
      res = std::max(res, std::abs(acc));
    } while (it.advance());
  }
  sol.residual = res;
  return sol;
}

EquivalenceReport equivalence_check(const WaveProblem& p, const Grid& finest, double eps,
                                    int levels, const SolveOptions& opt) {
  if (levels < 2) throw ConfigError("equivalence_check: need at least 2 refinement levels");
  const transform::HyperbolicSystem sys = wave_to_system(p);

  EquivalenceReport rep;
  rep.eps = eps;

  SolveOptions level_opt = opt;
  if (level_opt.lambda_max_hint <= 0)
    level_opt.lambda_max_hint = estimate_lambda_max(sys, eps, finest, opt.seed);

  for (int lvl = 0; lvl < levels; ++lvl) {
    const int factor = 1 << (levels - 1 - lvl);
    std::array<int, 3> cells{1, 1, 1};
    for (int a = 0; a < finest.n; ++a) {
      if (finest.cells[a] % factor != 0)
        throw ConfigError("equivalence_check: cells not divisible by the refinement factor");
      cells[a] = finest.cells[a] / factor;
    }
    const Grid grid = make_grid(finest.box, cells, finest.t_end(), level_opt.lambda_max_hint,
                                finest.cfl_safety, finest.boundary);
    const GridSolution ws = solve_system(sys, grid, eps, level_opt);
    const GridSolution uw = solve_wave(p, grid, eps, level_opt);

    double cell = 1;
    for (int a = 0; a < grid.n; ++a) cell *= grid.h(a);

    // (i) L2 of u_system - u_wave at the horizon.
    double disc2 = 0;
    for (std::int64_t q = 0; q < grid.npoints(); ++q) {
      const double d = ws.value(grid.steps, q, 0) - uw.value(grid.steps, q, 0);
      disc2 += d * d;
    }
    rep.u_discrepancy.push_back(std::sqrt(disc2 * cell));

    // (ii) w-relation residual from the system solution alone at the last
    // interior level: z vs du/dt and v vs S grad u.
    const int lstar = std::max(1, grid.steps - 1);
    const auto stride = strides_of(grid);
    double wres2 = 0;
    PointIter it(grid);
    do {
      bool interior = true;
      if (grid.boundary == BoundaryMode::ConstantExtension)
        for (int a2 = 0; a2 < grid.n; ++a2)
          interior = interior && it.ix[a2] >= 1 && it.ix[a2] <= grid.points(a2) - 2;
      if (!interior) continue;
      const std::int64_t pt = it.flat;
      const double zres = ws.value(lstar, pt, 1) - ws.dt(lstar, pt, 0);
      double acc = zres * zres;
      const Mat S = linalg::spd_sqrt(
                        linalg::SymMatrix::from_mat(p.R.eval(eps, grid.t(lstar), it.x()), 1e-8))
                        .to_mat();
      for (int i = 0; i < grid.n; ++i) {
        double sgrad = 0;
        for (int j = 0; j < grid.n; ++j) {
          const std::int64_t pp = neighbor_flat(grid, stride, pt, it.ix, j, +1);
          const std::int64_t pm = neighbor_flat(grid, stride, pt, it.ix, j, -1);
          const double du = (ws.value(lstar, pp, 0) - ws.value(lstar, pm, 0)) / (2 * grid.h(j));
          sgrad += S(i, j) * du;
        }
        const double vres = ws.value(lstar, pt, 2 + i) - sgrad;
        acc += vres * vres;
      }
      wres2 += acc;
    } while (it.advance());
    rep.w_residual.push_back(std::sqrt(wres2 * cell));
    rep.hs.push_back(grid.h_min());
  }

  std::vector<double> logh, logu, logw;
  for (size_t i = 0; i < rep.hs.size(); ++i) {
    logh.push_back(std::log(rep.hs[i]));
    logu.push_back(std::log(std::max(rep.u_discrepancy[i], 1e-300)));
    logw.push_back(std::log(std::max(rep.w_residual[i], 1e-300)));
  }
  rep.u_order = linear_fit(logh, logu).slope;
  rep.w_order = linear_fit(logh, logw).slope;
  return rep;
}

}  // namespace wavesys::solver
