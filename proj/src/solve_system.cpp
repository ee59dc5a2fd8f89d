#include <cmath>
#include <vector>

#include "wavesys/linalg/eig.hpp"
#include "wavesys/rng.hpp"
#include "wavesys/solver/solve.hpp"

namespace wavesys::solver {

using transform::HyperbolicSystem;

namespace {

// Multi-index walker over the grid points.
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

// Flat index of the neighbor shifted by delta on one axis.
std::int64_t neighbor_flat(const Grid& g, const std::array<std::int64_t, 3>& stride,
                           std::int64_t flat, const std::array<int, 3>& ix, int axis,
                           int delta) {
  const int j = g.wrap(ix[axis] + delta, axis);
  return flat + (j - ix[axis]) * stride[axis];
}

struct SystemSlice {
  std::vector<double> A;  // [(pt*n + i)*m*m + r*m + c]
  std::vector<double> B;  // [pt*m*m + r*m + c]
  std::vector<double> F;  // [pt*m + r]
};

SystemSlice sample_system(const HyperbolicSystem& s, double eps, const Grid& grid, double t) {
  const int n = s.n, m = n + 2;
  const std::int64_t np = grid.npoints();
  SystemSlice slice;
  slice.A.resize(np * n * m * m);
  slice.B.resize(np * m * m);
  slice.F.resize(np * m);
  PointIter it(grid);
  do {
    const SpaceVec x = it.x();
    for (int i = 0; i < n; ++i) {
      const Mat a = s.A[i].eval(eps, t, x);
      std::copy_n(a.data(), m * m, slice.A.data() + (it.flat * n + i) * m * m);
    }
    const Mat b = s.B.eval(eps, t, x);
    std::copy_n(b.data(), m * m, slice.B.data() + it.flat * m * m);
    const Mat f = s.F.eval(eps, t, x);
    std::copy_n(f.data(), m, slice.F.data() + it.flat * m);
  } while (it.advance());
  return slice;
}

void check_finite_or_throw(double maxval, double threshold, int step) {
  if (!std::isfinite(maxval) || maxval > threshold)
    throw BlowUpError("solve: solution reached " + std::to_string(maxval) + " at step " +
                      std::to_string(step) + "; non-hyperbolic data or CFL violation");
}

}  // namespace

double estimate_lambda_max(const HyperbolicSystem& s, double eps, const Grid& grid,
                           std::uint64_t seed, int directions) {
  const int n = s.n, m = n + 2;
  Rng rng(seed);
  std::vector<SpaceVec> dirs;
  if (n == 1) {
    dirs.push_back({1, 0, 0});
  } else {
    for (int d = 0; d < directions; ++d) dirs.push_back(rng.unit_vector(n));
  }
  double lam = 0;
  PointIter it(grid);
  do {
    const SpaceVec x = it.x();
    std::vector<Mat> As(n);
    for (int i = 0; i < n; ++i) As[i] = s.A[i].eval(eps, 0.0, x);
    for (const SpaceVec& xi : dirs) {
      Mat msum(m, m);
      for (int i = 0; i < n; ++i) {
        Mat term = As[i];
        term *= xi[i];
        msum += term;
      }
      const auto dec = linalg::sym_eig(linalg::SymMatrix::from_mat(msum, 1e-8));
      lam = std::max(lam, std::max(std::abs(dec.eigenvalue(0)), std::abs(dec.eigenvalue(m - 1))));
    }
  } while (it.advance());
  return 1.2 * lam;
}

double estimate_lambda_max(const transform::WaveProblem& p, double eps, const Grid& grid,
                           std::uint64_t seed, int directions) {
  const int n = p.n, m = n + 2;
  Rng rng(seed);
  std::vector<SpaceVec> dirs;
  if (n == 1) {
    dirs.push_back({1, 0, 0});
  } else {
    for (int d = 0; d < directions; ++d) dirs.push_back(rng.unit_vector(n));
  }
  double lam = 0;
  PointIter it(grid);
  do {
    const SpaceVec x = it.x();
    const Mat S = linalg::spd_sqrt(linalg::SymMatrix::from_mat(p.R.eval(eps, 0.0, x), 1e-8))
                      .to_mat();
    const Mat g = p.g.eval(eps, 0.0, x);
    for (const SpaceVec& xi : dirs) {
      Mat msum(m, m);
      double gxi = 0;
      for (int i = 0; i < n; ++i) gxi += xi[i] * g(i, 0);
      msum(1, 1) = 2 * gxi;
      for (int j = 0; j < n; ++j) {
        double sxi = 0;
        for (int i = 0; i < n; ++i) sxi += xi[i] * S(i, j);
        msum(1, 2 + j) = sxi;
        msum(2 + j, 1) = sxi;
      }
      const auto dec = linalg::sym_eig(linalg::SymMatrix::from_mat(msum, 1e-8));
      lam = std::max(lam, std::max(std::abs(dec.eigenvalue(0)), std::abs(dec.eigenvalue(m - 1))));
    }
  } while (it.advance());
  return 1.2 * lam;
}

GridSolution solve_system(const HyperbolicSystem& s, const Grid& grid, double eps,
                          const SolveOptions& opt) {
  s.check_shapes();
  if (grid.n != s.n) throw ConfigError("solve_system: grid dimension mismatch");
  const int n = s.n, m = n + 2;
  const std::int64_t np = grid.npoints();
  const double tau = grid.tau;

  const double lambda_max = opt.lambda_max_hint > 0
                                ? opt.lambda_max_hint
                                : estimate_lambda_max(s, eps, grid, opt.seed);
  const double cfl = tau * lambda_max * grid.inv_h_norm();
  if (opt.check_cfl && cfl > grid.cfl_safety * (1 + 1e-9))
    throw CflError("solve_system: CFL number " + std::to_string(cfl) + " exceeds " +
                   std::to_string(grid.cfl_safety));

  const bool time_dep = [&] {
    bool td = s.B.time_dependent() || s.F.time_dependent();
    for (const auto& a : s.A) td = td || a.time_dependent();
    return td;
  }();

  GridSolution sol;
  sol.eps = eps;
  sol.grid = grid;
  sol.ncomp = m;
  sol.data.resize(static_cast<std::int64_t>(grid.steps + 1) * np * m);
  sol.diag.lambda_max = lambda_max;
  sol.diag.cfl_number = cfl;
  sol.diag.steps = grid.steps;

  // Initial data.
  double init_max = 0;
  {
    PointIter it(grid);
    do {
      const Mat w0 = s.w0.eval(eps, 0.0, it.x());
      for (int c = 0; c < m; ++c) {
        sol.value_ref(0, it.flat, c) = w0(c, 0);
        init_max = std::max(init_max, std::abs(w0(c, 0)));
      }
    } while (it.advance());
  }

  SystemSlice slice_n = sample_system(s, eps, grid, 0.0);
  SystemSlice slice_half = time_dep ? sample_system(s, eps, grid, 0.5 * tau) : SystemSlice{};
  const double f_scale = [&] {
    double fs = 0;
    for (double v : slice_n.F) fs = std::max(fs, std::abs(v));
    return fs;
  }();
  const double blow_threshold =
      opt.blowup_factor * (std::max(init_max, 1.0) + grid.t_end() * f_scale);

  const auto stride = strides_of(grid);
  std::vector<double> w(np * m), wnew(np * m);
  std::copy_n(sol.data.data(), np * m, w.data());

  std::vector<double> lterm(np * m);               // full L(w) at cell centers
  std::vector<double> axis_term(n * np * m);       // A_i (D0 w)_i per axis
  std::vector<double> faces(n * np * m);           // face_i between pt and pt+e_i

  for (int step = 0; step < grid.steps; ++step) {
    const double t = step * tau;
    if (time_dep && step > 0) {
      slice_n = sample_system(s, eps, grid, t);
      slice_half = sample_system(s, eps, grid, t + 0.5 * tau);
    }
    const SystemSlice& cn = slice_n;
    const SystemSlice& ch = time_dep ? slice_half : slice_n;

    // Center terms: axis_term[i] = A_i D0_i w, lterm = sum_i axis_term + Bw - F.
    {
      PointIter it(grid);
      do {
        const std::int64_t pt = it.flat;
        double* lt = lterm.data() + pt * m;
        const double* bp = cn.B.data() + pt * m * m;
        const double* wp = w.data() + pt * m;
        for (int r = 0; r < m; ++r) {
          double acc = -cn.F[pt * m + r];
          for (int c = 0; c < m; ++c) acc += bp[r * m + c] * wp[c];
          lt[r] = acc;
        }
        for (int i = 0; i < n; ++i) {
          const std::int64_t pp = neighbor_flat(grid, stride, pt, it.ix, i, +1);
          const std::int64_t pm = neighbor_flat(grid, stride, pt, it.ix, i, -1);
          const double inv2h = 1.0 / (2 * grid.h(i));
          const double* ap = cn.A.data() + (pt * n + i) * m * m;
          double* at = axis_term.data() + (i * np + pt) * m;
          for (int r = 0; r < m; ++r) {
            double acc = 0;
            for (int c = 0; c < m; ++c)
              acc += ap[r * m + c] * (w[pp * m + c] - w[pm * m + c]) * inv2h;
            at[r] = acc;
            lt[r] += acc;
          }
        }
      } while (it.advance());
    }

    // Half-step face states (Lax-Friedrichs flavored predictor).
    {
      PointIter it(grid);
      do {
        const std::int64_t pt = it.flat;
        for (int i = 0; i < n; ++i) {
          const std::int64_t pp = neighbor_flat(grid, stride, pt, it.ix, i, +1);
          const double invh = 1.0 / grid.h(i);
          const double* a0 = cn.A.data() + (pt * n + i) * m * m;
          const double* a1 = cn.A.data() + (pp * n + i) * m * m;
          double* face = faces.data() + (i * np + pt) * m;
          for (int r = 0; r < m; ++r) {
            double adv = 0;
            for (int c = 0; c < m; ++c)
              adv += 0.5 * (a0[r * m + c] + a1[r * m + c]) * (w[pp * m + c] - w[pt * m + c]) *
                     invh;
            const double tang0 = lterm[pt * m + r] - axis_term[(i * np + pt) * m + r];
            const double tang1 = lterm[pp * m + r] - axis_term[(i * np + pp) * m + r];
            face[r] = 0.5 * (w[pt * m + r] + w[pp * m + r]) +
                      0.5 * tau * (adv + 0.5 * (tang0 + tang1));
          }
        }
      } while (it.advance());
    }

    // Midpoint corrector with coefficients at t + tau/2.
    double step_max = 0;
    {
      PointIter it(grid);
      do {
        const std::int64_t pt = it.flat;
        double wbar[kMaxOrder]{};
        double flux[kMaxOrder]{};
        for (int i = 0; i < n; ++i) {
          const std::int64_t pm = neighbor_flat(grid, stride, pt, it.ix, i, -1);
          // At a clamped boundary the lower face is the degenerate state
          // between the ghost copy and the cell itself.
          const bool clamped = grid.boundary == BoundaryMode::ConstantExtension &&
                               it.ix[i] == 0;
          const double* fp = faces.data() + (i * np + pt) * m;
          double fm_local[kMaxOrder];
          const double* fm;
          if (clamped) {
            for (int r = 0; r < m; ++r) {
              const double tang = lterm[pt * m + r] - axis_term[(i * np + pt) * m + r];
              fm_local[r] = w[pt * m + r] + 0.5 * tau * tang;
            }
            fm = fm_local;
          } else {
            fm = faces.data() + (i * np + pm) * m;
          }
          const double invh = 1.0 / grid.h(i);
          const double* ah = ch.A.data() + (pt * n + i) * m * m;
          for (int r = 0; r < m; ++r) {
            double acc = 0;
            for (int c = 0; c < m; ++c) acc += ah[r * m + c] * (fp[c] - fm[c]) * invh;
            flux[r] += acc;
            wbar[r] += fp[r] + fm[r];
          }
        }
        const double* bh = ch.B.data() + pt * m * m;
        for (int r = 0; r < m; ++r) {
          double src = -ch.F[pt * m + r];
          for (int c = 0; c < m; ++c) src += bh[r * m + c] * (wbar[c] / (2 * n));
          const double v = w[pt * m + r] + tau * (flux[r] + src);
          wnew[pt * m + r] = v;
          step_max = std::max(step_max, std::abs(v));
        }
      } while (it.advance());
    }

    check_finite_or_throw(step_max, blow_threshold, step + 1);
    sol.diag.max_value = std::max(sol.diag.max_value, step_max);
    std::swap(w, wnew);
    std::copy_n(w.data(), np * m, sol.data.data() + static_cast<std::int64_t>(step + 1) * np * m);
  }

  // A-posteriori residual: centered discrete equation on sampled levels.
  const int stride_l = opt.residual_stride > 0 ? opt.residual_stride
                                               : std::max(1, grid.steps / 16);
  double res = 0;
  for (int level = 1; level + 1 <= grid.steps; level += stride_l) {
    const SystemSlice sl = time_dep ? sample_system(s, eps, grid, level * tau) : slice_n;
    PointIter it(grid);
    do {
      bool interior = true;
      if (grid.boundary == BoundaryMode::ConstantExtension)
        for (int a = 0; a < n; ++a)
          interior = interior && it.ix[a] >= 2 && it.ix[a] <= grid.points(a) - 3;
      if (!interior) continue;
      const std::int64_t pt = it.flat;
      for (int r = 0; r < m; ++r) {
        double acc = -(sol.value(level + 1, pt, r) - sol.value(level - 1, pt, r)) / (2 * tau);
        const double* bp = sl.B.data() + pt * m * m;
        for (int c = 0; c < m; ++c) acc += bp[r * m + c] * sol.value(level, pt, c);
        acc -= sl.F[pt * m + r];
        for (int i = 0; i < n; ++i) {
          const std::int64_t pp = neighbor_flat(grid, stride, pt, it.ix, i, +1);
          const std::int64_t pm = neighbor_flat(grid, stride, pt, it.ix, i, -1);
          const double* ap = sl.A.data() + (pt * n + i) * m * m;
          for (int c = 0; c < m; ++c)
            acc += ap[r * m + c] * (sol.value(level, pp, c) - sol.value(level, pm, c)) /
                   (2 * grid.h(i));
        }
        res = std::max(res, std::abs(acc));
      }
    } while (it.advance());
  }
  sol.residual = res;
  return sol;
}

}  // namespace wavesys::solver
