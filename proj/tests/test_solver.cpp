#include <doctest.h>

#include <cmath>
#include <functional>
#include <sstream>

#include "wavesys/linfit.hpp"
#include "wavesys/solver/solve.hpp"
#include "wavesys/transform/transform.hpp"

using namespace wavesys;
using namespace wavesys::solver;
using genfunc::CoefficientNet;
using transform::HyperbolicSystem;
using transform::WaveProblem;

namespace {

CoefficientNet scalar_net(int n, std::function<double(double, const SpaceVec&)> f,
                          bool time_dep, const std::string& label) {
  return CoefficientNet::closed_form(
      n, 1, 1, [f](double, double t, const SpaceVec& x) { return Mat::scalar(f(t, x)); },
      time_dep, label);
}

WaveProblem blank_problem(int n, const Box& box, double horizon) {
  WaveProblem p;
  p.n = n;
  p.domain = box;
  p.horizon = horizon;
  p.R = CoefficientNet::constant(n, Mat::identity(n), "R");
  p.R.mark_spd();
  p.g = CoefficientNet::constant(n, Mat(n, 1), "g");
  p.a = CoefficientNet::constant_scalar(n, 0.0, "a");
  p.b = CoefficientNet::constant(n, Mat(n, 1), "b");
  p.c = CoefficientNet::constant_scalar(n, 0.0, "c");
  p.f = CoefficientNet::constant_scalar(n, 0.0, "f");
  p.u0 = CoefficientNet::constant_scalar(n, 0.0, "u0");
  p.u1 = CoefficientNet::constant_scalar(n, 0.0, "u1");
  return p;
}

WaveProblem dalembert_problem() {
  WaveProblem p = blank_problem(1, Box::interval(0, 1), 1.0);
  p.u0 = scalar_net(1, [](double, const SpaceVec& x) { return std::sin(2 * M_PI * x[0]); },
                    false, "u0");
  return p;
}

double dalembert_exact(double t, double x) {
  return std::sin(2 * M_PI * x) * std::cos(2 * M_PI * t);
}

double l2_error_vs(const GridSolution& sol, int level, int comp,
                   const std::function<double(double, const SpaceVec&)>& exact) {
  const Grid& g = sol.grid;
  double cell = 1;
  for (int a = 0; a < g.n; ++a) cell *= g.h(a);
  double s = 0;
  std::array<int, 3> ix{};
  for (std::int64_t p = 0; p < g.npoints(); ++p) {
    SpaceVec x{};
    for (int a = 0; a < g.n; ++a) x[a] = g.x(a, ix[a]);
    const double d = sol.value(level, p, comp) - exact(g.t(level), x);
    s += d * d;
    for (int a = g.n - 1; a >= 0; --a) {
      if (++ix[a] < g.points(a)) break;
      ix[a] = 0;
    }
  }
  return std::sqrt(s * cell);
}

}  // namespace

TEST_CASE("zero data stays zero") {
  WaveProblem p = blank_problem(1, Box::interval(0, 1), 1.0);
  // Nontrivial coefficients, zero data.
  p.a = scalar_net(1, [](double, const SpaceVec& x) { return 0.3 * x[0]; }, false, "a");
  p.c = scalar_net(1, [](double, const SpaceVec& x) { return 1.0 - x[0]; }, false, "c");
  const HyperbolicSystem sys = wave_to_system(p);
  const Grid grid = make_grid(p.domain, {50, 1, 1}, 1.0, 1.2);

  const GridSolution ws = solve_system(sys, grid, 0.25);
  double wmax = 0;
  for (double v : ws.data) wmax = std::max(wmax, std::abs(v));
  CHECK(wmax <= 1e-13);

  const GridSolution uw = solve_wave(p, grid, 0.25);
  double umax = 0;
  for (double v : uw.data) umax = std::max(umax, std::abs(v));
  CHECK(umax <= 1e-13);
}

TEST_CASE("d'Alembert: system solver converges at second order") {
  const WaveProblem p = dalembert_problem();
  const HyperbolicSystem sys = wave_to_system(p);
  std::vector<double> logh, logerr;
  for (int cells : {25, 50, 100}) {
    const Grid grid = make_grid(p.domain, {cells, 1, 1}, 1.0, 1.2);
    const GridSolution sol = solve_system(sys, grid, 0.25, {});
    const double err = l2_error_vs(sol, grid.steps, 0, [](double t, const SpaceVec& x) {
      return dalembert_exact(t, x[0]);
    });
    logh.push_back(std::log(1.0 / cells));
    logerr.push_back(std::log(err));
  }
  const double order = linear_fit(logh, logerr).slope;
  CHECK(order >= 1.9);
  CHECK(std::exp(logerr.back()) <= 5e-3);
}

TEST_CASE("d'Alembert: wave solver converges at second order") {
  const WaveProblem p = dalembert_problem();
  std::vector<double> logh, logerr;
  for (int cells : {25, 50, 100}) {
    const Grid grid = make_grid(p.domain, {cells, 1, 1}, 1.0, 1.2);
    const GridSolution sol = solve_wave(p, grid, 0.25, {});
    const double err = l2_error_vs(sol, grid.steps, 0, [](double t, const SpaceVec& x) {
      return dalembert_exact(t, x[0]);
    });
    logh.push_back(std::log(1.0 / cells));
    logerr.push_back(std::log(err));
  }
  const double order = linear_fit(logh, logerr).slope;
  CHECK(order >= 1.9);
  CHECK(std::exp(logerr.back()) <= 5e-3);
}

TEST_CASE("damping reduces to the exact ODE solution") {
  WaveProblem p = blank_problem(1, Box::interval(0, 1), 1.0);
  p.a = CoefficientNet::constant_scalar(1, -1.0, "a");
  p.u1 = CoefficientNet::constant_scalar(1, 1.0, "u1");
  const HyperbolicSystem sys = wave_to_system(p);
  const Grid grid = make_grid(p.domain, {200, 1, 1}, 1.0, 1.2);
  const GridSolution sol = solve_system(sys, grid, 0.25);
  const double expect = 1.0 - std::exp(-1.0);
  for (std::int64_t q = 0; q < grid.npoints(); ++q)
    CHECK(sol.value(grid.steps, q, 0) == doctest::Approx(expect).epsilon(1e-4));

  const GridSolution uw = solve_wave(p, grid, 0.25);
  for (std::int64_t q = 0; q < grid.npoints(); ++q)
    CHECK(uw.value(grid.steps, q, 0) == doctest::Approx(expect).epsilon(1e-4));
}

TEST_CASE("manufactured steady state is preserved") {
  // u0 harmonic (linear), c constant, f = c u0: u stays u0 where the
  // boundary has not polluted the solution; the equation residual vanishes.
  WaveProblem p = blank_problem(1, Box::interval(-2, 2), 0.3);
  p.u0 = scalar_net(1, [](double, const SpaceVec& x) { return 0.3 * x[0] + 0.5; }, false, "u0");
  p.c = CoefficientNet::constant_scalar(1, 2.0, "c");
  p.f = scalar_net(1, [](double, const SpaceVec& x) { return 2.0 * (0.3 * x[0] + 0.5); },
                   false, "f");
  const Grid grid = make_grid(p.domain, {100, 1, 1}, 0.3, 1.2, 0.45,
                              BoundaryMode::ConstantExtension);
  const GridSolution sol = solve_wave(p, grid, 0.25);
  CHECK(sol.residual <= 1e-10);
  // Boundary corruption spreads one cell per step, i.e. at speed h/tau.
  const double reach = (grid.h(0) / grid.tau) * 0.3 + 4 * grid.h(0);
  for (std::int64_t q = 0; q < grid.npoints(); ++q) {
    const double x = grid.x(0, static_cast<int>(q));
    if (std::abs(x) <= 2.0 - reach)
      CHECK(std::abs(sol.value(grid.steps, q, 0) - (0.3 * x + 0.5)) <= 1e-10);
  }
}

TEST_CASE("two-dimensional standing wave converges for both solvers") {
  WaveProblem p = blank_problem(2, Box::cube(2, 0, 1), 0.5);
  p.u0 = scalar_net(
      2,
      [](double, const SpaceVec& x) {
        return std::sin(2 * M_PI * x[0]) * std::sin(2 * M_PI * x[1]);
      },
      false, "u0");
  const auto exact = [](double t, const SpaceVec& x) {
    return std::sin(2 * M_PI * x[0]) * std::sin(2 * M_PI * x[1]) *
           std::cos(2 * M_PI * std::sqrt(2.0) * t);
  };
  const HyperbolicSystem sys = wave_to_system(p);
  std::vector<double> err_sys, err_wave;
  for (int cells : {16, 32, 64}) {
    const Grid grid = make_grid(p.domain, {cells, cells, 1}, 0.5, 1.2 * std::sqrt(2.0));
    err_sys.push_back(l2_error_vs(solve_system(sys, grid, 0.25), grid.steps, 0, exact));
    err_wave.push_back(l2_error_vs(solve_wave(p, grid, 0.25), grid.steps, 0, exact));
  }
  CHECK(err_sys[0] / err_sys[1] >= 3.3);
  CHECK(err_sys[1] / err_sys[2] >= 3.3);
  CHECK(err_wave[0] / err_wave[1] >= 3.3);
  CHECK(err_wave[1] / err_wave[2] >= 3.3);
}

TEST_CASE("wave solver handles the mixed derivative term") {
  // Manufactured u = sin(pi x - 0.4 t) with nonzero g; f from the closed form.
  WaveProblem p = blank_problem(1, Box::interval(0, 2), 0.5);
  const auto R = [](const SpaceVec& x) { return 1.5 + 0.5 * std::sin(M_PI * x[0]); };
  const auto gc = [](const SpaceVec& x) { return 0.2 + 0.1 * std::cos(M_PI * x[0]); };
  const auto bc = [](const SpaceVec& x) { return 0.1 * std::sin(M_PI * x[0]); };
  p.R = CoefficientNet::closed_form(
      1, 1, 1, [R](double, double, const SpaceVec& x) { return Mat::scalar(R(x)); }, false,
      "R");
  p.R.mark_spd();
  p.g = CoefficientNet::closed_form(
      1, 1, 1, [gc](double, double, const SpaceVec& x) { return Mat::scalar(gc(x)); }, false,
      "g");
  p.a = CoefficientNet::constant_scalar(1, -0.3, "a");
  p.b = CoefficientNet::closed_form(
      1, 1, 1, [bc](double, double, const SpaceVec& x) { return Mat::scalar(bc(x)); }, false,
      "b");
  p.c = CoefficientNet::constant_scalar(1, 0.5, "c");
  p.f = scalar_net(
      1,
      [R, gc, bc](double t, const SpaceVec& x) {
        const double phi = M_PI * x[0] - 0.4 * t;
        const double u = std::sin(phi), ux = M_PI * std::cos(phi),
                     uxx = -M_PI * M_PI * std::sin(phi), ut = -0.4 * std::cos(phi),
                     utt = -0.16 * std::sin(phi), uxt = 0.4 * M_PI * std::sin(phi);
        return -utt + 2 * gc(x) * uxt + R(x) * uxx + (-0.3) * ut + bc(x) * ux + 0.5 * u;
      },
      true, "f");
  p.u0 = scalar_net(1, [](double, const SpaceVec& x) { return std::sin(M_PI * x[0]); }, false,
                    "u0");
  p.u1 = scalar_net(1, [](double, const SpaceVec& x) { return -0.4 * std::cos(M_PI * x[0]); },
                    false, "u1");

  std::vector<double> errs;
  for (int cells : {32, 64}) {
    const Grid grid = make_grid(p.domain, {cells, 1, 1}, 0.5, 2.5);
    const GridSolution sol = solve_wave(p, grid, 0.25);
    errs.push_back(l2_error_vs(sol, grid.steps, 0, [](double t, const SpaceVec& x) {
      return std::sin(M_PI * x[0] - 0.4 * t);
    }));
  }
  CHECK(errs[0] / errs[1] >= 3.3);
  CHECK(errs[1] <= 2e-3);
}

TEST_CASE("discrete energy stays bounded on a long horizon") {
  // Pure transport: B = 0, F = 0, periodic; run ten times the usual horizon.
  WaveProblem p = dalembert_problem();
  const HyperbolicSystem sys = wave_to_system(p);
  const Grid grid = make_grid(p.domain, {50, 1, 1}, 10.0, 1.2);
  const GridSolution sol = solve_system(sys, grid, 0.25);
  auto norm_at = [&](int level) {
    double s = 0;
    for (std::int64_t q = 0; q < grid.npoints(); ++q)
      for (int c2 = 0; c2 < sol.ncomp; ++c2) {
        const double v = sol.value(level, q, c2);
        s += v * v;
      }
    return std::sqrt(s);
  };
  const double n0 = norm_at(0);
  for (int level = 1; level <= grid.steps; level += std::max(1, grid.steps / 50))
    CHECK(norm_at(level) <= n0 * (1 + 1e-10));
}

TEST_CASE("CFL honesty: violations are detected, not silent") {
  const WaveProblem p = dalembert_problem();
  const HyperbolicSystem sys = wave_to_system(p);
  Grid grid = make_grid(p.domain, {100, 1, 1}, 2.0, 1.2);
  grid.tau *= 3.0;  // deliberate violation
  grid.steps = static_cast<int>(std::ceil(2.0 / grid.tau));

  CHECK_THROWS_AS(solve_system(sys, grid, 0.25), CflError);
  CHECK_THROWS_AS(solve_wave(p, grid, 0.25), CflError);

  SolveOptions unchecked;
  unchecked.check_cfl = false;
  CHECK_THROWS_AS(solve_system(sys, grid, 0.25, unchecked), BlowUpError);
  CHECK_THROWS_AS(solve_wave(p, grid, 0.25, unchecked), BlowUpError);
}

TEST_CASE("equivalence of the two forms at the scheme order") {
  const WaveProblem p = dalembert_problem();
  const Grid finest = make_grid(p.domain, {100, 1, 1}, 1.0, 1.2);
  const EquivalenceReport rep = equivalence_check(p, finest, 0.25, 3);
  CHECK(rep.u_order >= 1.9);
  CHECK(rep.w_order >= 1.9);
  CHECK(rep.u_discrepancy.back() <= 5e-3);
}

TEST_CASE("the first system component tracks the time derivative of u") {
  // z - du/dt from the system solution alone decays at the scheme order.
  const WaveProblem p = dalembert_problem();
  const HyperbolicSystem sys = wave_to_system(p);
  std::vector<double> residuals;
  for (int cells : {50, 100}) {
    const Grid grid = make_grid(p.domain, {cells, 1, 1}, 1.0, 1.2);
    const GridSolution sol = solve_system(sys, grid, 0.25);
    const int level = grid.steps - 1;
    double worst = 0;
    for (std::int64_t q = 0; q < grid.npoints(); ++q)
      worst = std::max(worst, std::abs(sol.value(level, q, 1) - sol.dt(level, q, 0)));
    residuals.push_back(worst);
  }
  CHECK(residuals[0] / residuals[1] >= 3.0);
  CHECK(residuals[1] <= 5e-3);
}

TEST_CASE("equivalence discrepancy is epsilon-stable for smooth coefficients") {
  // R comes from mollifying a constant: identical for every epsilon.
  genfunc::Region r;
  r.poly = genfunc::Polynomial::constant(1.0);
  auto raw = std::make_shared<genfunc::PiecewiseExpr>(
      1, SpaceTimeBox{0, 1, Box::interval(-2, 3)}, std::vector<genfunc::Region>{r});
  WaveProblem p = dalembert_problem();
  p.R = CoefficientNet::mollified(raw, genfunc::Mollifier(genfunc::MollifierMode::Model, 1),
                                  "R");
  p.R.mark_spd();
  const Grid finest = make_grid(p.domain, {40, 1, 1}, 1.0, 1.2);
  const EquivalenceReport r1 = equivalence_check(p, finest, 1.0 / 16, 2);
  const EquivalenceReport r2 = equivalence_check(p, finest, 1.0 / 1024, 2);
  for (size_t i = 0; i < r1.u_discrepancy.size(); ++i) {
    CHECK(std::abs(r1.u_discrepancy[i] - r2.u_discrepancy[i]) <= 1e-8);
    CHECK(std::abs(r1.w_residual[i] - r2.w_residual[i]) <= 1e-8);
  }
}

TEST_CASE("solution tables serialize with grid metadata") {
  const WaveProblem p = dalembert_problem();
  const Grid grid = make_grid(p.domain, {10, 1, 1}, 0.1, 1.2);
  const GridSolution sol = solve_wave(p, grid, 0.25);
  std::ostringstream os;
  write_solution_table(os, sol, {"u"});
  const std::string text = os.str();
  CHECK(text.find("# wavesys-table n=1") != std::string::npos);
  CHECK(text.find("fields=u") != std::string::npos);
  // header + column line + one row per (level, point)
  std::int64_t rows = 0;
  for (char ch : text) rows += ch == '\n';
  CHECK(rows == 2 + static_cast<std::int64_t>(grid.steps + 1) * grid.npoints());
}
