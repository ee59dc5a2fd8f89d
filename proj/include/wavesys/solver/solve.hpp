#pragma once

#include "wavesys/solver/grid.hpp"
#include "wavesys/transform/problems.hpp"

namespace wavesys::solver {

struct SolveOptions {
  bool check_cfl = true;       // reject tau above the bound before stepping
  double blowup_factor = 1e6;  // runaway threshold relative to the data scale
  std::uint64_t seed = 42;     // direction sampling for lambda_max
  double lambda_max_hint = 0;  // skip estimation when > 0
  int residual_stride = 0;     // 0: ~16 sampled levels
};

// Largest eigenvalue magnitude of sum_i xi_i A_i over 16 seeded random unit
// directions and all grid points at t = 0, times a 1.2 safety factor.
double estimate_lambda_max(const transform::HyperbolicSystem& s, double eps, const Grid& grid,
                           std::uint64_t seed = 42, int directions = 16);
// Same bound for a wave problem via the blocks (S, g) of its system form.
double estimate_lambda_max(const transform::WaveProblem& p, double eps, const Grid& grid,
                           std::uint64_t seed = 42, int directions = 16);

// Explicit one-step scheme for -w_t + sum A_i d_i w + B w = F: a
// Lax-Friedrichs half-step on staggered faces followed by a midpoint
// corrector, with B w and F coupled explicitly in both stages and
// coefficients sampled at half steps for the corrector fluxes.
GridSolution solve_system(const transform::HyperbolicSystem& s, const Grid& grid, double eps,
                          const SolveOptions& opt = {});

// Leapfrog for the second-order form: central differences in space, the
// mixed term 2 g_i d_i u_t by a centered time-space stencil (implicit in the
// new level, solved by iteration when g != 0), first step by Taylor
// expansion from (u0, u1) and the equation.
GridSolution solve_wave(const transform::WaveProblem& p, const Grid& grid, double eps,
                        const SolveOptions& opt = {});

struct EquivalenceReport {
  double eps = 0;
  std::vector<double> hs;              // coarse to fine
  std::vector<double> u_discrepancy;   // L2 of u_system - u_wave at the horizon
  std::vector<double> w_residual;      // | w - (u, u_t, S grad u) | from the system solve
  double u_order = 0;
  double w_order = 0;
};

// Solves both forms on a refinement ladder ending at `finest` (factors of
// two, fixed CFL ratio) and reports discrepancies plus fitted orders.
EquivalenceReport equivalence_check(const transform::WaveProblem& p, const Grid& finest,
                                    double eps, int levels = 3, const SolveOptions& opt = {});

}  // namespace wavesys::solver
