#pragma once

#include "wavesys/linalg/field_calculus.hpp"
#include "wavesys/transform/problems.hpp"

namespace wavesys::transform {

struct AssemblyOptions {
  // Stencil step for coefficient derivatives (Div S, Div S^2, dS/dt, grad u0);
  // 0 selects the problem's epsilon-aware default.
  double fd_step = 0;
};

// Rewrites the wave problem as the symmetric first-order system in the
// unknowns w = (u, u_t, S grad u) with S the pointwise SPD square root of R:
//
//   A_i = [ 0    0        0     ]     B = [ 0  1        0          ]
//         [ 0   2g_i   (S_i.)   ]         [ c  a  (Div S)^T + (b - Div S^2)^T S^{-1} ]
//         [ 0  (S_.i)     0     ]         [ 0  0     (dS/dt) S^{-1} ]
//
//   F = (0, f, 0)^T,  w0 = (u0, u1, S|_{t=0} grad u0)^T.
//
// Derivative entries are central differences on the mollified nets.
HyperbolicSystem wave_to_system(const WaveProblem& p, const AssemblyOptions& opt = {});

// Inverts the first-order coefficient row for b: given btilde with
// btilde^T = (Div S)^T + (b - Div S^2)^T S^{-1}, returns
// b = S^T btilde - S^T Div S + Div S^2.
genfunc::CoefficientNet reconstruct_b(const genfunc::CoefficientNet& btilde,
                                      const genfunc::CoefficientNet& s,
                                      const AssemblyOptions& opt = {});

struct ToWaveOptions {
  AssemblyOptions assembly;
  double structure_tol = 1e-10;          // relative to the sampled magnitude
  std::vector<double> eps_list{1.0 / 16, 1.0 / 256};
  int cells_per_axis = 8;
  int time_slices = 3;
};

struct SystemToWaveResult {
  WaveProblem problem;
  double structure_residual = 0;    // worst sparsity/symmetry deviation found
  double w0_residual = 0;           // | w0[2..] - S grad u0 | on the sample
  double lower_block_residual = 0;  // | B[2..,2..] - (dS/dt) S^{-1} | on the sample
};

// Reads the wave-equation data back off a system of the rewritten form.
// Throws StructureError when the sparsity pattern does not match or the
// S block is not invertible.
SystemToWaveResult system_to_wave(const HyperbolicSystem& s, const ToWaveOptions& opt = {});

// | Tr(S^2 u'') - Div(S^2 u') + <Div S^2, u'> | with every derivative taken
// by central differences with the same step.
double divergence_identity_residual(const linalg::MatrixField& s, const linalg::ScalarField& u,
                                    int n, double t, const SpaceVec& x, double h);

}  // namespace wavesys::transform
