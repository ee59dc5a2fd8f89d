#pragma once

#include <vector>

#include "wavesys/genfunc/coefficient_net.hpp"
#include "wavesys/geometry.hpp"

namespace wavesys::transform {

// Second-order Cauchy problem
//   -u_tt + 2 <g, grad u_t> + R : hess u + a u_t + <b, grad u> + c u = f,
//   (u, u_t)|_{t=0} = (u0, u1),
// with all coefficients given as epsilon-indexed nets on [0, horizon] x domain.
struct WaveProblem {
  int n = 1;
  genfunc::CoefficientNet R;   // n x n, SPD
  genfunc::CoefficientNet g;   // n-vector
  genfunc::CoefficientNet a;   // scalar
  genfunc::CoefficientNet b;   // n-vector
  genfunc::CoefficientNet c;   // scalar
  genfunc::CoefficientNet f;   // scalar source
  genfunc::CoefficientNet u0;  // spatial scalar
  genfunc::CoefficientNet u1;  // spatial scalar
  Box domain;
  double horizon = 1.0;
  genfunc::FdStep fd;

  // Finite-difference step used for coefficient derivatives at this epsilon:
  // resolves the mollifier width when the data is smoothed.
  double derivative_step(double eps) const;
  void check_shapes() const;
};

// First-order system -w_t + sum_i A_i d_i w + B w = F with symmetric A_i,
// unknowns w = (u, z, v_1..v_n).
struct HyperbolicSystem {
  int n = 1;
  std::vector<genfunc::CoefficientNet> A;  // n nets, (n+2) x (n+2), symmetric
  genfunc::CoefficientNet B;               // (n+2) x (n+2)
  genfunc::CoefficientNet F;               // (n+2)-vector
  genfunc::CoefficientNet w0;              // spatial (n+2)-vector
  Box domain;
  double horizon = 1.0;
  genfunc::FdStep fd;

  double derivative_step(double eps) const;
  void check_shapes() const;
};

// Samples R (positive definiteness) and the space-time metric block
//   G = [[-1, g^T], [g, R]]
// on a coarse grid for each epsilon; throws ConfigError with the failing
// location if R is not SPD or G is not Lorentzian.
void validate_wave_problem(const WaveProblem& p, std::span<const double> eps_list,
                           int cells_per_axis = 8, int time_slices = 3);

}  // namespace wavesys::transform
