#pragma once

#include <functional>

#include "wavesys/geometry.hpp"
#include "wavesys/smallmat.hpp"

namespace wavesys::linalg {

// Fixed-epsilon views of space-time fields.
using ScalarField = std::function<double(double t, const SpaceVec& x)>;
using MatrixField = std::function<Mat(double t, const SpaceVec& x)>;

inline SpaceVec shifted(SpaceVec x, int axis, double d) {
  x[axis] += d;
  return x;
}

// Central differences; axis indexes the spatial coordinate (0-based).
Mat fd_dx(const MatrixField& f, int axis, double t, const SpaceVec& x, double h);
Mat fd_dt(const MatrixField& f, double t, const SpaceVec& x, double h);
double fd_dx(const ScalarField& f, int axis, double t, const SpaceVec& x, double h);
// Second derivative d^2/dx_i dx_j by centered stencils on a common step.
double fd_dxx(const ScalarField& f, int i, int j, double t, const SpaceVec& x, double h);
Mat gradient(const ScalarField& f, int n, double t, const SpaceVec& x, double h);

// (Div S)_i = sum_j d/dx_j S_ij for a matrix field of order n.
Mat matrix_divergence(const MatrixField& s, int n, double t, const SpaceVec& x, double h);

}  // namespace wavesys::linalg
