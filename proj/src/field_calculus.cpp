#include "wavesys/linalg/field_calculus.hpp"

namespace wavesys::linalg {

Mat fd_dx(const MatrixField& f, int axis, double t, const SpaceVec& x, double h) {
  Mat d = f(t, shifted(x, axis, h));
  d -= f(t, shifted(x, axis, -h));
  d *= 1.0 / (2.0 * h);
  return d;
}

Mat fd_dt(const MatrixField& f, double t, const SpaceVec& x, double h) {
  Mat d = f(t + h, x);
  d -= f(t - h, x);
  d *= 1.0 / (2.0 * h);
  return d;
}

double fd_dx(const ScalarField& f, int axis, double t, const SpaceVec& x, double h) {
  return (f(t, shifted(x, axis, h)) - f(t, shifted(x, axis, -h))) / (2.0 * h);
}

double fd_dxx(const ScalarField& f, int i, int j, double t, const SpaceVec& x, double h) {
  if (i == j)
    return (f(t, shifted(x, i, h)) - 2.0 * f(t, x) + f(t, shifted(x, i, -h))) / (h * h);
  const SpaceVec pp = shifted(shifted(x, i, h), j, h);
  const SpaceVec pm = shifted(shifted(x, i, h), j, -h);
  const SpaceVec mp = shifted(shifted(x, i, -h), j, h);
  const SpaceVec mm = shifted(shifted(x, i, -h), j, -h);
  return (f(t, pp) - f(t, pm) - f(t, mp) + f(t, mm)) / (4.0 * h * h);
}

Mat gradient(const ScalarField& f, int n, double t, const SpaceVec& x, double h) {
  Mat g(n, 1);
  for (int i = 0; i < n; ++i) g(i, 0) = fd_dx(f, i, t, x, h);
  return g;
}

Mat matrix_divergence(const MatrixField& s, int n, double t, const SpaceVec& x, double h) {
  Mat div(n, 1);
  for (int j = 0; j < n; ++j) {
    Mat dj = fd_dx(s, j, t, x, h);
    for (int i = 0; i < n; ++i) div(i, 0) += dj(i, j);
  }
  return div;
}

}  // namespace wavesys::linalg
