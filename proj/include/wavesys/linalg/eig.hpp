#pragma once

#include <array>
#include <string>

#include "wavesys/linalg/sym_matrix.hpp"

namespace wavesys::linalg {

// Eigendecomposition A = U^T D U with eigenvalues ascending. Row i of U is
// the eigenvector of eigenvalue(i); sign convention: first component of each
// eigenvector above magnitude 1e-12 is positive.
struct EigenDecomposition {
  int n = 0;
  Mat u;                                // orthogonal, A = u^T diag(lambda) u
  std::array<double, kMaxOrder> lambda{};

  double eigenvalue(int i) const { return lambda[i]; }
  Mat eigenvector(int i) const {
    Mat v(n, 1);
    for (int j = 0; j < n; ++j) v(j, 0) = u(i, j);
    return v;
  }
  SymMatrix reconstruct() const;  // U^T D U packed symmetric
  // U^T f(D) U for a spectral function given by mapped eigenvalues.
  SymMatrix apply_spectral(std::span<const double> mapped) const;
};

// Cyclic Jacobi rotations until the off-diagonal Frobenius mass drops below
// 1e-14 * ||A||_F. Intended for the tiny blocks of this project (n <= 8).
EigenDecomposition sym_eig(const SymMatrix& a);

// Spectral square root S = U^T D^{1/2} U. Throws NotSpdError when any
// eigenvalue is at or below spd_floor_rel * ||R||_F.
SymMatrix spd_sqrt(const SymMatrix& r, double spd_floor_rel = 1e-12);

// Spectral inverse with the same positivity floor.
SymMatrix spd_inverse(const SymMatrix& r, double spd_floor_rel = 1e-12);

// Inverse of a symmetric (not necessarily definite) matrix; eigenvalues with
// magnitude at or below floor_rel * ||A||_F raise StructureError.
SymMatrix sym_inverse(const SymMatrix& a, double floor_rel = 1e-10);

enum class SignatureVerdict { Riemannian, Lorentzian, Degenerate, Other };

struct SignatureReport {
  int negative = 0;
  int zero = 0;  // |lambda| within tolerance of zero
  int positive = 0;
  int index = 0;  // count of negative eigenvalues
  SignatureVerdict verdict = SignatureVerdict::Other;

  std::string verdict_str() const;
};

// Eigenvalue signature with zero tolerance zero_tol_rel * ||G||_F.
// Lorentzian <=> index 1 and no zero eigenvalues.
SignatureReport lorentzian_check(const SymMatrix& g, double zero_tol_rel = 1e-10);

}  // namespace wavesys::linalg
