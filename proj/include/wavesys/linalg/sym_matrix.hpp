#pragma once

#include <array>
#include <cmath>
#include <span>
#include <string>

#include "wavesys/smallmat.hpp"

namespace wavesys::linalg {

// Symmetric matrix of order <= 8. Only the upper triangle is stored, so
// symmetry is exact by construction.
class SymMatrix {
 public:
  SymMatrix() = default;
  explicit SymMatrix(int n) : n_(n) {
    if (n < 1 || n > kMaxOrder) throw ShapeError("SymMatrix: order " + std::to_string(n));
  }

  static SymMatrix identity(int n) {
    SymMatrix s(n);
    for (int i = 0; i < n; ++i) s.set(i, i, 1.0);
    return s;
  }
  static SymMatrix diag(std::span<const double> v) {
    SymMatrix s(static_cast<int>(v.size()));
    for (int i = 0; i < s.n_; ++i) s.set(i, i, v[i]);
    return s;
  }
  // Symmetrizes m; deviation beyond tol (relative to max entry) is an error.
  static SymMatrix from_mat(const Mat& m, double rel_tol = 1e-9);

  int order() const { return n_; }
  double operator()(int i, int j) const { return a_[idx(i, j)]; }
  void set(int i, int j, double v) { a_[idx(i, j)] = v; }
  void add(int i, int j, double v) { a_[idx(i, j)] += v; }

  Mat to_mat() const {
    Mat m(n_, n_);
    for (int i = 0; i < n_; ++i)
      for (int j = 0; j < n_; ++j) m(i, j) = (*this)(i, j);
    return m;
  }

  double frob() const {
    double s = 0;
    for (int i = 0; i < n_; ++i)
      for (int j = 0; j < n_; ++j) s += (*this)(i, j) * (*this)(i, j);
    return std::sqrt(s);
  }
  bool all_finite() const {
    for (int i = 0; i < n_; ++i)
      for (int j = i; j < n_; ++j)
        if (!std::isfinite((*this)(i, j))) return false;
    return true;
  }

  friend SymMatrix operator+(const SymMatrix& a, const SymMatrix& b) {
    SymMatrix c(a.n_);
    for (int i = 0; i < a.n_; ++i)
      for (int j = i; j < a.n_; ++j) c.set(i, j, a(i, j) + b(i, j));
    return c;
  }

 private:
  static int idx_upper(int i, int j, int n) { return i * n - i * (i + 1) / 2 + j; }
  int idx(int i, int j) const {
    if (i > j) std::swap(i, j);
    return idx_upper(i, j, n_);
  }

  int n_ = 0;
  std::array<double, kMaxOrder*(kMaxOrder + 1) / 2> a_{};
};

inline SymMatrix SymMatrix::from_mat(const Mat& m, double rel_tol) {
  if (m.rows() != m.cols()) throw ShapeError("SymMatrix::from_mat: " + m.shape_str());
  const double scale = std::max(m.max_abs(), 1e-300);
  if (m.sym_deviation() > rel_tol * scale)
    throw ShapeError("SymMatrix::from_mat: asymmetry " + std::to_string(m.sym_deviation()) +
                     " exceeds tolerance");
  SymMatrix s(m.rows());
  for (int i = 0; i < m.rows(); ++i)
    for (int j = i; j < m.cols(); ++j) s.set(i, j, 0.5 * (m(i, j) + m(j, i)));
  return s;
}

}  // namespace wavesys::linalg
