#pragma once

#include <array>
#include <cmath>
#include <cstring>
#include <span>
#include <string>

#include "wavesys/errors.hpp"

namespace wavesys {

inline constexpr int kMaxOrder = 8;

// Dense row-major matrix with a small fixed capacity (order <= 8).
// Scalars are stored as 1x1, column vectors as kx1, so one value type
// covers every coefficient shape.
class Mat {
 public:
  Mat() = default;
  Mat(int rows, int cols) : rows_(rows), cols_(cols) {
    if (rows < 0 || cols < 0 || rows > kMaxOrder || cols > kMaxOrder)
      throw ShapeError("Mat: shape " + std::to_string(rows) + "x" + std::to_string(cols) +
                       " exceeds capacity " + std::to_string(kMaxOrder));
  }

  static Mat scalar(double v) {
    Mat m(1, 1);
    m(0, 0) = v;
    return m;
  }
  static Mat zero(int rows, int cols) { return Mat(rows, cols); }
  static Mat identity(int n) {
    Mat m(n, n);
    for (int i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
  }
  static Mat column(std::span<const double> v) {
    Mat m(static_cast<int>(v.size()), 1);
    for (int i = 0; i < m.rows_; ++i) m(i, 0) = v[i];
    return m;
  }
  static Mat diag(std::span<const double> v) {
    Mat m(static_cast<int>(v.size()), static_cast<int>(v.size()));
    for (int i = 0; i < m.rows_; ++i) m(i, i) = v[i];
    return m;
  }

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  bool empty() const { return rows_ == 0 || cols_ == 0; }
  bool is_scalar() const { return rows_ == 1 && cols_ == 1; }
  bool is_vector() const { return cols_ == 1; }
  bool same_shape(const Mat& o) const { return rows_ == o.rows_ && cols_ == o.cols_; }

  double& operator()(int i, int j) { return a_[i * cols_ + j]; }
  double operator()(int i, int j) const { return a_[i * cols_ + j]; }

  double as_scalar() const {
    if (!is_scalar()) throw ShapeError("Mat: scalar value expected, have " + shape_str());
    return a_[0];
  }

  std::string shape_str() const { return std::to_string(rows_) + "x" + std::to_string(cols_); }

  Mat& operator+=(const Mat& o) {
    require_same_shape(o, "+");
    for (int k = 0; k < rows_ * cols_; ++k) a_[k] += o.a_[k];
    return *this;
  }
  Mat& operator-=(const Mat& o) {
    require_same_shape(o, "-");
    for (int k = 0; k < rows_ * cols_; ++k) a_[k] -= o.a_[k];
    return *this;
  }
  Mat& operator*=(double s) {
    for (int k = 0; k < rows_ * cols_; ++k) a_[k] *= s;
    return *this;
  }

  friend Mat operator+(Mat a, const Mat& b) { return a += b; }
  friend Mat operator-(Mat a, const Mat& b) { return a -= b; }
  friend Mat operator*(Mat a, double s) { return a *= s; }
  friend Mat operator*(double s, Mat a) { return a *= s; }

  friend Mat matmul(const Mat& a, const Mat& b) {
    if (a.cols_ != b.rows_)
      throw ShapeError("matmul: " + a.shape_str() + " * " + b.shape_str());
    Mat c(a.rows_, b.cols_);
    for (int i = 0; i < a.rows_; ++i)
      for (int k = 0; k < a.cols_; ++k) {
        const double aik = a(i, k);
        if (aik == 0.0) continue;
        for (int j = 0; j < b.cols_; ++j) c(i, j) += aik * b(k, j);
      }
    return c;
  }

  Mat transposed() const {
    Mat t(cols_, rows_);
    for (int i = 0; i < rows_; ++i)
      for (int j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
    return t;
  }

  double frob() const {
    double s = 0;
    for (int k = 0; k < rows_ * cols_; ++k) s += a_[k] * a_[k];
    return std::sqrt(s);
  }
  double max_abs() const {
    double s = 0;
    for (int k = 0; k < rows_ * cols_; ++k) s = std::max(s, std::abs(a_[k]));
    return s;
  }
  bool all_finite() const {
    for (int k = 0; k < rows_ * cols_; ++k)
      if (!std::isfinite(a_[k])) return false;
    return true;
  }
  double sym_deviation() const {
    double s = 0;
    for (int i = 0; i < rows_; ++i)
      for (int j = i + 1; j < cols_; ++j) s = std::max(s, std::abs((*this)(i, j) - (*this)(j, i)));
    return s;
  }

  const double* data() const { return a_.data(); }
  double* data() { return a_.data(); }
  int size() const { return rows_ * cols_; }

 private:
  void require_same_shape(const Mat& o, const char* op) const {
    if (!same_shape(o))
      throw ShapeError(std::string("Mat: shape mismatch in '") + op + "': " + shape_str() +
                       " vs " + o.shape_str());
  }

  int rows_ = 0;
  int cols_ = 0;
  std::array<double, kMaxOrder * kMaxOrder> a_{};
};

}  // namespace wavesys
