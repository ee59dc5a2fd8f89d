#pragma once

#include <functional>
#include <memory>
#include <span>

#include "wavesys/genfunc/piecewise.hpp"
#include "wavesys/geometry.hpp"

namespace wavesys::genfunc {

enum class MollifierMode { Model, Log };

// Compactly supported bump kernel rho(y) = C * exp(-1/(1-|y|^2)) on |y| < 1,
// rescaled per epsilon. Model scaling uses width eps, log scaling uses width
// 1/log(1/eps), so derivatives of mollified jumps grow like 1/eps or
// log(1/eps) respectively.
//
// The normalization constant is taken against the same composite
// Gauss-Legendre rule used for convolution (32 nodes per panel, 4 base
// panels per axis). Convolving a constant therefore reproduces the constant
// to machine precision, and the profile's true mass is 1 within the rule's
// accuracy (checked at construction against a refined rule).
class Mollifier {
 public:
  Mollifier(MollifierMode mode, int dim);

  MollifierMode mode() const { return mode_; }
  int dim() const { return dim_; }

  // Kernel width for this epsilon; equals the support radius since the
  // profile is supported on the unit ball.
  double scale(double eps) const;
  double support_radius(double eps) const { return scale(eps); }

  // Normalized profile at squared radius r2 (in kernel coordinates).
  double profile_r2(double r2) const;
  // psi_eps at a point y in physical coordinates.
  double eval(double eps, std::span<const double> y) const;

  double normalization() const { return c_; }

  // |integral(psi_eps) - 1| <= tol for every epsilon in the list, measured
  // against a refined quadrature. Throws ConfigError on failure.
  void validate(std::span<const double> eps_list, double tol = 1e-10) const;

  static constexpr int quad_order = 32;

 private:
  MollifierMode mode_;
  int dim_;
  double c_ = 0;         // normalization against the production rule
  double mass_check_ = 0;  // production-rule mass / refined-rule mass
};

// Smooth field (raw * psi_eps)(t, x) for one epsilon, computed by composite
// tensor-product Gauss-Legendre quadrature over the kernel support with
// panels split at the raw data's region boundaries.
//
// When the mollifier dimension equals the spatial dimension the convolution
// runs over space only (raw data must then have no time breakpoints); with
// dimension n+1 it runs over space-time.
class MollifiedField {
 public:
  MollifiedField(std::shared_ptr<const PiecewiseExpr> raw, Mollifier m, double eps);

  double operator()(double t, const SpaceVec& x) const;

  double eps() const { return eps_; }
  const Mollifier& mollifier() const { return m_; }
  const PiecewiseExpr& raw() const { return *raw_; }

 private:
  std::shared_ptr<const PiecewiseExpr> raw_;
  Mollifier m_;
  double eps_;
  bool over_time_;
};

MollifiedField mollify(std::shared_ptr<const PiecewiseExpr> raw, const Mollifier& m, double eps);
inline MollifiedField mollify(const PiecewiseExpr& raw, const Mollifier& m, double eps) {
  return mollify(std::make_shared<PiecewiseExpr>(raw), m, eps);
}

}  // namespace wavesys::genfunc
