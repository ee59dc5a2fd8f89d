#pragma once

#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "wavesys/genfunc/mollifier.hpp"
#include "wavesys/genfunc/piecewise.hpp"
#include "wavesys/genfunc/sample_table.hpp"
#include "wavesys/smallmat.hpp"

namespace wavesys::genfunc {

enum class Provenance { MollifiedFromPiecewise, ClosedForm, DerivedByArithmetic };

// Step selection for finite differences on nets: resolve the kernel width
// of mollified data, fall back to a fixed step for smooth closed forms.
struct FdStep {
  double base = 1.0 / 4096;
  double per_width = 0.125;

  double step(double feature_width) const {
    return feature_width > 0 ? feature_width * per_width : base;
  }
};

// An epsilon-indexed family of smooth fields: the evaluator maps
// (eps, t, x) to a scalar (1x1), vector (kx1) or matrix value. Copies share
// the underlying evaluator and sample cache.
class CoefficientNet {
 public:
  using Evaluator = std::function<Mat(double eps, double t, const SpaceVec& x)>;

  CoefficientNet() = default;

  static CoefficientNet closed_form(int n, int rows, int cols, Evaluator ev,
                                    bool time_dependent, std::string label = "");
  static CoefficientNet constant(int n, const Mat& value, std::string label = "");
  static CoefficientNet constant_scalar(int n, double v, std::string label = "");
  // Componentwise convolution of raw piecewise data with the mollifier.
  static CoefficientNet mollified(std::shared_ptr<const PiecewiseExpr> raw, const Mollifier& m,
                                  std::string label = "");
  static CoefficientNet mollified(std::vector<std::shared_ptr<const PiecewiseExpr>> comps,
                                  int rows, int cols, const Mollifier& m, std::string label = "");
  // The raw piecewise data itself as a (non-smooth) closed-form net.
  static CoefficientNet piecewise_exact(std::shared_ptr<const PiecewiseExpr> raw,
                                        std::string label = "");

  bool valid() const { return impl_ != nullptr; }
  Mat eval(double eps, double t, const SpaceVec& x) const;
  double eval_scalar(double eps, double t, const SpaceVec& x) const {
    return eval(eps, t, x).as_scalar();
  }

  int dim() const;
  int rows() const;
  int cols() const;
  bool is_scalar() const { return rows() == 1 && cols() == 1; }
  Provenance provenance() const;
  bool time_dependent() const;
  bool spd() const;
  CoefficientNet& mark_spd(bool v = true);
  const std::string& label() const;

  // Kernel width of the smoothing underneath this net (0 for closed forms);
  // derived nets report the largest width among their operands.
  double feature_width(double eps) const;
  // Raw-data discontinuity locations on one axis (0 = t).
  const std::vector<double>& breakpoints(int axis) const;

  // Cached dense samples, computed once per (eps, grid).
  std::shared_ptr<const SampleTable> sample(double eps, const SampleGrid& grid) const;

 private:
  struct Impl;
  std::shared_ptr<Impl> impl_;
  friend struct NetMetaAccess;
};

// Epsilon-wise algebra of representatives. Addition and subtraction need
// matching shapes; net_mul scales by a scalar net (either side) and
// multiplies elementwise when shapes match.
CoefficientNet net_add(const CoefficientNet& a, const CoefficientNet& b);
CoefficientNet net_sub(const CoefficientNet& a, const CoefficientNet& b);
CoefficientNet net_mul(const CoefficientNet& a, const CoefficientNet& b);
CoefficientNet net_matmul(const CoefficientNet& a, const CoefficientNet& b);
// Pointwise inverse of an SPD-tagged square matrix net (scalars included).
CoefficientNet net_spd_inverse(const CoefficientNet& a);

// Pointwise map of the value; shape of the result must be declared.
CoefficientNet net_transform(const CoefficientNet& a, std::function<Mat(const Mat&)> fn,
                             int rows, int cols, std::string label = "");
// General derived net over several source nets: carries derived-by-arithmetic
// provenance and the merged width/breakpoint metadata of the sources.
CoefficientNet net_derived(int n, int rows, int cols, CoefficientNet::Evaluator ev,
                           bool time_dependent, std::span<const CoefficientNet> sources,
                           std::string label = "");
// Central-difference derivative along axis (0 = t, 1..n = space).
CoefficientNet net_derivative(const CoefficientNet& a, int axis, FdStep step = {});
// Block extraction [row0 .. row0+rows) x [col0 .. col0+cols).
CoefficientNet net_block(const CoefficientNet& a, int row0, int col0, int rows, int cols);

}  // namespace wavesys::genfunc
