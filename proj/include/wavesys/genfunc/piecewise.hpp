#pragma once

#include <limits>
#include <string>
#include <vector>

#include "wavesys/genfunc/polynomial.hpp"
#include "wavesys/geometry.hpp"

namespace wavesys::genfunc {

inline constexpr int kMaxCoeffDegree = 6;

// Half-open interval bounds per axis; infinities mean unbounded.
struct AxisBounds {
  double lo = -std::numeric_limits<double>::infinity();
  double hi = std::numeric_limits<double>::infinity();
};

struct Region {
  std::array<AxisBounds, 4> bounds{};  // axis 0 = t, 1..3 = space
  Polynomial poly;
  std::string id;

  bool contains(double t, const SpaceVec& x, int n) const {
    if (t < bounds[0].lo || t > bounds[0].hi) return false;
    for (int a = 0; a < n; ++a)
      if (x[a] < bounds[a + 1].lo || x[a] > bounds[a + 1].hi) return false;
    return true;
  }
};

// A scalar coefficient before smoothing: axis-aligned regions, each carrying
// a polynomial of total degree <= 6. The regions must partition the
// definition box; outside the box the value is extended constantly along
// the faces (points are clamped before lookup).
class PiecewiseExpr {
 public:
  PiecewiseExpr(int n, const SpaceTimeBox& box, std::vector<Region> regions);

  static PiecewiseExpr constant(int n, const SpaceTimeBox& box, double v);

  double eval(double t, const SpaceVec& x) const;

  int dim() const { return n_; }
  const SpaceTimeBox& box() const { return box_; }
  const std::vector<Region>& regions() const { return regions_; }
  bool depends_on_t() const { return depends_on_t_; }

  // Interior region boundaries on one axis (0 = t), strictly inside the box.
  const std::vector<double>& breakpoints(int axis) const { return breakpoints_[axis]; }
  bool has_breakpoints() const {
    for (const auto& b : breakpoints_)
      if (!b.empty()) return true;
    return false;
  }

 private:
  void validate_partition() const;
  void collect_breakpoints();

  int n_;
  SpaceTimeBox box_;
  std::vector<Region> regions_;
  std::array<std::vector<double>, 4> breakpoints_;
  bool depends_on_t_ = false;
};

}  // namespace wavesys::genfunc
