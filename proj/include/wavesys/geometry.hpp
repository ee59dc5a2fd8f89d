#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <string>

#include "wavesys/errors.hpp"

namespace wavesys {

using SpaceVec = std::array<double, 3>;  // padded with zeros beyond the active dimension

inline double sq_norm(const SpaceVec& x, int n) {
  double s = 0;
  for (int i = 0; i < n; ++i) s += x[i] * x[i];
  return s;
}

// Axis-aligned spatial box.
struct Box {
  int n = 1;
  SpaceVec lo{};
  SpaceVec hi{};

  static Box interval(double a, double b) { return Box{1, {a, 0, 0}, {b, 0, 0}}; }
  static Box cube(int n, double a, double b) {
    Box box;
    box.n = n;
    for (int i = 0; i < n; ++i) {
      box.lo[i] = a;
      box.hi[i] = b;
    }
    return box;
  }

  double extent(int axis) const { return hi[axis] - lo[axis]; }
  double min_extent() const {
    double e = extent(0);
    for (int i = 1; i < n; ++i) e = std::min(e, extent(i));
    return e;
  }
  bool contains(const SpaceVec& x, double tol = 0.0) const {
    for (int i = 0; i < n; ++i)
      if (x[i] < lo[i] - tol || x[i] > hi[i] + tol) return false;
    return true;
  }
  bool contains(const Box& inner, double tol = 0.0) const {
    for (int i = 0; i < inner.n; ++i)
      if (inner.lo[i] < lo[i] - tol || inner.hi[i] > hi[i] + tol) return false;
    return true;
  }
  SpaceVec clamped(SpaceVec x) const {
    for (int i = 0; i < n; ++i) x[i] = std::min(std::max(x[i], lo[i]), hi[i]);
    return x;
  }
  // Distance from x to the nearest face, negative outside.
  double face_distance(const SpaceVec& x) const {
    double d = std::numeric_limits<double>::infinity();
    for (int i = 0; i < n; ++i) d = std::min(d, std::min(x[i] - lo[i], hi[i] - x[i]));
    return d;
  }
  Box expanded(double pad) const {
    Box b = *this;
    for (int i = 0; i < n; ++i) {
      b.lo[i] -= pad;
      b.hi[i] += pad;
    }
    return b;
  }
  Box scaled_about_center(double factor) const {
    Box b = *this;
    for (int i = 0; i < n; ++i) {
      const double c = 0.5 * (lo[i] + hi[i]);
      const double r = 0.5 * extent(i) * factor;
      b.lo[i] = c - r;
      b.hi[i] = c + r;
    }
    return b;
  }
  bool operator==(const Box& o) const {
    if (n != o.n) return false;
    for (int i = 0; i < n; ++i)
      if (lo[i] != o.lo[i] || hi[i] != o.hi[i]) return false;
    return true;
  }
  std::string str() const {
    std::string s = "[";
    for (int i = 0; i < n; ++i) {
      if (i) s += " x ";
      s += "[" + std::to_string(lo[i]) + "," + std::to_string(hi[i]) + "]";
    }
    return s + "]";
  }
};

// Time slab times spatial box; raw coefficients are defined on one of these.
struct SpaceTimeBox {
  double t0 = 0;
  double t1 = 0;
  Box space;

  double clamp_t(double t) const { return std::min(std::max(t, t0), t1); }
  bool operator==(const SpaceTimeBox& o) const {
    return t0 == o.t0 && t1 == o.t1 && space == o.space;
  }
};

// Uniform sampling grid: optional time axis plus the spatial box.
// tcells == 0 means a single slice at t0.
struct SampleGrid {
  Box space;
  std::array<int, 3> cells{1, 1, 1};  // intervals per spatial axis; points = cells+1
  double t0 = 0;
  double t1 = 0;
  int tcells = 0;

  static SampleGrid spatial(const Box& box, std::array<int, 3> cells, double t = 0) {
    return SampleGrid{box, cells, t, t, 0};
  }
  static SampleGrid spacetime(const Box& box, std::array<int, 3> cells, double t0, double t1,
                              int tcells) {
    return SampleGrid{box, cells, t0, t1, tcells};
  }

  bool has_time_axis() const { return tcells > 0; }
  int points(int axis) const { return cells[axis] + 1; }  // spatial axis
  int tpoints() const { return tcells + 1; }
  double h(int axis) const { return space.extent(axis) / cells[axis]; }
  double tau() const { return tcells > 0 ? (t1 - t0) / tcells : 0.0; }
  double x(int axis, int i) const { return space.lo[axis] + i * h(axis); }
  double t(int it) const { return tcells > 0 ? t0 + it * tau() : t0; }

  std::int64_t spatial_points() const {
    std::int64_t p = 1;
    for (int i = 0; i < space.n; ++i) p *= points(i);
    return p;
  }
  std::int64_t total_points() const { return spatial_points() * tpoints(); }

  // Flat index: time outermost, then x1, x2, x3.
  std::int64_t index(int it, std::array<int, 3> ix) const {
    std::int64_t idx = it;
    for (int a = 0; a < space.n; ++a) idx = idx * points(a) + ix[a];
    return idx;
  }

  bool operator==(const SampleGrid& o) const {
    return space == o.space && cells == o.cells && t0 == o.t0 && t1 == o.t1 && tcells == o.tcells;
  }
};

}  // namespace wavesys
