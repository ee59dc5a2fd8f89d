#pragma once

#include <cstdint>
#include <vector>

#include "wavesys/geometry.hpp"
#include "wavesys/smallmat.hpp"

namespace wavesys::genfunc {

// Field values sampled on a uniform grid, point-major with the value
// entries flattened row-major.
struct SampleTable {
  SampleGrid grid;
  int rows = 1;
  int cols = 1;
  std::vector<double> data;

  int entries() const { return rows * cols; }
  double value(std::int64_t point, int r, int c) const {
    return data[point * entries() + r * cols + c];
  }
  Mat at(std::int64_t point) const {
    Mat m(rows, cols);
    for (int r = 0; r < rows; ++r)
      for (int c = 0; c < cols; ++c) m(r, c) = value(point, r, c);
    return m;
  }
  // Largest entry magnitude at one point.
  double max_abs_at(std::int64_t point) const {
    double s = 0;
    const double* p = data.data() + point * entries();
    for (int k = 0; k < entries(); ++k) s = std::max(s, std::abs(p[k]));
    return s;
  }
};

}  // namespace wavesys::genfunc
