#pragma once

#include <cmath>
#include <span>

#include "wavesys/errors.hpp"

namespace wavesys {

// Ordinary least squares y = slope*x + intercept.
struct LinearFit {
  double slope = 0;
  double intercept = 0;
  double rss = 0;           // residual sum of squares
  double slope_stderr = 0;  // standard error of the slope
  double r2 = 0;
  int m = 0;

  double at(double x) const { return slope * x + intercept; }
};

inline LinearFit linear_fit(std::span<const double> x, std::span<const double> y) {
  const int m = static_cast<int>(x.size());
  if (m != static_cast<int>(y.size()) || m < 2) throw ConfigError("linear_fit: need >= 2 points");
  double sx = 0, sy = 0;
  for (int i = 0; i < m; ++i) {
    sx += x[i];
    sy += y[i];
  }
  const double mx = sx / m, my = sy / m;
  double sxx = 0, sxy = 0, syy = 0;
  for (int i = 0; i < m; ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
    syy += (y[i] - my) * (y[i] - my);
  }
  if (sxx <= 0) throw ConfigError("linear_fit: degenerate abscissae");
  LinearFit fit;
  fit.m = m;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  for (int i = 0; i < m; ++i) {
    const double r = y[i] - fit.at(x[i]);
    fit.rss += r * r;
  }
  fit.slope_stderr = m > 2 ? std::sqrt(fit.rss / (m - 2) / sxx) : 0.0;
  fit.r2 = syy > 0 ? 1.0 - fit.rss / syy : 1.0;
  return fit;
}

}  // namespace wavesys
