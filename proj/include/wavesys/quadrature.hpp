#pragma once

#include <span>
#include <vector>

namespace wavesys {

// Nodes and weights of the m-point Gauss-Legendre rule on [-1, 1].
struct GaussRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

// Computed once per order and cached.
const GaussRule& gauss_legendre(int order);

// Composite rule over consecutive panels [edges[k], edges[k+1]].
struct CompositeRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

CompositeRule composite_gauss(std::span<const double> edges, int order);

// Sorted, deduplicated panel edges for [a, b] with mandatory interior cuts:
// the base splits keep the rule accurate for the bump profile, extra cuts
// align panels with data breakpoints.
std::vector<double> panel_edges(double a, double b, std::span<const double> cuts);

}  // namespace wavesys
