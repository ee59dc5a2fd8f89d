#include "wavesys/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>

namespace wavesys {

namespace {

GaussRule compute_rule(int m) {
  GaussRule rule;
  rule.nodes.resize(m);
  rule.weights.resize(m);
  // Newton iteration on the Legendre polynomial, Chebyshev initial guess.
  for (int i = 0; i < (m + 1) / 2; ++i) {
    double x = std::cos(M_PI * (i + 0.75) / (m + 0.5));
    double pp = 0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0, p1 = 0.0;
      for (int j = 0; j < m; ++j) {
        const double p2 = p1;
        p1 = p0;
        p0 = ((2.0 * j + 1.0) * x * p1 - j * p2) / (j + 1.0);
      }
      pp = m * (x * p0 - p1) / (x * x - 1.0);
      const double dx = p0 / pp;
      x -= dx;
      if (std::abs(dx) < 1e-15) break;
    }
    const double w = 2.0 / ((1.0 - x * x) * pp * pp);
    rule.nodes[i] = -x;
    rule.nodes[m - 1 - i] = x;
    rule.weights[i] = w;
    rule.weights[m - 1 - i] = w;
  }
  if (m % 2 == 1) rule.nodes[m / 2] = 0.0;
  return rule;
}

}  // namespace

const GaussRule& gauss_legendre(int order) {
  static std::mutex mu;
  static std::map<int, GaussRule> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(order);
  if (it == cache.end()) it = cache.emplace(order, compute_rule(order)).first;
  return it->second;
}

CompositeRule composite_gauss(std::span<const double> edges, int order) {
  const GaussRule& gl = gauss_legendre(order);
  CompositeRule rule;
  const int panels = static_cast<int>(edges.size()) - 1;
  rule.nodes.reserve(panels * order);
  rule.weights.reserve(panels * order);
  for (int p = 0; p < panels; ++p) {
    const double a = edges[p], b = edges[p + 1];
    const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
    if (half <= 0) continue;
    for (int k = 0; k < order; ++k) {
      rule.nodes.push_back(mid + half * gl.nodes[k]);
      rule.weights.push_back(half * gl.weights[k]);
    }
  }
  return rule;
}

std::vector<double> panel_edges(double a, double b, std::span<const double> cuts) {
  std::vector<double> edges{a, 0.25 * (3 * a + b), 0.5 * (a + b), 0.25 * (a + 3 * b), b};
  for (double c : cuts)
    if (c > a && c < b) edges.push_back(c);
  std::sort(edges.begin(), edges.end());
  // Drop near-duplicate edges; degenerate panels contribute nothing anyway.
  const double tol = 1e-14 * (std::abs(a) + std::abs(b) + 1.0);
  std::vector<double> out;
  for (double e : edges)
    if (out.empty() || e - out.back() > tol) out.push_back(e);
  if (out.back() < b) out.push_back(b);
  return out;
}

}  // namespace wavesys
