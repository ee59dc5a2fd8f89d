#include "wavesys/genfunc/mollifier.hpp"

#include <cmath>
#include <vector>

#include "wavesys/errors.hpp"
#include "wavesys/quadrature.hpp"

namespace wavesys::genfunc {

namespace {

double bump_r2(double r2) { return r2 < 1.0 ? std::exp(-1.0 / (1.0 - r2)) : 0.0; }

// Tensor quadrature of the unnormalized bump over [-1,1]^d.
double tensor_bump_mass(int d, int order, int base_panels) {
  std::vector<double> edges;
  for (int k = 0; k <= base_panels; ++k) edges.push_back(-1.0 + 2.0 * k / base_panels);
  const CompositeRule rule = composite_gauss(edges, order);
  const int m = static_cast<int>(rule.nodes.size());
  double mass = 0;
  std::array<int, 3> idx{};
  while (true) {
    double r2 = 0, w = 1;
    for (int a = 0; a < d; ++a) {
      r2 += rule.nodes[idx[a]] * rule.nodes[idx[a]];
      w *= rule.weights[idx[a]];
    }
    mass += w * bump_r2(r2);
    int a = 0;
    for (; a < d; ++a) {
      if (++idx[a] < m) break;
      idx[a] = 0;
    }
    if (a == d) break;
  }
  return mass;
}

}  // namespace

Mollifier::Mollifier(MollifierMode mode, int dim) : mode_(mode), dim_(dim) {
  if (dim < 1 || dim > 3)
    throw ConfigError("Mollifier: dimension must be 1..3 (space-time smoothing is "
                      "supported up to two spatial dimensions)");
  const double q = tensor_bump_mass(dim, quad_order, 4);
  const double q_ref = tensor_bump_mass(dim, 48, 8);
  c_ = 1.0 / q;
  mass_check_ = q / q_ref;
}

double Mollifier::scale(double eps) const {
  if (!(eps > 0.0) || eps > 1.0) throw ConfigError("Mollifier: eps must be in (0, 1]");
  if (mode_ == MollifierMode::Model) return eps;
  if (eps >= 1.0) throw ConfigError("Mollifier: log rescaling needs eps < 1");
  return 1.0 / std::log(1.0 / eps);
}

double Mollifier::profile_r2(double r2) const { return c_ * bump_r2(r2); }

double Mollifier::eval(double eps, std::span<const double> y) const {
  const double s = scale(eps);
  double r2 = 0;
  for (double v : y) r2 += (v / s) * (v / s);
  double scale_pow = 1;
  for (int a = 0; a < dim_; ++a) scale_pow *= s;
  return profile_r2(r2) / scale_pow;
}

void Mollifier::validate(std::span<const double> eps_list, double tol) const {
  // The scaled kernel integral is scale-invariant under the production rule,
  // so the check reduces to the normalized profile mass against a refined rule.
  const double err = std::abs(mass_check_ - 1.0);
  if (err > tol)
    throw ConfigError("Mollifier: kernel mass deviates from 1 by " + std::to_string(err));
  for (double eps : eps_list) scale(eps);  // range check per epsilon
}

MollifiedField::MollifiedField(std::shared_ptr<const PiecewiseExpr> raw, Mollifier m, double eps)
    : raw_(std::move(raw)), m_(m), eps_(eps) {
  const int n = raw_->dim();
  if (m_.dim() == n) {
    over_time_ = false;
    if (!raw_->breakpoints(0).empty())
      throw ConfigError("mollify: raw data has time breakpoints; use a space-time "
                        "mollifier (dimension n+1)");
  } else if (m_.dim() == n + 1) {
    over_time_ = true;
  } else {
    throw ConfigError("mollify: mollifier dimension " + std::to_string(m_.dim()) +
                      " does not match spatial dimension " + std::to_string(n));
  }
  m_.validate(std::array<double, 1>{eps});
}

double MollifiedField::operator()(double t, const SpaceVec& x) const {
  const double s = m_.scale(eps_);
  const SpaceTimeBox& box = raw_->box();

  // The convolution stencil must stay inside the raw definition box.
  if (box.space.face_distance(x) < s - 1e-13 * (1.0 + s))
    throw DomainError("mollify: evaluation point within kernel radius " + std::to_string(s) +
                      " of the raw data boundary");
  if (over_time_ && std::min(t - box.t0, box.t1 - t) < s - 1e-13 * (1.0 + s))
    throw DomainError("mollify: evaluation time within kernel radius of the raw data "
                      "time boundary");

  // Per-axis composite rules in kernel coordinates, panels split where the
  // integrand crosses a region boundary of the raw data.
  const int d = m_.dim();
  std::array<CompositeRule, 3> rules;
  for (int a = 0; a < d; ++a) {
    const int raw_axis = over_time_ ? a : a + 1;  // 0 = t in PiecewiseExpr axes
    const double center = over_time_ ? (a == 0 ? t : x[a - 1]) : x[a];
    std::vector<double> cuts;
    for (double b : raw_->breakpoints(raw_axis)) {
      const double y = (center - b) / s;
      if (y > -1.0 && y < 1.0) cuts.push_back(y);
    }
    rules[a] = composite_gauss(panel_edges(-1.0, 1.0, cuts), Mollifier::quad_order);
  }

  double acc = 0;
  std::array<int, 3> idx{};
  while (true) {
    double r2 = 0, w = 1;
    for (int a = 0; a < d; ++a) {
      const double y = rules[a].nodes[idx[a]];
      r2 += y * y;
      w *= rules[a].weights[idx[a]];
    }
    if (r2 < 1.0) {
      double ts = t;
      SpaceVec xs = x;
      if (over_time_) {
        ts = t - s * rules[0].nodes[idx[0]];
        for (int a = 1; a < d; ++a) xs[a - 1] = x[a - 1] - s * rules[a].nodes[idx[a]];
      } else {
        for (int a = 0; a < d; ++a) xs[a] = x[a] - s * rules[a].nodes[idx[a]];
      }
      acc += w * m_.profile_r2(r2) * raw_->eval(ts, xs);
    }
    int a = 0;
    for (; a < d; ++a) {
      if (++idx[a] < static_cast<int>(rules[a].nodes.size())) break;
      idx[a] = 0;
    }
    if (a == d) break;
  }
  return acc;
}

MollifiedField mollify(std::shared_ptr<const PiecewiseExpr> raw, const Mollifier& m, double eps) {
  return MollifiedField(std::move(raw), m, eps);
}

}  // namespace wavesys::genfunc
