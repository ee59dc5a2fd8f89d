#include "wavesys/genfunc/piecewise.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "wavesys/errors.hpp"

namespace wavesys::genfunc {

namespace {

std::string poly_axis_name(int axis) {
  static const char* names[4] = {"t", "x1", "x2", "x3"};
  return names[axis];
}

}  // namespace

std::string Polynomial::str() const {
  if (terms_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const Monomial& m : terms_) {
    if (!first) os << (m.coef >= 0 ? " + " : " - ");
    else if (m.coef < 0) os << "-";
    first = false;
    os << std::abs(m.coef);
    for (int a = 0; a < 4; ++a)
      if (m.exp[a] > 0) {
        os << "*" << poly_axis_name(a);
        if (m.exp[a] > 1) os << "^" << m.exp[a];
      }
  }
  return os.str();
}

PiecewiseExpr::PiecewiseExpr(int n, const SpaceTimeBox& box, std::vector<Region> regions)
    : n_(n), box_(box), regions_(std::move(regions)) {
  if (n < 1 || n > 3) throw ConfigError("PiecewiseExpr: spatial dimension must be 1..3");
  if (regions_.empty()) throw ConfigError("PiecewiseExpr: no regions");
  for (size_t k = 0; k < regions_.size(); ++k) {
    if (regions_[k].id.empty()) regions_[k].id = "region#" + std::to_string(k + 1);
    if (regions_[k].poly.total_degree() > kMaxCoeffDegree)
      throw ConfigError("PiecewiseExpr: polynomial degree " +
                        std::to_string(regions_[k].poly.total_degree()) + " in " +
                        regions_[k].id + " exceeds " + std::to_string(kMaxCoeffDegree));
  }
  validate_partition();
  collect_breakpoints();
  for (const Region& r : regions_)
    if (r.poly.depends_on(0) || r.bounds[0].lo > box_.t0 || r.bounds[0].hi < box_.t1)
      depends_on_t_ = true;
}

PiecewiseExpr PiecewiseExpr::constant(int n, const SpaceTimeBox& box, double v) {
  Region r;
  r.poly = Polynomial::constant(v);
  return PiecewiseExpr(n, box, {r});
}

double PiecewiseExpr::eval(double t, const SpaceVec& x) const {
  // Constant extension beyond the definition box.
  const double tc = box_.clamp_t(t);
  const SpaceVec xc = box_.space.clamped(x);
  for (const Region& r : regions_)
    if (r.contains(tc, xc, n_)) return r.poly.eval(tc, xc);
  // Boundary points can fall between half-open region edges after clamping;
  // nudge inward and retry before giving up.
  for (const Region& r : regions_) {
    bool ok = true;
    const double tol = 1e-12 * (1.0 + std::abs(tc));
    if (tc < r.bounds[0].lo - tol || tc > r.bounds[0].hi + tol) ok = false;
    for (int a = 0; ok && a < n_; ++a) {
      const double tola = 1e-12 * (1.0 + std::abs(xc[a]));
      if (xc[a] < r.bounds[a + 1].lo - tola || xc[a] > r.bounds[a + 1].hi + tola) ok = false;
    }
    if (ok) return r.poly.eval(tc, xc);
  }
  throw DomainError("PiecewiseExpr: no region contains the evaluation point");
}

void PiecewiseExpr::validate_partition() const {
  // Interval arithmetic on the region bounds: cut the box into elementary
  // cells along every region edge and require each cell center to lie in
  // exactly one region.
  const int axes = n_ + 1;
  std::array<std::vector<double>, 4> cuts;
  cuts[0] = {box_.t0, box_.t1};
  for (int a = 0; a < n_; ++a) cuts[a + 1] = {box_.space.lo[a], box_.space.hi[a]};
  for (const Region& r : regions_)
    for (int a = 0; a < axes; ++a) {
      const double axis_lo = a == 0 ? box_.t0 : box_.space.lo[a - 1];
      const double axis_hi = a == 0 ? box_.t1 : box_.space.hi[a - 1];
      for (double v : {r.bounds[a].lo, r.bounds[a].hi})
        if (v > axis_lo && v < axis_hi) cuts[a].push_back(v);
    }
  for (int a = 0; a < axes; ++a) {
    std::sort(cuts[a].begin(), cuts[a].end());
    cuts[a].erase(std::unique(cuts[a].begin(), cuts[a].end(),
                              [](double u, double v) { return std::abs(u - v) < 1e-13; }),
                  cuts[a].end());
    if (cuts[a].size() < 2)
      throw ConfigError("PiecewiseExpr: degenerate definition box on axis " +
                        poly_axis_name(a));
  }

  std::array<int, 4> ncell{1, 1, 1, 1};
  for (int a = 0; a < axes; ++a) ncell[a] = static_cast<int>(cuts[a].size()) - 1;
  std::vector<int> used(regions_.size(), 0);
  std::array<int, 4> idx{};
  while (true) {
    double t = 0.5 * (cuts[0][idx[0]] + cuts[0][idx[0] + 1]);
    SpaceVec x{};
    for (int a = 0; a < n_; ++a) x[a] = 0.5 * (cuts[a + 1][idx[a + 1]] + cuts[a + 1][idx[a + 1] + 1]);

    const Region* first = nullptr;
    for (size_t k = 0; k < regions_.size(); ++k) {
      const Region& r = regions_[k];
      if (!r.contains(t, x, n_)) continue;
      if (first != nullptr) {
        throw ConfigError("PiecewiseExpr: regions " + first->id + " and " + r.id +
                          " overlap near t=" + std::to_string(t) + ", x1=" +
                          std::to_string(x[0]));
      }
      first = &r;
      ++used[k];
    }
    if (first == nullptr)
      throw ConfigError("PiecewiseExpr: coverage gap near t=" + std::to_string(t) +
                        ", x1=" + std::to_string(x[0]));

    int a = 0;
    for (; a < axes; ++a) {
      if (++idx[a] < ncell[a]) break;
      idx[a] = 0;
    }
    if (a == axes) break;
  }
  for (size_t k = 0; k < regions_.size(); ++k)
    if (used[k] == 0)
      throw ConfigError("PiecewiseExpr: " + regions_[k].id +
                        " lies outside the definition box");
}

void PiecewiseExpr::collect_breakpoints() {
  const int axes = n_ + 1;
  for (int a = 0; a < axes; ++a) {
    const double axis_lo = a == 0 ? box_.t0 : box_.space.lo[a - 1];
    const double axis_hi = a == 0 ? box_.t1 : box_.space.hi[a - 1];
    std::vector<double>& pts = breakpoints_[a];
    for (const Region& r : regions_)
      for (double v : {r.bounds[a].lo, r.bounds[a].hi})
        if (v > axis_lo && v < axis_hi) pts.push_back(v);
    std::sort(pts.begin(), pts.end());
    pts.erase(std::unique(pts.begin(), pts.end(),
                          [](double u, double v) { return std::abs(u - v) < 1e-13; }),
              pts.end());
  }
}

}  // namespace wavesys::genfunc
