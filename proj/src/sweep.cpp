#include "wavesys/asymptotics/sweep.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "wavesys/errors.hpp"

namespace wavesys::asymptotics {

using genfunc::CoefficientNet;
using genfunc::NormKind;
using genfunc::NormRequest;

std::string growth_class_name(GrowthClass c) {
  switch (c) {
    case GrowthClass::NegligibleEvidence: return "negligible-evidence";
    case GrowthClass::O1: return "O(1)";
    case GrowthClass::LogType: return "log-type";
    case GrowthClass::Moderate: return "moderate";
    case GrowthClass::DivergentPower: return "divergent-power";
  }
  return "?";
}

int growth_rank(GrowthClass c) {
  switch (c) {
    case GrowthClass::NegligibleEvidence: return 0;
    case GrowthClass::O1: return 1;
    case GrowthClass::LogType: return 2;
    case GrowthClass::Moderate: return 3;
    case GrowthClass::DivergentPower: return 4;
  }
  return 4;
}

FitResult fit_exponent(std::span<const double> eps, std::span<const double> values) {
  if (eps.size() != values.size() || eps.size() < 6)
    throw ConfigError("fit_exponent: need at least 6 sweep points");
  std::vector<double> x(eps.size()), logv(eps.size()), v(values.begin(), values.end());
  for (size_t i = 0; i < eps.size(); ++i) {
    if (!(values[i] > 0) || !std::isfinite(values[i]))
      throw ConfigError("fit_exponent: values must be positive and finite");
    x[i] = std::log(1.0 / eps[i]);
    logv[i] = std::log(values[i]);
  }

  FitResult out;
  const LinearFit power = linear_fit(x, logv);
  out.p = power.slope;
  out.p_stderr = power.slope_stderr;
  out.power_rss = power.rss;

  const LinearFit logfit = linear_fit(x, v);
  out.q = logfit.slope;
  out.q_stderr = logfit.slope_stderr;
  out.log_rss = logfit.rss;

  double pr = 0, lr = 0;
  for (size_t i = 0; i < x.size(); ++i) {
    const double ppred = std::exp(power.at(x[i]));
    const double lpred = logfit.at(x[i]);
    pr += (ppred - v[i]) * (ppred - v[i]) / (v[i] * v[i]);
    lr += (lpred - v[i]) * (lpred - v[i]) / (v[i] * v[i]);
  }
  out.power_rel_rms = std::sqrt(pr / x.size());
  out.log_rel_rms = std::sqrt(lr / x.size());

  const size_t half = x.size() / 2;
  if (half >= 2 && x.size() - half >= 2) {
    const LinearFit q1 = linear_fit(std::span(x).first(half), std::span(v).first(half));
    const LinearFit q2 = linear_fit(std::span(x).subspan(half), std::span(v).subspan(half));
    out.q_split_drift =
        std::abs(q1.slope - q2.slope) / std::max(std::abs(logfit.slope), 1e-300);
  }
  return out;
}

GrowthClass classify_series(std::span<const double> eps, std::span<const double> values,
                            const ClassifyRules& rules, FitResult* fit_out, int* moderate_order,
                            bool* fit_valid) {
  if (fit_valid) *fit_valid = false;
  if (moderate_order) *moderate_order = 0;

  for (double v : values)
    if (!std::isfinite(v)) return GrowthClass::DivergentPower;

  double vmax = 0, vmin = std::numeric_limits<double>::infinity();
  for (double v : values) {
    vmax = std::max(vmax, std::abs(v));
    vmin = std::min(vmin, std::abs(v));
  }
  if (vmax < rules.negligible_floor) return GrowthClass::NegligibleEvidence;

  // Clamp stray zeros so the log fit is defined; they only strengthen decay.
  std::vector<double> clamped(values.begin(), values.end());
  for (double& v : clamped) v = std::max(std::abs(v), 0.1 * rules.negligible_floor);
  const FitResult fit = fit_exponent(eps, clamped);
  if (fit_out) *fit_out = fit;
  if (fit_valid) *fit_valid = true;

  if (fit.p <= -(rules.negligible_decay_min - rules.o1_exponent_tol))
    return GrowthClass::NegligibleEvidence;

  if (std::abs(fit.p) <= rules.o1_exponent_tol && vmax < rules.o1_ratio_max * std::max(vmin, 1e-300))
    return GrowthClass::O1;

  if (fit.log_rel_rms < fit.power_rel_rms && fit.q > 0 &&
      fit.q_split_drift <= rules.log_q_stability)
    return GrowthClass::LogType;

  if (moderate_order) *moderate_order = static_cast<int>(std::ceil(fit.p + rules.o1_exponent_tol));
  return GrowthClass::Moderate;
}

std::vector<double> SweepConfig::default_eps() {
  std::vector<double> eps;
  for (int k = 4; k <= 14; ++k) eps.push_back(std::pow(2.0, -k));
  return eps;
}

std::vector<Box> SweepConfig::nested_compacts(const Box& domain) {
  return {domain.scaled_about_center(0.25), domain.scaled_about_center(0.5),
          domain.scaled_about_center(0.75)};
}

void SweepConfig::validate() const {
  if (eps.size() < 6) throw ConfigError("SweepConfig: need at least 6 epsilon points");
  for (size_t i = 0; i + 1 < eps.size(); ++i)
    if (!(eps[i] > eps[i + 1])) throw ConfigError("SweepConfig: eps must be strictly decreasing");
  if (compacts.empty()) throw ConfigError("SweepConfig: no compact sets");
  if (norms.empty()) throw ConfigError("SweepConfig: no norm requests");
}

namespace {

struct SubGrid {
  SampleGrid grid;
  Box K;
};

// Base grid over K plus refinement windows around each spatial breakpoint,
// sized to the net's kernel width at this epsilon.
std::vector<SubGrid> sampling_plan(const CoefficientNet& net, const SweepConfig& cfg,
                                   const Box& K, double eps, bool need_time) {
  const int n = net.dim();
  std::vector<SubGrid> plan;
  std::array<int, 3> base_cells{1, 1, 1};
  for (int a = 0; a < n; ++a) base_cells[a] = cfg.base_cells;

  const auto push = [&](const Box& box, std::array<int, 3> cells) {
    SampleGrid g = need_time
                       ? SampleGrid::spacetime(box, cells, 0.0, cfg.horizon, cfg.tcells)
                       : SampleGrid::spatial(box, cells, 0.0);
    plan.push_back({g, box});
  };
  push(K, base_cells);

  const double w = net.feature_width(eps);
  if (w <= 0) return plan;
  for (int a = 0; a < n; ++a) {
    for (double b : net.breakpoints(a + 1)) {
      const double lo = std::max(b - 2 * w, K.lo[a]);
      const double hi = std::min(b + 2 * w, K.hi[a]);
      if (hi - lo <= 1e-14) continue;
      Box window = K;
      window.lo[a] = lo;
      window.hi[a] = hi;
      std::array<int, 3> cells = base_cells;
      const double step = w / cfg.points_per_width;
      cells[a] = std::max(4, std::min(8192, static_cast<int>(std::ceil((hi - lo) / step))));
      push(window, cells);
    }
  }
  return plan;
}

double combined_norm(const CoefficientNet& net, const SweepConfig& cfg, const Box& K,
                     double eps, NormKind kind, int k) {
  const bool need_time = kind == NormKind::MixedL1LInf || net.time_dependent();
  const std::vector<SubGrid> plan = sampling_plan(net, cfg, K, eps, need_time);

  if (kind == NormKind::MixedL1LInf) {
    // Slice sups share the time discretization across subgrids.
    std::vector<double> sups;
    for (const SubGrid& sg : plan) {
      const auto table = net.sample(eps, sg.grid);
      const std::vector<double> s = genfunc::slice_sups(*table, sg.K);
      if (sups.empty()) sups.assign(s.size(), 0.0);
      for (size_t i = 0; i < s.size(); ++i) sups[i] = std::max(sups[i], s[i]);
    }
    const double tau = cfg.horizon / cfg.tcells;
    double integral = 0;
    for (size_t i = 0; i < sups.size(); ++i)
      integral += (i == 0 || i + 1 == sups.size() ? 0.5 : 1.0) * tau * sups[i];
    return integral;
  }

  if (kind == NormKind::Sobolev) {
    // Integral norms use the base grid only.
    NormRequest req;
    req.kind = kind;
    req.K = plan.front().K;
    req.k = k;
    return genfunc::compute_norm(*net.sample(eps, plan.front().grid), req);
  }

  double best = 0;
  for (const SubGrid& sg : plan) {
    NormRequest req;
    req.kind = kind;
    req.K = sg.K;
    req.k = k;
    best = std::max(best, genfunc::compute_norm(*net.sample(eps, sg.grid), req));
  }
  return best;
}

void finalize_report(SweepReport& rep, const ClassifyRules& rules) {
  rep.classification = GrowthClass::NegligibleEvidence;
  rep.moderate_order = 0;
  bool any_fit = false;
  double pmax = -std::numeric_limits<double>::infinity();
  for (SeriesReport& s : rep.series) {
    s.cls = classify_series(rep.eps, s.values, rules, &s.fit, &s.moderate_order, &s.fit_valid);
    if (growth_rank(s.cls) > growth_rank(rep.classification)) rep.classification = s.cls;
    if (s.fit_valid) {
      any_fit = true;
      pmax = std::max(pmax, s.fit.p);
    }
    rep.moderate_order = std::max(rep.moderate_order, s.moderate_order);
  }
  rep.exponent = any_fit ? pmax : 0.0;
}

}  // namespace

SweepReport classify_net(const CoefficientNet& net, const SweepConfig& cfg) {
  cfg.validate();
  SweepReport rep;
  rep.label = net.label();
  rep.eps = cfg.eps;
  for (const auto& [kind, k] : cfg.norms) {
    for (size_t ki = 0; ki < cfg.compacts.size(); ++ki) {
      SeriesReport series;
      series.norm_kind = genfunc::norm_kind_name(kind);
      series.k = k;
      series.k_id = "K" + std::to_string(ki);
      for (double eps : cfg.eps) {
        try {
          series.values.push_back(combined_norm(net, cfg, cfg.compacts[ki], eps, kind, k));
        } catch (const std::exception& e) {
          throw ConfigError("classify_net: evaluation of '" + net.label() + "' failed at eps=" +
                            std::to_string(eps) + ": " + e.what());
        }
      }
      rep.series.push_back(std::move(series));
    }
  }
  finalize_report(rep, cfg.rules);
  return rep;
}

SeriesReport exterior_series(const CoefficientNet& net, const SweepConfig& cfg,
                             const Box& domain, double radius) {
  const int n = net.dim();
  SeriesReport series;
  series.norm_kind = "sup";
  series.k_id = "exterior";
  const bool need_time = net.time_dependent();
  std::array<int, 3> cells{1, 1, 1};
  for (int a = 0; a < n; ++a) cells[a] = cfg.base_cells;
  const SampleGrid grid =
      need_time ? SampleGrid::spacetime(domain, cells, 0.0, cfg.horizon, cfg.tcells)
                : SampleGrid::spatial(domain, cells, 0.0);

  for (double eps : cfg.eps) {
    const auto table = net.sample(eps, grid);
    double sup = 0;
    const std::int64_t spts = grid.spatial_points();
    for (int it = 0; it < grid.tpoints(); ++it) {
      std::array<int, 3> ix{};
      for (std::int64_t p = 0; p < spts; ++p) {
        SpaceVec x{};
        for (int a = 0; a < n; ++a) x[a] = grid.x(a, ix[a]);
        if (std::sqrt(sq_norm(x, n)) > radius)
          sup = std::max(sup, table->max_abs_at(it * spts + p));
        for (int a = n - 1; a >= 0; --a) {
          if (++ix[a] <= grid.cells[a]) break;
          ix[a] = 0;
        }
      }
    }
    series.values.push_back(sup);
  }
  return series;
}

SweepReport classify_values(const std::vector<double>& eps,
                            const std::vector<SeriesReport>& series, const ClassifyRules& rules,
                            const std::string& label) {
  SweepReport rep;
  rep.label = label;
  rep.eps = eps;
  rep.series = series;
  finalize_report(rep, rules);
  return rep;
}

void write_sweep_csv(std::ostream& os, const SweepReport& report) {
  os << "epsilon,norm_kind,K_id,value\n";
  char buf[64];
  for (const SeriesReport& s : report.series)
    for (size_t i = 0; i < report.eps.size(); ++i) {
      std::snprintf(buf, sizeof buf, "%.17g", report.eps[i]);
      os << buf << "," << s.norm_kind << "," << s.k_id << ",";
      std::snprintf(buf, sizeof buf, "%.17g", s.values[i]);
      os << buf << "\n";
    }
}

}  // namespace wavesys::asymptotics
