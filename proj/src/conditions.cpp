#include "wavesys/asymptotics/conditions.hpp"

#include <cmath>

#include "wavesys/linalg/eig.hpp"

namespace wavesys::asymptotics {

using genfunc::CoefficientNet;
using genfunc::NormKind;
using transform::HyperbolicSystem;
using transform::WaveProblem;

std::string condition_case_name(ConditionCase c) {
  switch (c) {
    case ConditionCase::A: return "A";
    case ConditionCase::B: return "B";
    case ConditionCase::C: return "C";
  }
  return "?";
}

const Hypothesis* ConditionReport::find(const std::string& name) const {
  for (const Hypothesis& h : hypotheses)
    if (h.name == name) return &h;
  return nullptr;
}

void ConditionReport::write(std::ostream& os) const {
  os << "case " << condition_case_name(which) << " (" << target << "): "
     << (aggregate ? "PASS" : "FAIL") << "\n";
  for (const Hypothesis& h : hypotheses) {
    os << "  " << h.name << " [" << h.requirement << "]: " << (h.pass ? "pass" : "fail");
    for (const SweepReport& r : h.reports)
      os << " {" << r.label << ": " << growth_class_name(r.classification)
         << ", p=" << r.exponent << "}";
    if (!h.note.empty()) os << " (" << h.note << ")";
    os << "\n";
  }
}

namespace {

// Per-case sweep configuration: case A keeps the compact family, case B
// switches to the mixed norm over the full domain, case C to the global sup.
SweepConfig case_config(const SweepConfig& cfg, ConditionCase which, const Box& domain) {
  SweepConfig out = cfg;
  switch (which) {
    case ConditionCase::A:
      out.norms = {{NormKind::SupK, 0}};
      if (out.compacts.empty()) out.compacts = SweepConfig::nested_compacts(domain);
      break;
    case ConditionCase::B:
      out.norms = {{NormKind::MixedL1LInf, 0}};
      out.compacts = {domain};
      break;
    case ConditionCase::C:
      out.norms = {{NormKind::SupK, 0}};
      out.compacts = {domain};
      break;
  }
  return out;
}

Hypothesis classify_log_hypothesis(const std::string& name,
                                   const std::vector<CoefficientNet>& nets,
                                   const SweepConfig& cfg) {
  Hypothesis h;
  h.name = name;
  h.requirement = "log-type";
  h.pass = true;
  for (const CoefficientNet& net : nets) {
    // An SPD failure of R makes S / S^{-1} undefined: that is a failed
    // hypothesis, not a crash.
    try {
      SweepReport rep = classify_net(net, cfg);
      h.pass = h.pass && rep.passes_log_type();
      h.worst_exponent = std::max(h.worst_exponent, rep.exponent);
      h.reports.push_back(std::move(rep));
    } catch (const std::exception& e) {
      h.pass = false;
      h.note = e.what();
    }
  }
  return h;
}

Hypothesis exterior_hypothesis(const std::string& name,
                               const std::vector<CoefficientNet>& nets, const SweepConfig& cfg,
                               const Box& domain) {
  Hypothesis h;
  h.name = name;
  h.requirement = "O(1) exterior";
  h.pass = true;
  for (const CoefficientNet& net : nets) {
    try {
      SweepReport rep = classify_values(
          cfg.eps, {exterior_series(net, cfg, domain, cfg.exterior_radius)}, cfg.rules,
          net.label() + "|ext");
      h.pass = h.pass && rep.passes_o1();
      h.worst_exponent = std::max(h.worst_exponent, rep.exponent);
      h.reports.push_back(std::move(rep));
    } catch (const std::exception& e) {
      h.pass = false;
      h.note = e.what();
    }
  }
  return h;
}

CoefficientNet sqrt_net(const CoefficientNet& r) {
  return genfunc::net_transform(
      r,
      [](const Mat& m) {
        return linalg::spd_sqrt(linalg::SymMatrix::from_mat(m, 1e-8)).to_mat();
      },
      r.rows(), r.cols(), "S");
}

CoefficientNet inv_sqrt_net(const CoefficientNet& r) {
  return genfunc::net_transform(
      r,
      [](const Mat& m) {
        const auto dec = linalg::sym_eig(linalg::SymMatrix::from_mat(m, 1e-8));
        std::array<double, kMaxOrder> mapped{};
        for (int i = 0; i < dec.n; ++i) {
          if (dec.lambda[i] <= 0)
            throw NotSpdError("S^{-1}: R eigenvalue " + std::to_string(dec.lambda[i]));
          mapped[i] = 1.0 / std::sqrt(dec.lambda[i]);
        }
        return dec.apply_spectral(std::span<const double>(mapped.data(), dec.n)).to_mat();
      },
      r.rows(), r.cols(), "S^{-1}");
}

std::vector<CoefficientNet> derivative_family(const CoefficientNet& net, bool include_time) {
  std::vector<CoefficientNet> out;
  if (include_time && net.time_dependent()) out.push_back(net_derivative(net, 0));
  for (int a = 1; a <= net.dim(); ++a) out.push_back(net_derivative(net, a));
  return out;
}

}  // namespace

ConditionReport verify_wave_conditions(const WaveProblem& p, ConditionCase which,
                                       const SweepConfig& cfg_in) {
  p.check_shapes();
  const SweepConfig cfg = case_config(cfg_in, which, p.domain);
  cfg.validate();

  ConditionReport report;
  report.which = which;
  report.target = "wave";

  const CoefficientNet S = sqrt_net(p.R);
  const CoefficientNet Sinv = inv_sqrt_net(p.R);

  report.hypotheses.push_back(classify_log_hypothesis("a", {p.a}, cfg));
  report.hypotheses.push_back(classify_log_hypothesis("c", {p.c}, cfg));
  report.hypotheses.push_back(classify_log_hypothesis("b", {p.b}, cfg));
  report.hypotheses.push_back(classify_log_hypothesis("S", {S}, cfg));
  report.hypotheses.push_back(
      classify_log_hypothesis("dS", derivative_family(S, true), cfg));
  report.hypotheses.push_back(classify_log_hypothesis("S^{-1}", {Sinv}, cfg));
  report.hypotheses.push_back(
      classify_log_hypothesis("g'", derivative_family(p.g, false), cfg));

  if (which == ConditionCase::A) {
    if (cfg.exterior_radius <= 0)
      throw ConfigError("verify_wave_conditions: case A needs exterior_radius > 0");
    report.hypotheses.push_back(exterior_hypothesis("S exterior", {S}, cfg, p.domain));
    report.hypotheses.push_back(exterior_hypothesis("g exterior", {p.g}, cfg, p.domain));
  }

  report.aggregate = true;
  for (const Hypothesis& h : report.hypotheses) report.aggregate = report.aggregate && h.pass;
  return report;
}

ConditionReport verify_system_conditions(const HyperbolicSystem& s, ConditionCase which,
                                         const SweepConfig& cfg_in) {
  s.check_shapes();
  const SweepConfig cfg = case_config(cfg_in, which, s.domain);
  cfg.validate();

  ConditionReport report;
  report.which = which;
  report.target = "system";

  std::vector<CoefficientNet> a_derivs;
  for (const CoefficientNet& a : s.A) {
    const auto fam = derivative_family(a, false);
    a_derivs.insert(a_derivs.end(), fam.begin(), fam.end());
  }
  report.hypotheses.push_back(classify_log_hypothesis("A'", a_derivs, cfg));

  const CoefficientNet bsym = genfunc::net_transform(
      s.B,
      [](const Mat& b) {
        Mat out = b;
        for (int i = 0; i < b.rows(); ++i)
          for (int j = 0; j < b.cols(); ++j) out(i, j) = 0.5 * (b(i, j) + b(j, i));
        return out;
      },
      s.B.rows(), s.B.cols(), "sym(B)");
  report.hypotheses.push_back(classify_log_hypothesis("sym(B)", {bsym}, cfg));

  if (which == ConditionCase::A) {
    if (cfg.exterior_radius <= 0)
      throw ConfigError("verify_system_conditions: case A needs exterior_radius > 0");
    report.hypotheses.push_back(exterior_hypothesis("A exterior", s.A, cfg, s.domain));
  }

  report.aggregate = true;
  for (const Hypothesis& h : report.hypotheses) report.aggregate = report.aggregate && h.pass;
  return report;
}

namespace {

double sup_over_compact(const solver::GridSolution& sol, const Box& K) {
  const solver::Grid& g = sol.grid;
  double sup = 0;
  std::array<int, 3> ix{};
  for (std::int64_t p = 0; p < g.npoints(); ++p) {
    bool in = true;
    for (int a = 0; a < g.n; ++a) {
      const double x = g.x(a, ix[a]);
      in = in && x >= K.lo[a] - 1e-12 && x <= K.hi[a] + 1e-12;
    }
    if (in)
      for (int level = 0; level <= g.steps; ++level)
        for (int c = 0; c < sol.ncomp; ++c)
          sup = std::max(sup, std::abs(sol.value(level, p, c)));
    for (int a = g.n - 1; a >= 0; --a) {
      if (++ix[a] < g.points(a)) break;
      ix[a] = 0;
    }
  }
  return sup;
}

double sup_diff_over_compact(const solver::GridSolution& a, const solver::GridSolution& b,
                             const Box& K) {
  const solver::Grid& g = a.grid;
  double sup = 0;
  std::array<int, 3> ix{};
  for (std::int64_t p = 0; p < g.npoints(); ++p) {
    bool in = true;
    for (int ax = 0; ax < g.n; ++ax) {
      const double x = g.x(ax, ix[ax]);
      in = in && x >= K.lo[ax] - 1e-12 && x <= K.hi[ax] + 1e-12;
    }
    if (in)
      for (int level = 0; level <= g.steps; ++level)
        for (int c = 0; c < a.ncomp; ++c)
          sup = std::max(sup, std::abs(a.value(level, p, c) - b.value(level, p, c)));
    for (int ax = g.n - 1; ax >= 0; --ax) {
      if (++ix[ax] < g.points(ax)) break;
      ix[ax] = 0;
    }
  }
  return sup;
}

// Smooth compactly supported bump used to plant perturbations.
CoefficientNet perturbation_net(const Box& domain, double amp, int order) {
  const Box support = domain.scaled_about_center(0.25);
  return CoefficientNet::closed_form(
      domain.n, 1, 1,
      [support, amp, order, n = domain.n](double eps, double, const SpaceVec& x) {
        double r2 = 0;
        for (int a = 0; a < n; ++a) {
          const double c = 0.5 * (support.lo[a] + support.hi[a]);
          const double r = 0.5 * support.extent(a);
          const double y = (x[a] - c) / r;
          r2 += y * y;
        }
        if (r2 >= 1.0) return Mat::scalar(0.0);
        double scale = amp * std::exp(1.0 - 1.0 / (1.0 - r2));
        for (int k = 0; k < order; ++k) scale *= eps;
        return Mat::scalar(scale);
      },
      false, "planted");
}

}  // namespace

ModeratenessReport solution_moderateness(const WaveProblem& p, const ModeratenessOptions& opt,
                                         const SweepConfig& cfg) {
  cfg.validate();
  const HyperbolicSystem sys = wave_to_system(p);

  ModeratenessReport out;
  out.eps = cfg.eps;

  WaveProblem perturbed = p;
  if (opt.perturbation) {
    const CoefficientNet bump3 = perturbation_net(p.domain, opt.perturb_amp, 3);
    perturbed.u0 = genfunc::net_add(p.u0, bump3);
    perturbed.u1 = genfunc::net_add(p.u1, bump3);
    perturbed.f = genfunc::net_add(p.f, bump3);
  }
  const HyperbolicSystem sys_pert = opt.perturbation ? wave_to_system(perturbed) : sys;

  const auto run_sweep = [&](std::array<int, 3> cells, bool with_perturbation) {
    std::vector<SeriesReport> series(cfg.compacts.size());
    for (size_t ki = 0; ki < cfg.compacts.size(); ++ki) {
      series[ki].norm_kind = "sup";
      series[ki].k_id = "K" + std::to_string(ki);
    }
    for (double eps : cfg.eps) {
      solver::SolveOptions sopt = opt.solve;
      bool failed = false;
      solver::GridSolution sol;
      try {
        const double lam = solver::estimate_lambda_max(
            sys, eps,
            solver::make_grid(p.domain, cells, p.horizon, 1.0, opt.cfl_safety, opt.boundary),
            sopt.seed);
        const solver::Grid grid =
            solver::make_grid(p.domain, cells, p.horizon, lam, opt.cfl_safety, opt.boundary);
        sopt.lambda_max_hint = lam;
        sol = solver::solve_system(sys, grid, eps, sopt);
        for (size_t ki = 0; ki < cfg.compacts.size(); ++ki)
          series[ki].values.push_back(sup_over_compact(sol, cfg.compacts[ki]));
        if (with_perturbation && opt.perturbation) {
          const solver::GridSolution sol_p = solver::solve_system(sys_pert, grid, eps, sopt);
          out.perturb_discrepancy.push_back(sup_diff_over_compact(sol, sol_p, cfg.compacts[0]));
        }
      } catch (const BlowUpError&) {
        failed = true;
      } catch (const CflError&) {
        failed = true;
      }
      if (failed) {
        out.solver_failed = true;
        out.failed_eps.push_back(eps);
        for (size_t ki = 0; ki < cfg.compacts.size(); ++ki)
          series[ki].values.push_back(std::numeric_limits<double>::infinity());
        if (with_perturbation && opt.perturbation)
          out.perturb_discrepancy.push_back(std::numeric_limits<double>::infinity());
      }
    }
    return classify_values(cfg.eps, series, cfg.rules, "w");
  };

  out.sweep = run_sweep(opt.cells, true);

  if (opt.refine_control) {
    std::array<int, 3> fine = opt.cells;
    for (int a = 0; a < p.domain.n; ++a) fine[a] *= 2;
    out.sweep_refined = run_sweep(fine, false);
    out.exponent_shift = std::abs(out.sweep.exponent - out.sweep_refined.exponent);
    out.refine_ok = out.exponent_shift < 0.1;
  }

  if (opt.perturbation && !out.solver_failed) {
    std::vector<double> x, y;
    for (size_t i = 0; i < cfg.eps.size(); ++i)
      if (out.perturb_discrepancy[i] > 0) {
        x.push_back(std::log(1.0 / cfg.eps[i]));
        y.push_back(std::log(out.perturb_discrepancy[i]));
      }
    if (x.size() >= 3) out.perturb_decay_order = -linear_fit(x, y).slope;
  }
  return out;
}

GtResult geroch_traschen_pipeline(
    const std::vector<std::shared_ptr<const genfunc::PiecewiseExpr>>& metric_r, int n,
    const Box& domain, double horizon, const SweepConfig& cfg, const GtOptions& opt) {
  if (static_cast<int>(metric_r.size()) != n * n)
    throw ConfigError("geroch_traschen_pipeline: expected n*n metric components (row-major)");
  for (const auto& comp : metric_r) {
    if (comp->dim() != n)
      throw ConfigError("geroch_traschen_pipeline: component dimension mismatch");
    if (comp->depends_on_t())
      throw ConfigError("geroch_traschen_pipeline: the metric surrogate is spatial; "
                        "time-dependent components are not admitted");
  }
  if (cfg.exterior_radius <= 0)
    throw ConfigError("geroch_traschen_pipeline: exterior_radius required (metric must be "
                      "constant outside it)");

  // Discontinuities must lie inside the exterior radius (the cut off region).
  for (const auto& comp : metric_r)
    for (int a = 1; a <= n; ++a)
      for (double b : comp->breakpoints(a))
        if (std::abs(b) > cfg.exterior_radius)
          throw ConfigError("geroch_traschen_pipeline: breakpoint at " + std::to_string(b) +
                            " outside the exterior radius; the metric is not constant there");

  // Admissibility: sample the raw block away from its discontinuities and
  // require eigenvalues (hence det) bounded and bounded away from zero.
  GtResult result;
  result.raw_min_eig = std::numeric_limits<double>::infinity();
  result.raw_min_det = std::numeric_limits<double>::infinity();
  {
    std::array<int, 3> ix{};
    std::array<int, 3> cells{1, 1, 1};
    for (int a = 0; a < n; ++a) cells[a] = opt.raw_sample_cells;
    const double off = 1e-3 * domain.min_extent();
    while (true) {
      SpaceVec x{};
      for (int a = 0; a < n; ++a) x[a] = domain.lo[a] + domain.extent(a) * ix[a] / cells[a];
      bool near_break = false;
      for (const auto& comp : metric_r)
        for (int a = 1; a <= n; ++a)
          for (double b : comp->breakpoints(a))
            near_break = near_break || std::abs(x[a - 1] - b) < off;
      if (!near_break) {
        Mat r(n, n);
        for (int i = 0; i < n; ++i)
          for (int j = 0; j < n; ++j) r(i, j) = metric_r[i * n + j]->eval(0.0, x);
        const auto dec = linalg::sym_eig(linalg::SymMatrix::from_mat(r, 1e-9));
        double det = 1;
        for (int i = 0; i < n; ++i) det *= dec.eigenvalue(i);
        result.raw_min_eig = std::min(result.raw_min_eig, dec.eigenvalue(0));
        result.raw_max_eig = std::max(result.raw_max_eig, dec.eigenvalue(n - 1));
        result.raw_min_det = std::min(result.raw_min_det, det);
      }
      int a = 0;
      for (; a < n; ++a) {
        if (++ix[a] <= cells[a]) break;
        ix[a] = 0;
      }
      if (a == n) break;
    }
  }
  if (result.raw_min_eig < opt.raw_eig_floor || result.raw_max_eig > opt.raw_eig_cap)
    throw ConfigError("geroch_traschen_pipeline: raw metric outside the admissible class "
                      "(min eig " + std::to_string(result.raw_min_eig) + ", max eig " +
                      std::to_string(result.raw_max_eig) + ")");

  const genfunc::Mollifier mollifier(opt.mode, n);

  WaveProblem& p = result.problem;
  p.n = n;
  p.domain = domain;
  p.horizon = horizon;
  p.R = CoefficientNet::mollified(metric_r, n, n, mollifier, "R");
  p.R.mark_spd();
  p.g = CoefficientNet::constant(n, Mat(n, 1), "g");
  p.a = CoefficientNet::constant_scalar(n, 0.0, "a");
  p.b = CoefficientNet::constant(n, Mat(n, 1), "b");
  p.c = CoefficientNet::constant_scalar(n, 0.0, "c");
  p.f = CoefficientNet::constant_scalar(n, 0.0, "f");
  p.u0 = opt.u0.valid() ? opt.u0 : perturbation_net(domain, 1.0, 0);
  p.u1 = opt.u1.valid() ? opt.u1 : CoefficientNet::constant_scalar(n, 0.0, "u1");

  // The padding of the raw box must cover the kernel at the largest epsilon.
  const double pad_needed = mollifier.support_radius(cfg.eps.front());
  for (const auto& comp : metric_r)
    for (int a = 0; a < n; ++a)
      if (comp->box().space.lo[a] > domain.lo[a] - pad_needed ||
          comp->box().space.hi[a] < domain.hi[a] + pad_needed)
        throw ConfigError("geroch_traschen_pipeline: raw box padding below the kernel "
                          "radius " + std::to_string(pad_needed));

  result.report = verify_wave_conditions(p, ConditionCase::A, cfg);
  return result;
}

}  // namespace wavesys::asymptotics
