#pragma once

#include <memory>

#include "wavesys/asymptotics/sweep.hpp"
#include "wavesys/genfunc/mollifier.hpp"
#include "wavesys/solver/solve.hpp"
#include "wavesys/transform/transform.hpp"

namespace wavesys::asymptotics {

enum class ConditionCase { A, B, C };

std::string condition_case_name(ConditionCase c);

struct Hypothesis {
  std::string name;         // which coefficient / block
  std::string requirement;  // "log-type" or "O(1) exterior"
  std::vector<SweepReport> reports;
  bool pass = false;
  double worst_exponent = 0;
  std::string note;  // e.g. an SPD failure that makes the net undefined
};

struct ConditionReport {
  ConditionCase which = ConditionCase::A;
  std::string target;  // "wave" or "system"
  std::vector<Hypothesis> hypotheses;
  bool aggregate = false;

  const Hypothesis* find(const std::string& name) const;
  void write(std::ostream& os) const;
};

// Solvability hypotheses for the second-order problem. Case A measures the
// local sup over the config's compact family and checks S, g exterior
// boundedness beyond exterior_radius; case B uses the mixed L1-Linf norm;
// case C the global sup. The nets checked are a, c, b, S, dS, S^{-1}, g'.
ConditionReport verify_wave_conditions(const transform::WaveProblem& p, ConditionCase which,
                                       const SweepConfig& cfg);

// The first-order counterpart: spatial derivatives A_i' and the symmetric
// part of B, plus the exterior boundedness of A_i in case A.
ConditionReport verify_system_conditions(const transform::HyperbolicSystem& s, ConditionCase which,
                                         const SweepConfig& cfg);

struct ModeratenessOptions {
  std::array<int, 3> cells{100, 1, 1};
  solver::BoundaryMode boundary = solver::BoundaryMode::ConstantExtension;
  double cfl_safety = 0.45;
  bool refine_control = true;  // re-run at h/2; the fitted exponent must be stable
  bool perturbation = true;    // eps^3-planted data perturbation decay
  double perturb_amp = 1.0;
  solver::SolveOptions solve;
};

struct ModeratenessReport {
  std::vector<double> eps;
  SweepReport sweep;          // sup of |w| over the compacts, per epsilon
  SweepReport sweep_refined;  // same at h/2 when refine_control is on
  double exponent_shift = 0;
  bool refine_ok = true;
  std::vector<double> perturb_discrepancy;
  double perturb_decay_order = 0;  // fitted decay of the output discrepancy
  bool solver_failed = false;      // a blow-up was recorded as divergent evidence
  std::vector<double> failed_eps;  // sweep points where the solver blew up
};

// Solves the system form for every epsilon in the sweep and classifies the
// growth of ||w_eps||; optionally re-solves on a refined grid (discretization
// control) and with eps^3-perturbed (u0, u1, f) as a uniqueness surrogate.
ModeratenessReport solution_moderateness(const transform::WaveProblem& p,
                                         const ModeratenessOptions& opt, const SweepConfig& cfg);

struct GtOptions {
  genfunc::MollifierMode mode = genfunc::MollifierMode::Log;
  double raw_eig_floor = 1e-6;  // boundedness of the inverse
  double raw_eig_cap = 1e6;     // boundedness of the metric
  int raw_sample_cells = 64;
  genfunc::CoefficientNet u0;  // default: smooth bump at the domain center
  genfunc::CoefficientNet u1;  // default: zero
};

struct GtResult {
  transform::WaveProblem problem;
  ConditionReport report;
  double raw_min_eig = 0;
  double raw_max_eig = 0;
  double raw_min_det = 0;
};

// Full workflow for a piecewise metric: admissibility sampling of the raw
// spatial block (bounded, bounded inverse, constant outside the exterior
// radius), mollification into a wave problem with a = b = c = f = 0, and the
// case-A hypothesis verification.
GtResult geroch_traschen_pipeline(
    const std::vector<std::shared_ptr<const genfunc::PiecewiseExpr>>& metric_r, int n,
    const Box& domain, double horizon, const SweepConfig& cfg, const GtOptions& opt = {});

}  // namespace wavesys::asymptotics
