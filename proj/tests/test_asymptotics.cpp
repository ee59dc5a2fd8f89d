#include <doctest.h>

#include <cmath>
#include <memory>
#include <sstream>

#include "wavesys/asymptotics/conditions.hpp"
#include "wavesys/rng.hpp"

using namespace wavesys;
using namespace wavesys::asymptotics;
using genfunc::CoefficientNet;
using genfunc::Mollifier;
using genfunc::MollifierMode;
using genfunc::PiecewiseExpr;
using genfunc::Polynomial;
using genfunc::Region;

namespace {

std::vector<double> short_eps() {
  std::vector<double> eps;
  for (int k = 4; k <= 9; ++k) eps.push_back(std::pow(2.0, -k));
  return eps;
}

std::shared_ptr<const PiecewiseExpr> heaviside(double lo = -6, double hi = 6) {
  Region left, right;
  left.bounds[1].hi = 0.0;
  left.poly = Polynomial::constant(0.0);
  right.bounds[1].lo = 0.0;
  right.poly = Polynomial::constant(1.0);
  return std::make_shared<PiecewiseExpr>(1, SpaceTimeBox{0, 1, Box::interval(lo, hi)},
                                         std::vector<Region>{left, right});
}

std::shared_ptr<const PiecewiseExpr> one_plus_heaviside() {
  Region left, right;
  left.bounds[1].hi = 0.0;
  left.poly = Polynomial::constant(1.0);
  right.bounds[1].lo = 0.0;
  right.poly = Polynomial::constant(2.0);
  return std::make_shared<PiecewiseExpr>(1, SpaceTimeBox{0, 1, Box::interval(-6, 6)},
                                         std::vector<Region>{left, right});
}

SweepConfig gt_config(const std::vector<double>& eps = short_eps()) {
  SweepConfig cfg;
  cfg.eps = eps;
  cfg.compacts = SweepConfig::nested_compacts(Box::interval(-4, 4));
  cfg.horizon = 1.0;
  cfg.exterior_radius = 2.0;
  return cfg;
}

transform::WaveProblem gt_problem(MollifierMode mode) {
  transform::WaveProblem p;
  p.n = 1;
  p.domain = Box::interval(-4, 4);
  p.horizon = 1.0;
  p.R = CoefficientNet::mollified(one_plus_heaviside(), Mollifier(mode, 1), "R");
  p.R.mark_spd();
  p.g = CoefficientNet::constant(1, Mat(1, 1), "g");
  p.a = CoefficientNet::constant_scalar(1, 0.0, "a");
  p.b = CoefficientNet::constant(1, Mat(1, 1), "b");
  p.c = CoefficientNet::constant_scalar(1, 0.0, "c");
  p.f = CoefficientNet::constant_scalar(1, 0.0, "f");
  p.u0 = CoefficientNet::closed_form(
      1, 1, 1,
      [](double, double, const SpaceVec& x) {
        const double y = x[0] / 0.5;
        return Mat::scalar(y * y < 1 ? std::exp(1.0 - 1.0 / (1.0 - y * y)) : 0.0);
      },
      false, "u0");
  p.u1 = CoefficientNet::constant_scalar(1, 0.0, "u1");
  return p;
}

}  // namespace

TEST_CASE("fit_exponent recovers planted laws") {
  const std::vector<double> eps = SweepConfig::default_eps();

  for (double p : {0.0, 0.5, 1.0, 2.0, 3.0}) {
    std::vector<double> values;
    for (double e : eps) values.push_back(1.7 * std::pow(e, -p));
    const FitResult fit = fit_exponent(eps, values);
    CHECK(std::abs(fit.p - p) <= 0.05);
  }

  std::vector<double> quad;
  for (double e : eps) quad.push_back(std::pow(e, -2.0));
  CHECK(std::abs(fit_exponent(eps, quad).p - 2.0) <= 0.01);

  std::vector<double> logs;
  for (double e : eps) logs.push_back(3.0 * std::log(1.0 / e));
  const FitResult lf = fit_exponent(eps, logs);
  CHECK(std::abs(lf.q - 3.0) <= 0.01);
  CHECK(lf.log_rel_rms < lf.power_rel_rms);
  CHECK(classify_series(eps, logs, ClassifyRules{}) == GrowthClass::LogType);

  std::vector<double> bad = quad;
  bad[3] = -1.0;
  CHECK_THROWS_AS(fit_exponent(eps, bad), ConfigError);
}

TEST_CASE("classification rules") {
  const std::vector<double> eps = SweepConfig::default_eps();
  const ClassifyRules rules;

  std::vector<double> flat(eps.size(), 2.5);
  FitResult fit;
  CHECK(classify_series(eps, flat, rules, &fit) == GrowthClass::O1);
  CHECK(std::abs(fit.p) <= 0.02);

  std::vector<double> decay;
  for (double e : eps) decay.push_back(e * e * e);
  CHECK(classify_series(eps, decay, rules) == GrowthClass::NegligibleEvidence);

  std::vector<double> tiny(eps.size(), 1e-14);
  CHECK(classify_series(eps, tiny, rules) == GrowthClass::NegligibleEvidence);

  std::vector<double> power;
  for (double e : eps) power.push_back(0.3 / e);
  int order = 0;
  CHECK(classify_series(eps, power, rules, &fit, &order) == GrowthClass::Moderate);
  CHECK(order == 2);  // ceil(p + 0.1) with p ~ 1

  std::vector<double> blown = power;
  blown[5] = std::numeric_limits<double>::infinity();
  CHECK(classify_series(eps, blown, rules) == GrowthClass::DivergentPower);
}

TEST_CASE("classification monotonicity on planted powers") {
  const std::vector<double> eps = SweepConfig::default_eps();
  Rng rng(23);
  for (int rep = 0; rep < 20; ++rep) {
    const double p1 = rng.uniform(0, 2), p2 = p1 + rng.uniform(0, 1.5);
    const double c1 = rng.uniform(0.1, 1.0), c2 = c1 * rng.uniform(1.0, 3.0);
    std::vector<double> v1, v2;
    for (double e : eps) {
      v1.push_back(c1 * std::pow(e, -p1));
      v2.push_back(c2 * std::pow(e, -p2));
    }
    FitResult f1, f2;
    classify_series(eps, v1, ClassifyRules{}, &f1);
    classify_series(eps, v2, ClassifyRules{}, &f2);
    CHECK(f1.p <= f2.p + 0.05);
  }
}

TEST_CASE("classify_net on constants, jumps, and planted decay") {
  SweepConfig cfg = gt_config(SweepConfig::default_eps());
  cfg.compacts = {Box::interval(-1, 1)};

  CoefficientNet c = CoefficientNet::constant_scalar(1, 3.0, "c");
  const SweepReport crep = classify_net(c, cfg);
  CHECK(crep.classification == GrowthClass::O1);
  CHECK(std::abs(crep.exponent) <= 0.02);
  CHECK(crep.passes_log_type());
  CHECK(crep.passes_moderate());

  CoefficientNet planted = CoefficientNet::closed_form(
      1, 1, 1, [](double eps, double, const SpaceVec&) { return Mat::scalar(eps * eps * eps); },
      false, "eps^3");
  CHECK(classify_net(planted, cfg).classification == GrowthClass::NegligibleEvidence);

  // Derivative of the log-mollified jump: log-type growth.
  CoefficientNet hlog =
      CoefficientNet::mollified(heaviside(), Mollifier(MollifierMode::Log, 1), "H");
  const SweepReport lrep = classify_net(net_derivative(hlog, 1), cfg);
  CHECK(lrep.classification == GrowthClass::LogType);

  // Model scaling: fitted exponent 1 within 0.05.
  CoefficientNet hmod =
      CoefficientNet::mollified(heaviside(), Mollifier(MollifierMode::Model, 1), "H");
  const SweepReport mrep = classify_net(net_derivative(hmod, 1), cfg);
  CHECK(std::abs(mrep.exponent - 1.0) <= 0.05);
  CHECK_FALSE(mrep.passes_log_type());
}

TEST_CASE("exterior sup is exactly epsilon-independent for cut-off data") {
  const SweepConfig cfg = gt_config();
  CoefficientNet r =
      CoefficientNet::mollified(one_plus_heaviside(), Mollifier(MollifierMode::Log, 1), "R");
  const SeriesReport ext = exterior_series(r, cfg, Box::interval(-4, 4), 2.0);
  for (double v : ext.values) CHECK(v == ext.values.front());
  CHECK(ext.values.front() == doctest::Approx(2.0).epsilon(1e-12));
}

TEST_CASE("constant-coefficient problem satisfies every case") {
  transform::WaveProblem p = gt_problem(MollifierMode::Log);
  p.R = CoefficientNet::constant(1, Mat::identity(1), "R");
  p.R.mark_spd();
  const SweepConfig cfg = gt_config();
  for (ConditionCase which : {ConditionCase::A, ConditionCase::B, ConditionCase::C}) {
    const ConditionReport rep = verify_wave_conditions(p, which, cfg);
    CHECK(rep.aggregate);
  }
}

TEST_CASE("log-rescaled mollifier passes case A, model scaling fails dS") {
  const SweepConfig cfg = gt_config();

  const ConditionReport pass = verify_wave_conditions(gt_problem(MollifierMode::Log),
                                                      ConditionCase::A, cfg);
  CHECK(pass.aggregate);
  REQUIRE(pass.find("dS") != nullptr);
  CHECK(pass.find("dS")->pass);
  CHECK(pass.find("S exterior")->pass);

  const ConditionReport fail = verify_wave_conditions(gt_problem(MollifierMode::Model),
                                                      ConditionCase::A, cfg);
  CHECK_FALSE(fail.aggregate);
  CHECK_FALSE(fail.find("dS")->pass);
  CHECK(fail.find("dS")->worst_exponent == doctest::Approx(1.0).epsilon(0.1));
  // S itself stays bounded either way.
  CHECK(fail.find("S")->pass);
}

TEST_CASE("system conditions mirror the wave conditions") {
  const SweepConfig cfg = gt_config();
  for (MollifierMode mode : {MollifierMode::Log, MollifierMode::Model}) {
    const transform::WaveProblem p = gt_problem(mode);
    const ConditionReport wave = verify_wave_conditions(p, ConditionCase::A, cfg);
    const ConditionReport sys =
        verify_system_conditions(wave_to_system(p), ConditionCase::A, cfg);
    // A' is built from S and g entries: log-type on one side iff on the other.
    CHECK(sys.find("A'")->pass == (wave.find("dS")->pass && wave.find("g'")->pass));
    CHECK(std::abs(sys.find("A'")->worst_exponent - wave.find("dS")->worst_exponent) <= 0.1);
    CHECK(sys.find("A exterior")->pass == (wave.find("S exterior")->pass &&
                                           wave.find("g exterior")->pass));
    CHECK(sys.aggregate == wave.aggregate);
  }
}

TEST_CASE("solution sweep classifies smooth problems as O(1)") {
  transform::WaveProblem p = gt_problem(MollifierMode::Log);
  p.R = CoefficientNet::constant(1, Mat::identity(1), "R");
  p.R.mark_spd();
  SweepConfig cfg = gt_config();
  cfg.compacts = {Box::interval(-1, 1), Box::interval(-2, 2)};
  ModeratenessOptions opt;
  opt.cells = {80, 1, 1};
  const ModeratenessReport rep = solution_moderateness(p, opt, cfg);
  CHECK(rep.sweep.classification == GrowthClass::O1);
  CHECK(rep.refine_ok);
  CHECK(rep.perturb_decay_order >= 2.5);
}

TEST_CASE("planted eps^3 perturbations decay at order >= 2.5") {
  const transform::WaveProblem p = gt_problem(MollifierMode::Log);
  SweepConfig cfg = gt_config({0.25, 0.125, 0.0625, 0.03125, 0.015625, 0.0078125});
  cfg.compacts = {Box::interval(-2, 2)};
  ModeratenessOptions opt;
  opt.cells = {80, 1, 1};
  opt.refine_control = false;
  const ModeratenessReport rep = solution_moderateness(p, opt, cfg);
  CHECK(rep.perturb_decay_order >= 2.5);
  CHECK(rep.sweep.passes_log_type());
}

TEST_CASE("geroch-traschen pipeline") {
  const SweepConfig cfg = gt_config();

  // 1 + H(x): passes with the log rescaling.
  {
    GtOptions opt;
    opt.mode = MollifierMode::Log;
    const GtResult res = geroch_traschen_pipeline({one_plus_heaviside()}, 1,
                                                  Box::interval(-4, 4), 1.0, cfg, opt);
    CHECK(res.report.aggregate);
    CHECK(res.raw_min_eig == doctest::Approx(1.0));
    CHECK(res.raw_max_eig == doctest::Approx(2.0));
  }
  // Model scaling fails the dS hypothesis.
  {
    GtOptions opt;
    opt.mode = MollifierMode::Model;
    const GtResult res = geroch_traschen_pipeline({one_plus_heaviside()}, 1,
                                                  Box::interval(-4, 4), 1.0, cfg, opt);
    CHECK_FALSE(res.report.aggregate);
    CHECK_FALSE(res.report.find("dS")->pass);
  }
  // Constant metric: trivially admissible and passing.
  {
    auto constant = std::make_shared<PiecewiseExpr>(
        PiecewiseExpr::constant(1, SpaceTimeBox{0, 1, Box::interval(-6, 6)}, 2.0));
    const GtResult res =
        geroch_traschen_pipeline({constant}, 1, Box::interval(-4, 4), 1.0, cfg, GtOptions{});
    CHECK(res.report.aggregate);
  }
  // Degenerate raw metric: rejected by the admissibility sampling.
  {
    Region left, right;
    left.bounds[1].hi = 0.0;
    left.poly = Polynomial::constant(0.0);  // not bounded away from zero
    right.bounds[1].lo = 0.0;
    right.poly = Polynomial::constant(1.0);
    auto bad = std::make_shared<PiecewiseExpr>(1, SpaceTimeBox{0, 1, Box::interval(-6, 6)},
                                               std::vector<Region>{left, right});
    CHECK_THROWS_AS(
        geroch_traschen_pipeline({bad}, 1, Box::interval(-4, 4), 1.0, cfg, GtOptions{}),
        ConfigError);
  }
}

TEST_CASE("SPD failure of R is a failed hypothesis, not a crash") {
  transform::WaveProblem p = gt_problem(MollifierMode::Log);
  // R changes sign inside the domain: S and S^{-1} are undefined there.
  p.R = CoefficientNet::closed_form(
      1, 1, 1, [](double, double, const SpaceVec& x) { return Mat::scalar(0.5 + x[0]); },
      false, "R");
  p.R.mark_spd();
  const SweepConfig cfg = gt_config();
  const ConditionReport rep = verify_wave_conditions(p, ConditionCase::A, cfg);
  CHECK_FALSE(rep.aggregate);
  CHECK_FALSE(rep.find("S")->pass);
  CHECK(rep.find("S")->note.find("eps=") != std::string::npos);
  CHECK(rep.find("a")->pass);  // unaffected hypotheses still classify
}

TEST_CASE("solver blow-up in a sweep is divergent-power evidence") {
  transform::WaveProblem p = gt_problem(MollifierMode::Log);
  p.R = CoefficientNet::constant(1, Mat::identity(1), "R");
  p.R.mark_spd();
  // Stiff zeroth-order coupling far beyond the CFL bound's reach.
  p.c = CoefficientNet::constant_scalar(1, -1e8, "c");
  SweepConfig cfg = gt_config();
  cfg.compacts = {Box::interval(-1, 1)};
  ModeratenessOptions opt;
  opt.cells = {60, 1, 1};
  opt.refine_control = false;
  opt.perturbation = false;
  const ModeratenessReport rep = solution_moderateness(p, opt, cfg);
  CHECK(rep.solver_failed);
  CHECK(rep.failed_eps.size() == cfg.eps.size());
  CHECK(rep.sweep.classification == GrowthClass::DivergentPower);
}

TEST_CASE("sweep csv uses the fixed column layout") {
  SweepConfig cfg = gt_config();
  cfg.compacts = {Box::interval(-1, 1)};
  const SweepReport rep =
      classify_net(CoefficientNet::constant_scalar(1, 1.5, "c"), cfg);
  std::ostringstream os;
  write_sweep_csv(os, rep);
  const std::string text = os.str();
  CHECK(text.rfind("epsilon,norm_kind,K_id,value\n", 0) == 0);
  CHECK(text.find("sup,K0,") != std::string::npos);
  std::int64_t rows = 0;
  for (char ch : text) rows += ch == '\n';
  CHECK(rows == 1 + static_cast<std::int64_t>(cfg.eps.size()));
}
