#pragma once

#include <ostream>
#include <string>
#include <vector>

#include "wavesys/genfunc/norms.hpp"
#include "wavesys/linfit.hpp"

namespace wavesys::asymptotics {

// Finite-sample stand-ins for the asymptotic growth classes.
enum class GrowthClass {
  NegligibleEvidence,  // below floor, or fitted decay of order >= 1
  O1,                  // flat: |p| small and bounded ratio across the sweep
  LogType,             // the affine-in-log(1/eps) model wins and q is stable
  Moderate,            // power growth eps^{-p}, certified order ceil(p + 0.1)
  DivergentPower,      // non-finite values (solver blow-up evidence)
};

std::string growth_class_name(GrowthClass c);
int growth_rank(GrowthClass c);  // inclusion chain: Negligible < O1 < LogType < Moderate

struct ClassifyRules {
  double o1_exponent_tol = 0.1;
  double o1_ratio_max = 2.0;
  double negligible_floor = 1e-12;
  double negligible_decay_min = 1.0;
  double log_q_stability = 0.3;  // relative drift of q between sweep halves
};

struct FitResult {
  double p = 0;  // power model ||.|| ~ eps^{-p}
  double p_stderr = 0;
  double q = 0;  // log model ||.|| ~ q log(1/eps) + const
  double q_stderr = 0;
  double power_rss = 0;
  double log_rss = 0;
  double power_rel_rms = 0;  // relative residuals of both models in value space
  double log_rel_rms = 0;
  double q_split_drift = 0;
};

// Least squares of log||.|| against log(1/eps) (power exponent) and of
// ||.|| against log(1/eps) (log coefficient). Values must be positive.
FitResult fit_exponent(std::span<const double> eps, std::span<const double> values);

struct SweepConfig {
  std::vector<double> eps;    // strictly decreasing, at least 6 points
  std::vector<std::pair<genfunc::NormKind, int>> norms{{genfunc::NormKind::SupK, 0}};
  std::vector<Box> compacts;  // K family; ids K0, K1, ...
  double horizon = 1.0;
  int base_cells = 64;        // sampling resolution per axis on each K
  int tcells = 16;            // time sampling (time-dependent nets, mixed norm)
  double points_per_width = 8;  // refinement of windows around data breakpoints
  double exterior_radius = 0;
  ClassifyRules rules;

  static std::vector<double> default_eps();  // 2^-4 .. 2^-14, 11 points
  // Nested boxes at 25/50/75% of the domain.
  static std::vector<Box> nested_compacts(const Box& domain);
  void validate() const;
};

struct SeriesReport {
  std::string norm_kind;
  std::string k_id;
  int k = 0;
  std::vector<double> values;
  FitResult fit;
  bool fit_valid = false;
  GrowthClass cls = GrowthClass::O1;
  int moderate_order = 0;
};

struct SweepReport {
  std::string label;
  std::vector<double> eps;
  std::vector<SeriesReport> series;
  GrowthClass classification = GrowthClass::O1;  // weakest class over the series
  double exponent = 0;                           // largest fitted p
  int moderate_order = 0;

  bool passes_o1() const { return growth_rank(classification) <= growth_rank(GrowthClass::O1); }
  bool passes_log_type() const {
    return growth_rank(classification) <= growth_rank(GrowthClass::LogType);
  }
  bool passes_moderate() const {
    return growth_rank(classification) <= growth_rank(GrowthClass::Moderate);
  }
};

// Classification of one value series per the finite-sample rules.
GrowthClass classify_series(std::span<const double> eps, std::span<const double> values,
                            const ClassifyRules& rules, FitResult* fit_out = nullptr,
                            int* moderate_order = nullptr, bool* fit_valid = nullptr);

// Norms of the net per epsilon over every (norm, K) pair, with sampling
// grids refined near the net's breakpoints to the kernel width, then the
// classification rules applied series by series.
SweepReport classify_net(const genfunc::CoefficientNet& net, const SweepConfig& cfg);

// Sup of |net| over the exterior {x in domain : |x| > radius} per epsilon.
SeriesReport exterior_series(const genfunc::CoefficientNet& net, const SweepConfig& cfg,
                             const Box& domain, double radius);

// Classifies a precomputed value series family (e.g. solver outputs).
SweepReport classify_values(const std::vector<double>& eps,
                            const std::vector<SeriesReport>& series, const ClassifyRules& rules,
                            const std::string& label);

// CSV with columns epsilon,norm_kind,K_id,value (17 significant digits).
void write_sweep_csv(std::ostream& os, const SweepReport& report);

}  // namespace wavesys::asymptotics
