#pragma once

#include <string>
#include <vector>

#include "wavesys/genfunc/coefficient_net.hpp"
#include "wavesys/genfunc/sample_table.hpp"

namespace wavesys::genfunc {

enum class NormKind {
  SupK,         // sup of |value| over the compact box K
  Sobolev,      // H^k: l2 of all derivatives up to order k, trapezoid in space
  WkInf,        // max over |alpha| <= k of sup |d^alpha f|
  MixedL1LInf,  // integral over t of the per-slice sup (space-time fields only)
};

std::string norm_kind_name(NormKind kind);

struct NormRequest {
  NormKind kind = NormKind::SupK;
  Box K;
  int k = 0;
  std::array<int, 3> cells{64, 64, 64};  // sampling resolution over K
  double t1 = 0;                         // horizon for time sampling (0: slice at t=0)
  int tcells = 0;
};

// Discrete norm of sampled data: sup norms by grid max, integrals by the
// trapezoid rule, derivatives by central differences at points where the
// stencil fits. K must lie inside the sampled grid.
double compute_norm(const SampleTable& table, const NormRequest& req);

// Samples the net over K (and [0, t1] when requested) and evaluates.
double compute_norm(const CoefficientNet& net, double eps, const NormRequest& req);

// Per-time-slice sup over K; building block for combining mixed norms
// across several grids sharing a time discretization.
std::vector<double> slice_sups(const SampleTable& table, const Box& K);

}  // namespace wavesys::genfunc
