#pragma once

#include <cstdint>
#include <map>

#include "ecm/ecm_engine.hpp"
#include "ecm/machine_model.hpp"
#include "ecm/sparse_core.hpp"

namespace ecm {

// Inputs of the per-row SpMV traffic formula
//   n_nzr * (value_bytes + index_bytes + value_bytes * alpha) + lhs_bytes_per_row
// where alpha is the right-hand-side access efficiency: how many bytes of
// RHS vector traffic are charged per nonzero, in units of one element.
// Its optimistic lower limit is 1/n_nzr (each RHS element loaded once).
struct SpmvTrafficParams {
  double n_nzr = 0.0;
  double alpha = 0.0;
  double value_bytes = 8.0;
  double index_bytes = 4.0;
  // LHS store + its write-allocate + the row-offset read.
  double lhs_bytes_per_row = 20.0;
};

double traffic_per_row(const SpmvTrafficParams& p);

// In-core cycles of a CRS row: one FMA latency per vector of nonzeros
// (the row dot product is a latency chain) plus the horizontal reduction.
double crs_core_cycles_per_row(const MachineModel& m, double n_nzr);

struct SaturationCheck {
  double per_core_bw = 0.0;    // bytes/s one core demands
  double domain_demand = 0.0;  // bytes/s at cores_per_domain
  double domain_limit = 0.0;   // bytes/s, multistream figure
  bool saturates = false;
};

SaturationCheck crs_saturation_check(const MachineModel& m, double n_nzr, double alpha);

struct SpmvPrediction {
  double cycles_l1 = 0.0;  // per row
  double cycles_l2 = 0.0;
  double cycles_mem = 0.0;
  // Reduction chain cost per VL after unrolling; informational unless it
  // exceeds the L1 throughput cost.
  double reduction_bound_per_vl = 0.0;
  bool latency_bound = false;
  double bytes_per_row = 0.0;
  double flops_per_row = 0.0;
  double single_core_perf = 0.0;  // flop/s
  double single_core_bw = 0.0;    // bytes/s
  ScalingCurve scaling;           // work unit: one row
};

// SELL-C-sigma model: index load + gather + value load per vector of
// nonzeros in L1, plus the full per-row byte traffic at the L2 and memory
// read bandwidths (read-dominated transfers add up).
SpmvPrediction sell_cycles_per_row(const MachineModel& m, double n_nzr, double alpha,
                                   unsigned unroll_ways);

// CRS model: the in-core latency chain floors every level.
SpmvPrediction crs_prediction(const MachineModel& m, double n_nzr, double alpha);

struct MatrixStats {
  index_t nrows = 0;
  index_t nnz = 0;
  double n_nzr = 0.0;  // arithmetic mean nonzeros per row
  std::map<index_t, index_t> row_length_histogram;
};

MatrixStats matrix_stats(const CrsMatrix& a);

// Empirical alpha from a fully associative LRU simulation over the
// column-index stream at cache-line granularity. A utility for choosing
// alpha, not part of the model itself.
double estimate_alpha_lru(const CrsMatrix& a, std::uint64_t cache_bytes, unsigned line_bytes);

}  // namespace ecm
