#include "ecm/spmv_model.hpp"

#include <algorithm>
#include <cmath>
#include <list>
#include <stdexcept>
#include <unordered_map>

namespace ecm {

namespace {

void check_params(const SpmvTrafficParams& p) {
  if (p.n_nzr < 0.0) throw std::invalid_argument("spmv params: n_nzr must be non-negative");
  if (p.alpha < 0.0) throw std::invalid_argument("spmv params: alpha must be non-negative");
  if (p.value_bytes <= 0.0 || p.index_bytes < 0.0 || p.lhs_bytes_per_row < 0.0) {
    throw std::invalid_argument("spmv params: byte sizes out of range");
  }
}

// Per-row traffic profile used for the scaling roof; the SpMV models fold
// all per-row bytes into a single read-dominated figure.
TrafficProfile row_traffic(double bytes_per_row) {
  TrafficProfile t;
  t.l1l2_read_bytes = bytes_per_row;
  t.mem_read_bytes = bytes_per_row;
  t.work_unit = "row";
  return t;
}

}  // namespace

double traffic_per_row(const SpmvTrafficParams& p) {
  check_params(p);
  return p.n_nzr * (p.value_bytes + p.index_bytes + p.value_bytes * p.alpha) +
         p.lhs_bytes_per_row;
}

double crs_core_cycles_per_row(const MachineModel& m, double n_nzr) {
  validate(m);
  if (!(n_nzr >= 1.0)) {
    throw std::invalid_argument("crs_core_cycles_per_row: n_nzr must be >= 1");
  }
  const auto& fma = lookup_instruction(m, "fmla");
  const auto& reduce = lookup_instruction(m, "faddv_512");
  if (!fma.latency) throw std::invalid_argument("instruction form 'fmla' has no latency");
  const double vectors = std::ceil(n_nzr / m.vector_length_doubles);
  return vectors * *fma.latency + reduce.reciprocal_throughput;
}

SaturationCheck crs_saturation_check(const MachineModel& m, double n_nzr, double alpha) {
  const double bytes = traffic_per_row({.n_nzr = n_nzr, .alpha = alpha});
  const double cycles = crs_core_cycles_per_row(m, n_nzr);
  SaturationCheck c;
  c.per_core_bw = bytes * m.frequency / cycles;
  c.domain_demand = c.per_core_bw * m.cores_per_domain;
  c.domain_limit = m.mem_bw_multistream * m.frequency;
  c.saturates = c.domain_demand >= c.domain_limit;
  return c;
}

SpmvPrediction sell_cycles_per_row(const MachineModel& m, double n_nzr, double alpha,
                                   unsigned unroll_ways) {
  validate(m);
  if (unroll_ways < 1) throw std::invalid_argument("sell model: unroll_ways must be >= 1");
  if (!(n_nzr > 0.0)) throw std::invalid_argument("sell model: n_nzr must be positive");

  const auto& gather = lookup_instruction(m, "complex_gather_plus_load");
  const auto& value_load = lookup_instruction(m, "ld1d");
  const auto& fma = lookup_instruction(m, "fmla");
  if (!fma.latency) throw std::invalid_argument("instruction form 'fmla' has no latency");

  SpmvPrediction p;
  p.bytes_per_row = traffic_per_row({.n_nzr = n_nzr, .alpha = alpha});
  p.flops_per_row = 2.0 * n_nzr;
  p.reduction_bound_per_vl = dependency_bound(*fma.latency, unroll_ways);

  // L1: index load + gather for the RHS plus the matrix value load, per
  // vector of nonzeros. No per-row remainder, chunks are padded. The
  // reduction bound is assumed hidden under the gather cost and only
  // reported; latency_bound flags when that assumption breaks.
  const double l1_per_vl = gather.reciprocal_throughput + value_load.reciprocal_throughput;
  p.latency_bound = p.reduction_bound_per_vl > l1_per_vl;
  const double vectors_per_row = n_nzr / m.vector_length_doubles;
  p.cycles_l1 = l1_per_vl * vectors_per_row;
  // The transfers are primarily reads, so the L2 and memory contributions
  // add to the in-core time.
  p.cycles_l2 = p.cycles_l1 + p.bytes_per_row / m.l2_load_bw;
  p.cycles_mem = p.cycles_l2 + p.bytes_per_row / m.mem_bw_multistream;

  p.single_core_perf = p.flops_per_row * m.frequency / p.cycles_mem;
  p.single_core_bw = p.bytes_per_row * m.frequency / p.cycles_mem;
  p.scaling = scale(m, {p.cycles_l1, p.cycles_l2, p.cycles_mem, "row"},
                    row_traffic(p.bytes_per_row));
  return p;
}

SpmvPrediction crs_prediction(const MachineModel& m, double n_nzr, double alpha) {
  SpmvPrediction p;
  p.bytes_per_row = traffic_per_row({.n_nzr = n_nzr, .alpha = alpha});
  p.flops_per_row = 2.0 * n_nzr;

  const double core = crs_core_cycles_per_row(m, n_nzr);
  const auto& fma = lookup_instruction(m, "fmla");
  p.reduction_bound_per_vl = *fma.latency;  // serial row chain, no expansion
  const double transfers_l2 = p.bytes_per_row / m.l2_load_bw;
  const double transfers_mem = transfers_l2 + p.bytes_per_row / m.mem_bw_multistream;
  // The row latency chain floors every level; transfer times hide under it
  // unless the rows are long enough for traffic to take over.
  p.cycles_l1 = core;
  p.cycles_l2 = std::max(core, transfers_l2);
  p.cycles_mem = std::max(core, transfers_mem);
  p.latency_bound = core > transfers_mem;

  p.single_core_perf = p.flops_per_row * m.frequency / p.cycles_mem;
  p.single_core_bw = p.bytes_per_row * m.frequency / p.cycles_mem;
  p.scaling = scale(m, {p.cycles_l1, p.cycles_l2, p.cycles_mem, "row"},
                    row_traffic(p.bytes_per_row));
  return p;
}

MatrixStats matrix_stats(const CrsMatrix& a) {
  validate(a);
  MatrixStats s;
  s.nrows = a.nrows;
  s.nnz = a.nnz();
  s.n_nzr = a.nrows > 0 ? static_cast<double>(s.nnz) / static_cast<double>(a.nrows) : 0.0;
  for (index_t r = 0; r < a.nrows; ++r) s.row_length_histogram[a.row_length(r)] += 1;
  return s;
}

double estimate_alpha_lru(const CrsMatrix& a, std::uint64_t cache_bytes, unsigned line_bytes) {
  validate(a);
  if (line_bytes == 0) throw std::invalid_argument("estimate_alpha_lru: line_bytes must be > 0");
  if (cache_bytes < line_bytes) {
    throw std::invalid_argument("estimate_alpha_lru: cache smaller than one line");
  }
  if (a.nnz() == 0) return 0.0;

  const std::uint64_t capacity = cache_bytes / line_bytes;
  std::list<std::uint64_t> lru;  // front = most recent
  std::unordered_map<std::uint64_t, std::list<std::uint64_t>::iterator> where;
  std::uint64_t misses = 0;
  for (col_index_t c : a.col_indices) {
    const std::uint64_t line = static_cast<std::uint64_t>(c) * 8 / line_bytes;
    if (auto it = where.find(line); it != where.end()) {
      lru.splice(lru.begin(), lru, it->second);
      continue;
    }
    ++misses;
    lru.push_front(line);
    where[line] = lru.begin();
    if (lru.size() > capacity) {
      where.erase(lru.back());
      lru.pop_back();
    }
  }
  return static_cast<double>(misses) * line_bytes / (8.0 * static_cast<double>(a.nnz()));
}

}  // namespace ecm
