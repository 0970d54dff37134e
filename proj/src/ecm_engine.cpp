#include "ecm/ecm_engine.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace ecm {

namespace {

void check_nonneg(double v, const char* field) {
  if (v < 0.0 || std::isnan(v)) {
    throw std::invalid_argument(std::string("traffic profile: field '") + field +
                                "' must be non-negative");
  }
}

double mem_read_bw(const MachineModel& m, const TrafficProfile& t) {
  return t.readonly ? m.mem_bw_readonly : m.mem_bw_multistream;
}

}  // namespace

void validate(const TrafficProfile& t) {
  check_nonneg(t.core_load_cycles, "core_load_cycles");
  check_nonneg(t.core_store_cycles, "core_store_cycles");
  check_nonneg(t.dependency_chain_cycles, "dependency_chain_cycles");
  check_nonneg(t.l1l2_read_bytes, "l1l2_read_bytes");
  check_nonneg(t.l1l2_write_bytes, "l1l2_write_bytes");
  check_nonneg(t.mem_read_bytes, "mem_read_bytes");
  check_nonneg(t.mem_write_bytes, "mem_write_bytes");
  // Streamed data cannot enter L2 from memory without also crossing into
  // L1, and nothing reaches memory that was not written to L2 first.
  if (t.mem_read_bytes > t.l1l2_read_bytes) {
    throw std::invalid_argument("traffic profile: mem_read_bytes exceeds l1l2_read_bytes");
  }
  if (t.mem_write_bytes > t.l1l2_write_bytes) {
    throw std::invalid_argument("traffic profile: mem_write_bytes exceeds l1l2_write_bytes");
  }
  if (t.readonly &&
      (t.core_store_cycles > 0.0 || t.l1l2_write_bytes > 0.0 || t.mem_write_bytes > 0.0)) {
    throw std::invalid_argument("traffic profile: readonly profile carries store traffic");
  }
}

EcmPrediction compose(const MachineModel& m, const TrafficProfile& t) {
  validate(m);
  validate(t);
  const double core = t.core_load_cycles + t.core_store_cycles;
  const double dep = t.dependency_chain_cycles;
  const double l1l2 = t.l1l2_read_bytes / m.l2_load_bw + t.l1l2_write_bytes / m.l2_store_bw;

  // Store-retire cycles overlap with the L1<->L2 transfers, load cycles
  // serialize with them; memory writes overlap with the L2<->L1 transfers,
  // memory reads add up. The dependency chain and the inner levels floor
  // each level's throughput sum.
  const double sum_l2 = t.core_load_cycles + l1l2;
  const double sum_mem = sum_l2 + t.mem_read_bytes / mem_read_bw(m, t);

  EcmPrediction p;
  p.work_unit = t.work_unit;
  p.t_l1 = std::max(core, dep);
  p.t_l2 = std::max(sum_l2, p.t_l1);
  p.t_mem = std::max(sum_mem, p.t_l2);
  return p;
}

EcmPrediction compose_no_overlap(const MachineModel& m, const TrafficProfile& t) {
  validate(m);
  validate(t);
  const double core = t.core_load_cycles + t.core_store_cycles;
  const double dep = t.dependency_chain_cycles;
  const double l1l2 = t.l1l2_read_bytes / m.l2_load_bw + t.l1l2_write_bytes / m.l2_store_bw;
  const double mem = t.mem_read_bytes / mem_read_bw(m, t) + t.mem_write_bytes / m.mem_store_bw;

  EcmPrediction p;
  p.work_unit = t.work_unit;
  p.t_l1 = std::max(core, dep);
  p.t_l2 = std::max(core + l1l2, dep);
  p.t_mem = std::max(core + l1l2 + mem, dep);
  return p;
}

EcmPrediction compose_full_overlap(const MachineModel& m, const TrafficProfile& t) {
  validate(m);
  validate(t);
  const double core = t.core_load_cycles + t.core_store_cycles;
  const double dep = t.dependency_chain_cycles;
  const double l1l2 = t.l1l2_read_bytes / m.l2_load_bw + t.l1l2_write_bytes / m.l2_store_bw;
  const double mem = t.mem_read_bytes / mem_read_bw(m, t) + t.mem_write_bytes / m.mem_store_bw;

  EcmPrediction p;
  p.work_unit = t.work_unit;
  p.t_l1 = std::max(core, dep);
  p.t_l2 = std::max({core, l1l2, dep});
  p.t_mem = std::max({core, l1l2, mem, dep});
  return p;
}

double dependency_bound(double latency, unsigned unroll_ways) {
  if (!(latency > 0.0)) throw std::invalid_argument("dependency_bound: latency must be positive");
  if (unroll_ways < 1) throw std::invalid_argument("dependency_bound: unroll_ways must be >= 1");
  return latency / unroll_ways;
}

ScalingCurve scale(const MachineModel& m, const EcmPrediction& p, const TrafficProfile& t,
                   unsigned max_cores) {
  validate(m);
  validate(t);
  if (!(p.t_mem > 0.0)) {
    throw std::invalid_argument("scale: prediction with zero t_mem cannot be scaled");
  }
  const unsigned n_max = max_cores ? max_cores : m.cores_per_domain;

  const double mem_bytes = t.mem_read_bytes + t.mem_write_bytes;
  const double b_domain = t.readonly ? m.mem_bw_readonly : m.mem_bw_multistream;
  double roof = std::numeric_limits<double>::infinity();
  if (mem_bytes > 0.0) roof = b_domain / mem_bytes;
  // Domain-aggregate L2 caps; they never bind for the streaming kernels
  // studied here but complete the saturation check.
  if (t.l1l2_read_bytes > 0.0) roof = std::min(roof, m.l2_domain_load_bw / t.l1l2_read_bytes);
  if (t.l1l2_write_bytes > 0.0) roof = std::min(roof, m.l2_domain_store_bw / t.l1l2_write_bytes);

  ScalingCurve curve;
  curve.roof_work_units_per_cycle = roof;
  if (std::isfinite(roof)) {
    curve.saturation_cores = static_cast<unsigned>(std::ceil(p.t_mem * roof));
  }
  curve.points.reserve(n_max);
  for (unsigned n = 1; n <= n_max; ++n) {
    ScalingPoint pt;
    pt.cores = n;
    pt.work_units_per_cycle = std::min(static_cast<double>(n) / p.t_mem, roof);
    pt.work_units_per_second = pt.work_units_per_cycle * m.frequency;
    pt.bandwidth_bytes_per_second = pt.work_units_per_second * mem_bytes;
    curve.points.push_back(pt);
  }
  return curve;
}

}  // namespace ecm
