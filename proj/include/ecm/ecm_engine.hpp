#pragma once

#include <optional>
#include <string>
#include <vector>

#include "ecm/machine_model.hpp"

namespace ecm {

// Data volumes and core cycles for one unit of work (one vectorized
// iteration block, or one matrix row). Write-allocate transfers caused by
// store misses count as read bytes at every level.
struct TrafficProfile {
  double core_load_cycles = 0.0;
  double core_store_cycles = 0.0;
  // Loop-carried latency bound per work unit, 0 if none.
  double dependency_chain_cycles = 0.0;
  double l1l2_read_bytes = 0.0;
  double l1l2_write_bytes = 0.0;
  double mem_read_bytes = 0.0;
  double mem_write_bytes = 0.0;
  bool readonly = false;  // no store streams
  std::string work_unit = "VL";
};

// Throws std::invalid_argument if a field is negative, if traffic grows
// towards the outer levels, or if a read-only profile carries stores.
void validate(const TrafficProfile& t);

// Cycles per work unit with the data set resident in L1, L2, and memory.
struct EcmPrediction {
  double t_l1 = 0.0;
  double t_l2 = 0.0;
  double t_mem = 0.0;
  std::string work_unit;
};

struct ScalingPoint {
  unsigned cores = 0;
  double work_units_per_cycle = 0.0;
  double work_units_per_second = 0.0;
  double bandwidth_bytes_per_second = 0.0;
};

struct ScalingCurve {
  std::vector<ScalingPoint> points;  // cores 1..n_max
  // Bandwidth roof in work units per cycle; infinity when the profile has
  // no shared-resource traffic.
  double roof_work_units_per_cycle = 0.0;
  // Smallest core count at which the roof binds; absent if it never does.
  std::optional<unsigned> saturation_cores;
};

// Partial-overlap composition: store-retire cycles in the core overlap
// with L1<->L2 transfers, load cycles do not; memory write cycles overlap
// with L2<->L1 transfers, memory read cycles do not. The dependency chain
// enters as a floor at every level.
EcmPrediction compose(const MachineModel& m, const TrafficProfile& t);

// Fully serial composition: every contribution adds up.
EcmPrediction compose_no_overlap(const MachineModel& m, const TrafficProfile& t);

// Fully overlapping composition: the largest contribution wins.
EcmPrediction compose_full_overlap(const MachineModel& m, const TrafficProfile& t);

// Per-work-unit cost of a loop-carried reduction chain split over
// unroll_ways accumulators.
double dependency_bound(double latency, unsigned unroll_ways);

// Naive scaling across the cores of one contention domain: perfect scaling
// until a shared bandwidth roof binds. max_cores = 0 means cores_per_domain.
ScalingCurve scale(const MachineModel& m, const EcmPrediction& p, const TrafficProfile& t,
                   unsigned max_cores = 0);

}  // namespace ecm
