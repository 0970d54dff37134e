#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "ecm/ecm_engine.hpp"
#include "ecm/machine_model.hpp"

namespace ecm {

// Relative (row, column) taps of a 2D stencil read.
struct StencilShape {
  std::vector<std::array<int, 2>> offsets;

  unsigned loads_per_iteration() const { return static_cast<unsigned>(offsets.size()); }
  // Number of distinct input rows touched per iteration.
  unsigned row_streams() const;
};

// Abstract streaming/stencil loop: how many vector streams it loads and
// stores per iteration, its flop count, and an optional loop-carried
// reduction or stencil geometry.
struct KernelSpec {
  std::string name;
  std::string expression;
  unsigned load_streams = 0;
  unsigned store_streams = 0;
  // Store streams that land on an already-loaded stream; those stores hit
  // in cache and trigger no write-allocate.
  unsigned store_hit_streams = 0;
  unsigned flops_per_iteration = 0;
  // Instruction form whose latency carries the loop dependency.
  std::optional<std::string> reduction_op;
  std::optional<StencilShape> stencil;
};

enum class LayerConditionState {
  satisfied_l1,
  violated_l1_satisfied_l2,
  violated_l2,
};

const std::vector<KernelSpec>& builtin_kernels();

// Throws std::invalid_argument listing the known kernels if absent.
const KernelSpec& find_kernel(const std::string& name);

// Derives the per-VL traffic profile of a kernel on a machine. lc applies
// to stencil kernels only and defaults to the layer condition being
// satisfied in L1; passing it for a streaming kernel is an error.
//
// unroll_ways controls how far modulo variable expansion splits a
// reduction chain; 0 means "sufficient". Expansion over at least VL
// accumulators is modeled as hiding the operation latency completely.
TrafficProfile traffic(const KernelSpec& k, const MachineModel& m,
                       std::optional<LayerConditionState> lc = {}, unsigned unroll_ways = 0);

// Capacity criterion for a three-row stencil working set: satisfied iff
// 3 * inner_dim * element_bytes fits into half the cache.
bool evaluate_layer_condition(std::uint64_t inner_dim, unsigned element_bytes,
                              std::uint64_t cache_capacity);

std::optional<LayerConditionState> parse_layer_condition(const std::string& text);
std::string to_string(LayerConditionState lc);

}  // namespace ecm
