#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "ecm/kernel_catalog.hpp"
#include "ecm/machine_model.hpp"
#include "ecm/sparse_core.hpp"

namespace ecm {

// Every command produces a Report: a JSON document that carries all
// numbers, plus a pass flag for commands that verify something. The text
// rendering is derived from the JSON, so the machine-readable form always
// contains everything the human-readable form shows.
struct Report {
  nlohmann::json data;
  bool pass = true;
};

std::string render_text(const Report& r);

// Reference predictions deviating from a freshly computed value by at
// least this fraction get flagged in reports.
inline constexpr double kDeviationFlagThreshold = 0.15;

struct PredictOptions {
  std::string kernel;
  std::string level = "all";  // l1 | l2 | mem | all
  std::optional<LayerConditionState> lc;
  unsigned unroll = 0;            // 0: sufficient
  std::string overlap = "partial";  // partial | none | full | all
};

Report cmd_predict(const MachineModel& m, const PredictOptions& opt);

struct ScalingOptions {
  std::string kernel;
  unsigned max_cores = 0;  // 0: cores_per_domain
  std::optional<LayerConditionState> lc;
  unsigned unroll = 0;
};

Report cmd_scaling(const MachineModel& m, const ScalingOptions& opt);

struct SpmvOptions {
  std::string matrix_path;            // Matrix Market file, or
  std::vector<index_t> hpcg_dims;     // 1 value (cube) or 3 values
  std::string format = "sell";        // crs | sell
  index_t chunk_height = 32;
  std::string sigma = "auto";         // integer or "auto"
  std::string alpha = "optimistic";   // number, "optimistic", or "auto"
  unsigned unroll = 0;                // 0: chunk_height / VL
  bool check = false;
  bool rcm = false;
  unsigned threads = 1;
  std::uint64_t seed = 42;
};

Report cmd_spmv(const MachineModel& m, const SpmvOptions& opt);

// Compares the model against the pinned reference values for the builtin
// A64FX description: the streaming/stencil prediction table and the SpMV
// constants. pass is false if any row misses its tolerance.
Report cmd_validate(const MachineModel& m);

Report cmd_machine(const MachineModel& m);

}  // namespace ecm
