#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace ecm {

// One instruction form (mnemonic + operand flavor) with its pipeline cost.
// Latency is stored only where it is known; models that need a missing
// latency must fail loudly instead of silently assuming zero.
struct InstructionProfile {
  std::string form;
  double reciprocal_throughput = 0.0;  // cy per instruction
  std::optional<double> latency;       // cy
};

// Immutable description of one CPU as seen by the model: per-core and
// per-domain bandwidths in bytes/cycle, capacities in bytes, and the
// instruction cost table. A contention domain is the set of cores that
// share an L2 and a memory interface (a CMG on A64FX).
struct MachineModel {
  std::string name;
  double frequency = 0.0;              // Hz
  unsigned vector_length_doubles = 0;  // elements per SIMD vector
  unsigned cacheline_bytes = 0;

  double l1_load_bw = 0.0;   // B/cy per core
  double l1_store_bw = 0.0;  // B/cy per core
  double l2_load_bw = 0.0;   // B/cy per core
  double l2_store_bw = 0.0;  // B/cy per core

  // Aggregate caps per contention domain; only multicore scaling can hit
  // these, single-core predictions never do.
  double l2_domain_load_bw = 0.0;   // B/cy per domain
  double l2_domain_store_bw = 0.0;  // B/cy per domain

  // Measured memory bandwidths per contention domain. Two figures because
  // read-only streams sustain more than read/write mixes.
  double mem_bw_multistream = 0.0;  // B/cy per domain
  double mem_bw_readonly = 0.0;     // B/cy per domain
  double mem_store_bw = 0.0;        // B/cy per domain, memory write path

  unsigned cores_per_domain = 0;
  std::uint64_t l1_capacity = 0;  // bytes per core
  std::uint64_t l2_capacity = 0;  // bytes per domain

  std::vector<InstructionProfile> instruction_table;

  double bytes_per_vector() const { return 8.0 * vector_length_doubles; }
};

// Throws std::invalid_argument naming the offending field.
void validate(const MachineModel& m);

// Builtin machine descriptions, addressable by name ("a64fx-fx700").
const MachineModel& builtin_machine(const std::string& name);
std::vector<std::string> builtin_machine_names();

// Machine files are JSON documents with top-level keys matching the field
// names above. Throws std::runtime_error with file/field context on parse
// problems, std::invalid_argument on invariant violations.
MachineModel load_machine(const std::string& path);
void save_machine(const MachineModel& m, const std::string& path);

std::string machine_to_json(const MachineModel& m);
MachineModel machine_from_json(const std::string& text, const std::string& context);

// Resolves a builtin name first, then falls back to loading a file.
MachineModel resolve_machine(const std::string& name_or_path);

// Throws std::invalid_argument listing the known forms if absent.
const InstructionProfile& lookup_instruction(const MachineModel& m, const std::string& form);

}  // namespace ecm
