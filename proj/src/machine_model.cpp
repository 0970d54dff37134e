#include "ecm/machine_model.hpp"

#include <bit>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace ecm {

using nlohmann::json;

namespace {

MachineModel make_a64fx_fx700() {
  MachineModel m;
  m.name = "a64fx-fx700";
  m.frequency = 1.8e9;
  m.vector_length_doubles = 8;  // 512-bit SVE, double precision
  m.cacheline_bytes = 256;
  m.l1_load_bw = 128.0;
  m.l1_store_bw = 64.0;
  m.l2_load_bw = 64.0;
  m.l2_store_bw = 32.0;
  m.l2_domain_load_bw = 512.0;
  m.l2_domain_store_bw = 256.0;
  m.mem_bw_multistream = 117.0;  // measured triad, 210 GB/s per CMG
  m.mem_bw_readonly = 125.0;     // measured read-only, 225 GB/s per CMG
  m.mem_store_bw = 64.0;
  m.cores_per_domain = 12;
  m.l1_capacity = 64 * 1024;
  m.l2_capacity = 8 * 1024 * 1024;
  m.instruction_table = {
      {"ld1d", 0.5, 11.0},
      {"ld1d_gather_simple", 2.0, std::nullopt},
      {"ld1d_gather_complex", 4.0, std::nullopt},
      {"simple_gather_plus_load", 3.5, std::nullopt},
      {"complex_gather_plus_load", 5.5, std::nullopt},
      {"st1d", 1.0, std::nullopt},
      {"fadd", 0.5, 9.0},
      {"fmad", 0.5, 9.0},
      {"fmla", 0.5, 9.0},
      {"fmul", 0.5, 9.0},
      {"fadda_512", 18.5, 72.0},
      {"faddv_512", 11.5, 49.0},
      {"while", 1.0, 1.0},
  };
  return m;
}

void check_positive(double v, const char* field) {
  if (!(v > 0.0)) {
    throw std::invalid_argument(std::string("machine model: field '") + field +
                                "' must be positive");
  }
}

template <typename T>
T get_field(const json& j, const char* key, const std::string& context) {
  auto it = j.find(key);
  if (it == j.end()) {
    throw std::runtime_error(context + ": missing field '" + key + "'");
  }
  try {
    return it->get<T>();
  } catch (const json::exception& e) {
    throw std::runtime_error(context + ": field '" + key + "': " + e.what());
  }
}

}  // namespace

void validate(const MachineModel& m) {
  if (m.name.empty()) throw std::invalid_argument("machine model: field 'name' must be non-empty");
  check_positive(m.frequency, "frequency");
  if (m.vector_length_doubles == 0 || !std::has_single_bit(m.vector_length_doubles)) {
    throw std::invalid_argument(
        "machine model: field 'vector_length_doubles' must be a power of two");
  }
  if (m.cacheline_bytes == 0) {
    throw std::invalid_argument("machine model: field 'cacheline_bytes' must be positive");
  }
  check_positive(m.l1_load_bw, "l1_load_bw");
  check_positive(m.l1_store_bw, "l1_store_bw");
  check_positive(m.l2_load_bw, "l2_load_bw");
  check_positive(m.l2_store_bw, "l2_store_bw");
  check_positive(m.l2_domain_load_bw, "l2_domain_load_bw");
  check_positive(m.l2_domain_store_bw, "l2_domain_store_bw");
  check_positive(m.mem_bw_multistream, "mem_bw_multistream");
  check_positive(m.mem_bw_readonly, "mem_bw_readonly");
  check_positive(m.mem_store_bw, "mem_store_bw");
  if (m.mem_bw_readonly < m.mem_bw_multistream) {
    throw std::invalid_argument(
        "machine model: field 'mem_bw_readonly' must be >= mem_bw_multistream");
  }
  if (m.cores_per_domain == 0) {
    throw std::invalid_argument("machine model: field 'cores_per_domain' must be positive");
  }
  if (m.l1_capacity == 0) {
    throw std::invalid_argument("machine model: field 'l1_capacity' must be positive");
  }
  if (m.l2_capacity == 0) {
    throw std::invalid_argument("machine model: field 'l2_capacity' must be positive");
  }
  for (const auto& p : m.instruction_table) {
    if (p.form.empty()) {
      throw std::invalid_argument("machine model: field 'instruction_table' has an unnamed form");
    }
    if (!(p.reciprocal_throughput > 0.0)) {
      throw std::invalid_argument("machine model: instruction_table entry '" + p.form +
                                  "': reciprocal_throughput must be positive");
    }
    if (p.latency && *p.latency < p.reciprocal_throughput) {
      throw std::invalid_argument("machine model: instruction_table entry '" + p.form +
                                  "': latency must be >= reciprocal_throughput");
    }
  }
}

const MachineModel& builtin_machine(const std::string& name) {
  static const MachineModel a64fx = [] {
    MachineModel m = make_a64fx_fx700();
    validate(m);
    return m;
  }();
  if (name == a64fx.name) return a64fx;
  throw std::invalid_argument("unknown builtin machine '" + name + "' (known: a64fx-fx700)");
}

std::vector<std::string> builtin_machine_names() { return {"a64fx-fx700"}; }

std::string machine_to_json(const MachineModel& m) {
  json j;
  j["name"] = m.name;
  j["frequency"] = m.frequency;
  j["vector_length_doubles"] = m.vector_length_doubles;
  j["cacheline_bytes"] = m.cacheline_bytes;
  j["l1_load_bw"] = m.l1_load_bw;
  j["l1_store_bw"] = m.l1_store_bw;
  j["l2_load_bw"] = m.l2_load_bw;
  j["l2_store_bw"] = m.l2_store_bw;
  j["l2_domain_load_bw"] = m.l2_domain_load_bw;
  j["l2_domain_store_bw"] = m.l2_domain_store_bw;
  j["mem_bw_multistream"] = m.mem_bw_multistream;
  j["mem_bw_readonly"] = m.mem_bw_readonly;
  j["mem_store_bw"] = m.mem_store_bw;
  j["cores_per_domain"] = m.cores_per_domain;
  j["l1_capacity"] = m.l1_capacity;
  j["l2_capacity"] = m.l2_capacity;
  j["instruction_table"] = json::array();
  for (const auto& p : m.instruction_table) {
    json e;
    e["form"] = p.form;
    e["reciprocal_throughput"] = p.reciprocal_throughput;
    if (p.latency) e["latency"] = *p.latency;
    j["instruction_table"].push_back(e);
  }
  return j.dump(2) + "\n";
}

MachineModel machine_from_json(const std::string& text, const std::string& context) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw std::runtime_error(context + ": " + e.what());
  }
  MachineModel m;
  m.name = get_field<std::string>(j, "name", context);
  m.frequency = get_field<double>(j, "frequency", context);
  m.vector_length_doubles = get_field<unsigned>(j, "vector_length_doubles", context);
  m.cacheline_bytes = get_field<unsigned>(j, "cacheline_bytes", context);
  m.l1_load_bw = get_field<double>(j, "l1_load_bw", context);
  m.l1_store_bw = get_field<double>(j, "l1_store_bw", context);
  m.l2_load_bw = get_field<double>(j, "l2_load_bw", context);
  m.l2_store_bw = get_field<double>(j, "l2_store_bw", context);
  m.l2_domain_load_bw = get_field<double>(j, "l2_domain_load_bw", context);
  m.l2_domain_store_bw = get_field<double>(j, "l2_domain_store_bw", context);
  m.mem_bw_multistream = get_field<double>(j, "mem_bw_multistream", context);
  m.mem_bw_readonly = get_field<double>(j, "mem_bw_readonly", context);
  m.mem_store_bw = get_field<double>(j, "mem_store_bw", context);
  m.cores_per_domain = get_field<unsigned>(j, "cores_per_domain", context);
  m.l1_capacity = get_field<std::uint64_t>(j, "l1_capacity", context);
  m.l2_capacity = get_field<std::uint64_t>(j, "l2_capacity", context);
  auto table = get_field<json>(j, "instruction_table", context);
  if (!table.is_array()) {
    throw std::runtime_error(context + ": field 'instruction_table' must be an array");
  }
  for (const auto& e : table) {
    InstructionProfile p;
    p.form = get_field<std::string>(e, "form", context + ": instruction_table");
    p.reciprocal_throughput =
        get_field<double>(e, "reciprocal_throughput", context + ": instruction_table");
    if (e.contains("latency")) p.latency = e["latency"].get<double>();
    m.instruction_table.push_back(std::move(p));
  }
  validate(m);
  return m;
}

MachineModel load_machine(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("machine file '" + path + "': cannot open");
  std::ostringstream buf;
  buf << in.rdbuf();
  return machine_from_json(buf.str(), "machine file '" + path + "'");
}

void save_machine(const MachineModel& m, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("machine file '" + path + "': cannot open for writing");
  out << machine_to_json(m);
  if (!out) throw std::runtime_error("machine file '" + path + "': write failed");
}

MachineModel resolve_machine(const std::string& name_or_path) {
  for (const auto& n : builtin_machine_names()) {
    if (n == name_or_path) return builtin_machine(n);
  }
  return load_machine(name_or_path);
}

const InstructionProfile& lookup_instruction(const MachineModel& m, const std::string& form) {
  for (const auto& p : m.instruction_table) {
    if (p.form == form) return p;
  }
  std::string known;
  for (const auto& p : m.instruction_table) {
    if (!known.empty()) known += ", ";
    known += p.form;
  }
  throw std::invalid_argument("unknown instruction form '" + form + "' (known: " + known + ")");
}

}  // namespace ecm
