#include "ecm/report.hpp"

#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <sstream>
#include <stdexcept>

#include "ecm/ecm_engine.hpp"
#include "ecm/matrix_io.hpp"
#include "ecm/spmv_model.hpp"

namespace ecm {

using nlohmann::json;

namespace {

std::string fmtf(const char* fmt, ...) {
  char buf[256];
  va_list args;
  va_start(args, fmt);
  std::vsnprintf(buf, sizeof buf, fmt, args);
  va_end(args);
  return buf;
}

index_t parse_index(const std::string& text, const char* what) {
  std::size_t used = 0;
  index_t v = 0;
  try {
    v = std::stoll(text, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != text.size() || v < 1) {
    throw std::invalid_argument(std::string("invalid ") + what + " value '" + text + "'");
  }
  return v;
}

double parse_number(const std::string& text, const char* what) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(text, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != text.size()) {
    throw std::invalid_argument(std::string("invalid ") + what + " value '" + text + "'");
  }
  return v;
}

json prediction_json(const EcmPrediction& p) {
  return {{"l1", p.t_l1}, {"l2", p.t_l2}, {"mem", p.t_mem}};
}

json traffic_json(const TrafficProfile& t) {
  return {{"core_load_cycles", t.core_load_cycles},
          {"core_store_cycles", t.core_store_cycles},
          {"dependency_chain_cycles", t.dependency_chain_cycles},
          {"l1l2_read_bytes", t.l1l2_read_bytes},
          {"l1l2_write_bytes", t.l1l2_write_bytes},
          {"mem_read_bytes", t.mem_read_bytes},
          {"mem_write_bytes", t.mem_write_bytes},
          {"readonly", t.readonly}};
}

json curve_json(const ScalingCurve& c, double work_unit_flops) {
  json j;
  j["roof_work_units_per_cycle"] =
      std::isfinite(c.roof_work_units_per_cycle) ? json(c.roof_work_units_per_cycle) : json();
  if (c.saturation_cores) {
    j["saturation_cores"] = *c.saturation_cores;
  } else {
    j["saturation_cores"] = nullptr;
  }
  j["points"] = json::array();
  for (const auto& pt : c.points) {
    json e;
    e["cores"] = pt.cores;
    e["work_units_per_second"] = pt.work_units_per_second;
    e["bandwidth_gbps"] = pt.bandwidth_bytes_per_second / 1e9;
    if (work_unit_flops > 0.0) e["gflops"] = pt.work_units_per_second * work_unit_flops / 1e9;
    j["points"].push_back(e);
  }
  return j;
}

json spmv_model_json(const SpmvPrediction& p, const MachineModel& m) {
  json j;
  j["cycles_per_row"] = {{"l1", p.cycles_l1}, {"l2", p.cycles_l2}, {"mem", p.cycles_mem}};
  j["reduction_bound_per_vl"] = p.reduction_bound_per_vl;
  j["latency_bound"] = p.latency_bound;
  j["bytes_per_row"] = p.bytes_per_row;
  j["flops_per_row"] = p.flops_per_row;
  j["perf_gflops"] = p.single_core_perf / 1e9;
  j["bandwidth_gbps"] = p.single_core_bw / 1e9;
  json scaling = curve_json(p.scaling, p.flops_per_row);
  if (p.scaling.saturation_cores) {
    scaling["roof_gflops"] =
        p.scaling.roof_work_units_per_cycle * m.frequency * p.flops_per_row / 1e9;
  }
  j["scaling"] = scaling;
  return j;
}

// Deterministic, platform-independent pseudo-random doubles in [-1, 1].
std::uint64_t splitmix64(std::uint64_t& state) {
  state += 0x9e3779b97f4a7c15ULL;
  std::uint64_t z = state;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

std::vector<double> random_vector(index_t n, std::uint64_t seed) {
  std::vector<double> x(n);
  std::uint64_t state = seed;
  for (auto& v : x) {
    v = 2.0 * ((splitmix64(state) >> 11) * 0x1.0p-53) - 1.0;
  }
  return x;
}

struct KernelReference {
  const char* kernel;
  const char* lc;  // empty for streaming kernels
  double l1, l2, mem;
};

// Pinned single-core reference predictions for the builtin A64FX model,
// in cycles per VL.
constexpr KernelReference kKernelReferences[] = {
    {"copy", "", 1.5, 4.5, 5.6},
    {"daxpy", "", 2.0, 5.0, 6.1},
    {"dot", "", 1.0, 3.0, 4.1},
    {"init", "", 1.0, 3.0, 3.5},
    {"load", "", 0.5, 1.5, 2.0},
    {"triad", "", 2.0, 6.0, 7.7},
    {"sum", "", 0.5, 1.5, 2.0},
    {"schoenauer", "", 2.5, 7.5, 9.7},
    {"2d5pt", "satisfied", 3.5, 6.5, 7.6},
    {"2d5pt", "violated-l1", 3.5, 8.5, 9.6},
    {"2d5pt", "violated", 3.5, 8.5, 10.7},
};
constexpr double kKernelTolerance = 0.1;  // cy/VL

}  // namespace

Report cmd_predict(const MachineModel& m, const PredictOptions& opt) {
  const KernelSpec& k = find_kernel(opt.kernel);
  const TrafficProfile t = traffic(k, m, opt.lc, opt.unroll);

  json j;
  j["command"] = "predict";
  j["machine"] = m.name;
  j["kernel"] = k.name;
  j["expression"] = k.expression;
  j["work_unit"] = "cy/VL, VL = " + std::to_string(m.vector_length_doubles);
  j["level"] = opt.level;
  j["unroll_ways"] = opt.unroll ? json(opt.unroll) : json("sufficient");
  if (k.stencil) {
    j["layer_condition"] = to_string(opt.lc.value_or(LayerConditionState::satisfied_l1));
  }
  j["traffic"] = traffic_json(t);

  json preds;
  if (opt.overlap == "partial" || opt.overlap == "all") {
    preds["partial"] = prediction_json(compose(m, t));
  }
  if (opt.overlap == "none" || opt.overlap == "all") {
    preds["none"] = prediction_json(compose_no_overlap(m, t));
  }
  if (opt.overlap == "full" || opt.overlap == "all") {
    preds["full"] = prediction_json(compose_full_overlap(m, t));
  }
  if (preds.empty()) {
    throw std::invalid_argument("unknown overlap scenario '" + opt.overlap +
                                "' (known: partial, none, full, all)");
  }
  j["predictions"] = preds;
  return {j, true};
}

Report cmd_scaling(const MachineModel& m, const ScalingOptions& opt) {
  const KernelSpec& k = find_kernel(opt.kernel);
  const TrafficProfile t = traffic(k, m, opt.lc, opt.unroll);
  const EcmPrediction p = compose(m, t);
  const ScalingCurve curve = scale(m, p, t, opt.max_cores);

  json j;
  j["command"] = "scaling";
  j["machine"] = m.name;
  j["kernel"] = k.name;
  j["expression"] = k.expression;
  j["work_unit"] = "VL = " + std::to_string(m.vector_length_doubles) + " iterations";
  j["unroll_ways"] = opt.unroll ? json(opt.unroll) : json("sufficient");
  if (k.stencil) {
    j["layer_condition"] = to_string(opt.lc.value_or(LayerConditionState::satisfied_l1));
  }
  j["single_core"] = prediction_json(p);
  j["scaling"] = curve_json(curve, k.flops_per_iteration * m.vector_length_doubles);
  return {j, true};
}

Report cmd_spmv(const MachineModel& m, const SpmvOptions& opt) {
  CrsMatrix a;
  std::string source;
  if (!opt.hpcg_dims.empty()) {
    index_t nx, ny, nz;
    if (opt.hpcg_dims.size() == 1) {
      nx = ny = nz = opt.hpcg_dims[0];
    } else if (opt.hpcg_dims.size() == 3) {
      nx = opt.hpcg_dims[0];
      ny = opt.hpcg_dims[1];
      nz = opt.hpcg_dims[2];
    } else {
      throw std::invalid_argument("--hpcg takes one size or three dimensions");
    }
    a = generate_hpcg(nx, ny, nz);
    source = fmtf("hpcg %lldx%lldx%lld", static_cast<long long>(nx), static_cast<long long>(ny),
                  static_cast<long long>(nz));
  } else if (!opt.matrix_path.empty()) {
    a = read_matrix_market(opt.matrix_path);
    source = opt.matrix_path;
  } else {
    throw std::invalid_argument("spmv needs --matrix or --hpcg");
  }
  if (opt.format != "crs" && opt.format != "sell") {
    throw std::invalid_argument("unknown format '" + opt.format + "' (known: crs, sell)");
  }
  if (a.nnz() == 0) throw std::invalid_argument("matrix has no nonzeros to model");

  json j;
  j["command"] = "spmv";
  j["machine"] = m.name;
  j["format"] = opt.format;

  json jm;
  jm["source"] = source;
  if (opt.rcm) {
    const index_t before = matrix_bandwidth(a);
    RcmResult r = rcm_reorder(a);
    a = std::move(r.matrix);
    jm["rcm"] = {{"bandwidth_before", before}, {"bandwidth_after", matrix_bandwidth(a)}};
  }
  const MatrixStats stats = matrix_stats(a);
  jm["nrows"] = a.nrows;
  jm["ncols"] = a.ncols;
  jm["nnz"] = stats.nnz;
  jm["n_nzr"] = stats.n_nzr;
  json hist = json::object();
  for (const auto& [len, count] : stats.row_length_histogram) {
    hist[std::to_string(len)] = count;
  }
  jm["row_length_histogram"] = hist;
  j["matrix"] = jm;

  // SELL layout: needed for the sell model, the numeric check, and the
  // padding report.
  const bool need_sell = opt.format == "sell" || opt.check;
  SellCSigmaMatrix sell;
  if (need_sell) {
    json js;
    js["chunk_height"] = opt.chunk_height;
    js["requested"] = opt.sigma;
    index_t sigma = 0;
    if (opt.sigma == "auto") {
      // Smallest power-of-two window up to 1024 that keeps the padding
      // overhead at or below 5%; largest window otherwise.
      double best = -1.0;
      for (index_t cand = 1; cand <= 1024; cand *= 2) {
        sell = crs_to_sell(a, opt.chunk_height, cand);
        best = padding_report(sell).overhead;
        sigma = cand;
        if (best <= 0.05) break;
      }
      js["auto"] = true;
    } else {
      sigma = parse_index(opt.sigma, "--sigma");
      sell = crs_to_sell(a, opt.chunk_height, sigma);
      js["auto"] = false;
    }
    js["sigma"] = sigma;
    const PaddingReport pad = padding_report(sell);
    js["padding"] = {{"nnz", pad.nnz}, {"stored", pad.stored}, {"overhead", pad.overhead}};
    j["sell"] = js;
    jm["padded_n_nzr"] = static_cast<double>(pad.stored) / static_cast<double>(a.nrows);
    j["matrix"] = jm;
  }

  double alpha;
  std::string alpha_mode = opt.alpha;
  if (opt.alpha == "optimistic") {
    alpha = 1.0 / stats.n_nzr;
  } else if (opt.alpha == "auto") {
    alpha = estimate_alpha_lru(a, m.l2_capacity, m.cacheline_bytes);
  } else {
    alpha = parse_number(opt.alpha, "--alpha");
    alpha_mode = "explicit";
  }
  j["alpha"] = {{"mode", alpha_mode}, {"value", alpha}};

  // The model consumes the average stored row length: for SELL that
  // includes the padding, for CRS it is the plain nonzero average.
  if (opt.format == "sell") {
    const double padded_n_nzr = static_cast<double>(sell.stored()) / a.nrows;
    const unsigned unroll =
        opt.unroll ? opt.unroll
                   : std::max<unsigned>(1, static_cast<unsigned>(opt.chunk_height /
                                                                 m.vector_length_doubles));
    j["unroll_ways"] = unroll;
    j["model"] = spmv_model_json(sell_cycles_per_row(m, padded_n_nzr, alpha, unroll), m);
  } else {
    j["model"] = spmv_model_json(crs_prediction(m, stats.n_nzr, alpha), m);
    const SaturationCheck sat = crs_saturation_check(m, stats.n_nzr, alpha);
    j["crs_saturation"] = {{"per_core_bw_gbps", sat.per_core_bw / 1e9},
                           {"domain_demand_gbps", sat.domain_demand / 1e9},
                           {"domain_limit_gbps", sat.domain_limit / 1e9},
                           {"saturates", sat.saturates}};
  }

  // Numerical execution; wall-clock numbers are informational only.
  const std::vector<double> x = random_vector(a.ncols, opt.seed);
  bool pass = true;
  {
    using clock = std::chrono::steady_clock;
    std::vector<double> y;
    const auto t0 = clock::now();
    if (opt.format == "sell") {
      y = spmv_sell(sell, x, opt.threads);
    } else {
      y = spmv_crs(a, x, opt.threads);
    }
    const double seconds = std::chrono::duration<double>(clock::now() - t0).count();
    double checksum = 0.0;
    for (double v : y) checksum += v;
    j["timing"] = {{"seconds", seconds},
                   {"threads", opt.threads},
                   {"gflops", seconds > 0.0 ? 2.0 * stats.nnz / seconds / 1e9 : 0.0},
                   {"checksum", checksum}};
  }

  if (opt.check) {
    const std::vector<double> y_crs = spmv_crs(a, x, opt.threads);
    const std::vector<double> y_sell = spmv_sell(sell, x, opt.threads);
    double max_abs = 0.0;
    for (index_t i = 0; i < a.nrows; ++i) {
      max_abs = std::max(max_abs, std::abs(y_sell[i] - y_crs[i]));
    }
    double norm_a = 0.0;
    for (index_t r = 0; r < a.nrows; ++r) {
      double row = 0.0;
      for (index_t k = a.row_offsets[r]; k < a.row_offsets[r + 1]; ++k) {
        row += std::abs(a.values[k]);
      }
      norm_a = std::max(norm_a, row);
    }
    double norm_x = 0.0;
    for (double v : x) norm_x = std::max(norm_x, std::abs(v));
    const double scale_ref = norm_a * norm_x;
    const double rel = scale_ref > 0.0 ? max_abs / scale_ref : max_abs;
    const bool ok = rel <= 1e-13;
    pass = pass && ok;
    j["check"] = {{"max_abs_diff", max_abs},
                  {"relative_error", rel},
                  {"tolerance", 1e-13},
                  {"pass", ok}};
  }

  return {j, pass};
}

Report cmd_validate(const MachineModel& m) {
  json j;
  j["command"] = "validate";
  j["machine"] = m.name;
  bool all_pass = true;

  json rows = json::array();
  for (const auto& ref : kKernelReferences) {
    const KernelSpec& k = find_kernel(ref.kernel);
    const auto lc = parse_layer_condition(ref.lc);
    const EcmPrediction p = compose(m, traffic(k, m, lc));
    const double dev = std::max({std::abs(p.t_l1 - ref.l1), std::abs(p.t_l2 - ref.l2),
                                 std::abs(p.t_mem - ref.mem)});
    const bool ok = dev <= kKernelTolerance;
    all_pass = all_pass && ok;
    json row;
    row["kernel"] = ref.kernel;
    if (!std::string(ref.lc).empty()) row["layer_condition"] = ref.lc;
    row["predicted"] = {p.t_l1, p.t_l2, p.t_mem};
    row["reference"] = {ref.l1, ref.l2, ref.mem};
    row["max_abs_deviation"] = dev;
    row["tolerance"] = kKernelTolerance;
    row["flagged"] = dev / std::max({ref.l1, ref.l2, ref.mem}) >= kDeviationFlagThreshold;
    row["pass"] = ok;
    rows.push_back(row);
  }
  j["kernel_table"] = rows;

  // SpMV reference constants for n_nzr = 27, alpha = 1/27.
  const double n_nzr = 27.0;
  const double alpha = 1.0 / n_nzr;
  const SpmvPrediction sell = sell_cycles_per_row(m, n_nzr, alpha, 4);
  const SaturationCheck sat = crs_saturation_check(m, n_nzr, alpha);
  const double roof_gflops =
      sell.scaling.roof_work_units_per_cycle * m.frequency * sell.flops_per_row / 1e9;

  json consts = json::array();
  auto add_const = [&](const char* name, double value, double expected, double tol) {
    const bool ok = std::abs(value - expected) <= tol;
    all_pass = all_pass && ok;
    consts.push_back({{"name", name},
                      {"value", value},
                      {"expected", expected},
                      {"tolerance", tol},
                      {"pass", ok}});
  };
  add_const("crs core cycles per row (n_nzr=27)", crs_core_cycles_per_row(m, n_nzr), 47.5, 1e-9);
  add_const("traffic per row [bytes] (alpha=1/27)",
            traffic_per_row({.n_nzr = n_nzr, .alpha = alpha}), 352.0, 1e-9);
  add_const("crs single-core bandwidth [GB/s]", sat.per_core_bw / 1e9, 13.34, 0.05);
  add_const("sell L1 cycles per row", sell.cycles_l1, 20.25, 0.05);
  add_const("sell total cycles per row", sell.cycles_mem, 28.76, 0.1);
  add_const("sell single-core perf [Gflop/s]", sell.single_core_perf / 1e9, 3.38, 0.05);
  add_const("sell equivalent bandwidth [GB/s]", sell.single_core_bw / 1e9, 22.0, 0.2);
  add_const("sell saturation roof [Gflop/s]", roof_gflops, 32.2, 0.2);
  {
    const bool ok = !sat.saturates;
    all_pass = all_pass && ok;
    consts.push_back({{"name", "crs domain demand below bandwidth limit"},
                      {"value", sat.domain_demand / 1e9},
                      {"expected", std::string("< ") + fmtf("%.1f", sat.domain_limit / 1e9)},
                      {"pass", ok}});
  }
  j["constants"] = consts;
  j["pass"] = all_pass;
  return {j, all_pass};
}

Report cmd_machine(const MachineModel& m) {
  json j;
  j["command"] = "machine";
  j["machine"] = json::parse(machine_to_json(m));
  return {j, true};
}

}  // namespace ecm
