#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <sstream>

#include "ecm/report.hpp"

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

std::string triple(const json& p) {
  return fmtf("{ %.1f | %.1f | %.1f } cy", p["l1"].get<double>(), p["l2"].get<double>(),
              p["mem"].get<double>());
}

void render_predict(const json& j, std::ostringstream& out) {
  out << "kernel      " << j["kernel"].get<std::string>() << "   ("
      << j["expression"].get<std::string>() << ")\n";
  out << "machine     " << j["machine"].get<std::string>() << "\n";
  out << "work unit   " << j["work_unit"].get<std::string>() << "\n";
  if (j.contains("layer_condition")) {
    out << "layer cond. " << j["layer_condition"].get<std::string>() << "\n";
  }
  const auto& unroll = j["unroll_ways"];
  out << "unroll      "
      << (unroll.is_string() ? unroll.get<std::string>() : std::to_string(unroll.get<unsigned>()))
      << "\n";
  const auto& t = j["traffic"];
  out << fmtf("traffic     L1<->L2 %.0f rd / %.0f wr B, mem %.0f rd / %.0f wr B\n",
              t["l1l2_read_bytes"].get<double>(), t["l1l2_write_bytes"].get<double>(),
              t["mem_read_bytes"].get<double>(), t["mem_write_bytes"].get<double>());
  if (t["dependency_chain_cycles"].get<double>() > 0.0) {
    out << fmtf("dependency  %.2f cy per work unit\n", t["dependency_chain_cycles"].get<double>());
  }
  out << "\n  overlap      { L1 | L2 | MEM }\n";
  for (const auto& name : {"partial", "none", "full"}) {
    if (j["predictions"].contains(name)) {
      out << fmtf("  %-12s %s\n", name, triple(j["predictions"][name]).c_str());
    }
  }
  const std::string level = j["level"].get<std::string>();
  if (level != "all" && j["predictions"].contains("partial")) {
    out << fmtf("\nlevel %-5s %.1f cy\n", level.c_str(),
                j["predictions"]["partial"][level].get<double>());
  }
}

void render_scaling(const json& j, std::ostringstream& out) {
  out << "kernel      " << j["kernel"].get<std::string>() << "   ("
      << j["expression"].get<std::string>() << ")\n";
  out << "machine     " << j["machine"].get<std::string>() << "\n";
  out << "single core " << triple(j["single_core"]) << " per " << j["work_unit"].get<std::string>()
      << "\n";
  const auto& s = j["scaling"];
  if (s["saturation_cores"].is_null()) {
    out << "saturation  never (no shared-resource traffic)\n";
  } else {
    out << "saturation  " << s["saturation_cores"].get<unsigned>() << " cores\n";
  }
  out << "\n  cores    perf [Gwu/s]    bandwidth [GB/s]";
  const bool flops = !s["points"].empty() && s["points"][0].contains("gflops");
  if (flops) out << "    [Gflop/s]";
  out << "\n";
  for (const auto& pt : s["points"]) {
    out << fmtf("  %5u    %12.3f    %16.1f", pt["cores"].get<unsigned>(),
                pt["work_units_per_second"].get<double>() / 1e9,
                pt["bandwidth_gbps"].get<double>());
    if (flops) out << fmtf("    %9.2f", pt["gflops"].get<double>());
    out << "\n";
  }
}

void render_spmv_model(const json& mj, std::ostringstream& out) {
  const auto& c = mj["cycles_per_row"];
  out << fmtf("model       %.2f cy/row in L1, %.2f in L2, %.2f in memory\n",
              c["l1"].get<double>(), c["l2"].get<double>(), c["mem"].get<double>());
  out << fmtf("            %.1f bytes/row, %.1f flops/row\n", mj["bytes_per_row"].get<double>(),
              mj["flops_per_row"].get<double>());
  out << fmtf("single core %.2f Gflop/s at %.1f GB/s\n", mj["perf_gflops"].get<double>(),
              mj["bandwidth_gbps"].get<double>());
  if (mj["latency_bound"].get<bool>()) {
    out << fmtf("            latency bound: reduction chain %.2f cy/VL dominates\n",
                mj["reduction_bound_per_vl"].get<double>());
  }
  const auto& s = mj["scaling"];
  if (!s["saturation_cores"].is_null()) {
    out << fmtf("scaling     roof %.1f Gflop/s, saturation at %u cores\n",
                s.contains("roof_gflops") ? s["roof_gflops"].get<double>() : 0.0,
                s["saturation_cores"].get<unsigned>());
  } else {
    out << "scaling     no bandwidth roof within the domain\n";
  }
}

void render_spmv(const json& j, std::ostringstream& out) {
  const auto& mj = j["matrix"];
  out << "matrix      " << mj["source"].get<std::string>() << ": "
      << mj["nrows"].get<index_t>() << " rows, " << mj["nnz"].get<index_t>() << " nonzeros, "
      << fmtf("n_nzr %.2f", mj["n_nzr"].get<double>()) << "\n";
  if (mj.contains("rcm")) {
    out << "rcm         bandwidth " << mj["rcm"]["bandwidth_before"].get<index_t>() << " -> "
        << mj["rcm"]["bandwidth_after"].get<index_t>() << "\n";
  }
  out << "format      " << j["format"].get<std::string>() << "\n";
  if (j.contains("sell")) {
    const auto& s = j["sell"];
    const auto& pad = s["padding"];
    out << fmtf("sell        C=%lld, sigma=%lld%s: stored %lld of %lld nnz, overhead %.2f%%\n",
                static_cast<long long>(s["chunk_height"].get<index_t>()),
                static_cast<long long>(s["sigma"].get<index_t>()),
                s["auto"].get<bool>() ? " (auto)" : "",
                static_cast<long long>(pad["stored"].get<index_t>()),
                static_cast<long long>(pad["nnz"].get<index_t>()),
                100.0 * pad["overhead"].get<double>());
  }
  out << fmtf("alpha       %.6f (%s)\n", j["alpha"]["value"].get<double>(),
              j["alpha"]["mode"].get<std::string>().c_str());
  render_spmv_model(j["model"], out);
  if (j.contains("crs_saturation")) {
    const auto& s = j["crs_saturation"];
    out << fmtf("saturation  demand %.1f GB/s vs limit %.1f GB/s -> %s\n",
                s["domain_demand_gbps"].get<double>(), s["domain_limit_gbps"].get<double>(),
                s["saturates"].get<bool>() ? "saturates" : "does not saturate");
  }
  if (j.contains("check")) {
    const auto& c = j["check"];
    out << fmtf("check       crs vs sell: relative error %.2e (tolerance %.0e) -> %s\n",
                c["relative_error"].get<double>(), c["tolerance"].get<double>(),
                c["pass"].get<bool>() ? "PASS" : "FAIL");
  }
  const auto& t = j["timing"];
  out << fmtf("timing      %.3f ms with %u thread(s), %.2f Gflop/s (informational)\n",
              1e3 * t["seconds"].get<double>(), t["threads"].get<unsigned>(),
              t["gflops"].get<double>());
}

void render_validate(const json& j, std::ostringstream& out) {
  out << "machine     " << j["machine"].get<std::string>() << "\n\n";
  out << "  kernel table [cy/VL]            predicted               reference           dev\n";
  for (const auto& row : j["kernel_table"]) {
    std::string name = row["kernel"].get<std::string>();
    if (row.contains("layer_condition")) {
      name += " (" + row["layer_condition"].get<std::string>() + ")";
    }
    const auto& p = row["predicted"];
    const auto& r = row["reference"];
    out << fmtf("  %-24s { %4.1f | %4.1f | %4.1f }  { %4.1f | %4.1f | %4.1f }  %5.2f  %s%s\n",
                name.c_str(), p[0].get<double>(), p[1].get<double>(), p[2].get<double>(),
                r[0].get<double>(), r[1].get<double>(), r[2].get<double>(),
                row["max_abs_deviation"].get<double>(),
                row["pass"].get<bool>() ? "PASS" : "FAIL",
                row["flagged"].get<bool>() ? " !" : "");
  }
  out << "\n  constants\n";
  for (const auto& c : j["constants"]) {
    std::string expected = c["expected"].is_string() ? c["expected"].get<std::string>()
                                                     : fmtf("%.4g", c["expected"].get<double>());
    out << fmtf("  %-44s %10.4f  (expect %s)  %s\n", c["name"].get<std::string>().c_str(),
                c["value"].get<double>(), expected.c_str(),
                c["pass"].get<bool>() ? "PASS" : "FAIL");
  }
  out << "\noverall     " << (j["pass"].get<bool>() ? "PASS" : "FAIL") << "\n";
}

}  // namespace

std::string render_text(const Report& r) {
  std::ostringstream out;
  const json& j = r.data;
  if (j.contains("invocation")) {
    out << "$ " << j["invocation"].get<std::string>() << "\n";
  }
  const std::string cmd = j["command"].get<std::string>();
  if (cmd == "predict") {
    render_predict(j, out);
  } else if (cmd == "scaling") {
    render_scaling(j, out);
  } else if (cmd == "spmv") {
    render_spmv(j, out);
  } else if (cmd == "validate") {
    render_validate(j, out);
  } else if (cmd == "machine") {
    out << j["machine"].dump(2) << "\n";
  } else {
    out << j.dump(2) << "\n";
  }
  return out.str();
}

}  // namespace ecm
