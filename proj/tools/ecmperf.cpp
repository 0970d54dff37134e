// Command-line front end: predict, scaling, spmv, validate, machine.
// Exit codes: 0 success, 1 validation failure, 2 usage or input error.

#include <cstdio>
#include <exception>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "ecm/report.hpp"

namespace {

std::string join_args(int argc, char** argv) {
  std::string s;
  for (int i = 0; i < argc; ++i) {
    if (i) s += ' ';
    s += argv[i];
  }
  return s;
}

void emit(ecm::Report r, const std::string& output, const std::string& invocation) {
  r.data["invocation"] = invocation;
  if (output == "json") {
    std::cout << r.data.dump(2) << "\n";
  } else {
    std::cout << ecm::render_text(r);
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Analytical ECM performance model for streaming kernels and SpMV"};
  app.require_subcommand(1);
  app.fallthrough(true);

  std::string machine = "a64fx-fx700";
  std::string output = "text";
  app.add_option("-m,--machine", machine, "Builtin machine name or machine file path")
      ->capture_default_str();
  app.add_option("-o,--output", output, "Report format")
      ->check(CLI::IsMember({"text", "json"}))
      ->capture_default_str();

  ecm::PredictOptions predict;
  std::string predict_lc, scaling_lc;
  auto* cmd_predict = app.add_subcommand("predict", "Single-core prediction for a kernel");
  cmd_predict->add_option("kernel", predict.kernel, "Kernel name")->required();
  cmd_predict->add_option("--level", predict.level, "Data-set residence to highlight")
      ->check(CLI::IsMember({"l1", "l2", "mem", "all"}))
      ->capture_default_str();
  cmd_predict->add_option("--lc", predict_lc, "Layer condition (stencil kernels)")
      ->check(CLI::IsMember({"satisfied", "violated-l1", "violated"}));
  cmd_predict->add_option("--unroll", predict.unroll, "Accumulator expansion, 0 = sufficient");
  cmd_predict->add_option("--overlap", predict.overlap, "Overlap scenario")
      ->check(CLI::IsMember({"partial", "none", "full", "all"}))
      ->capture_default_str();

  ecm::ScalingOptions scaling;
  auto* cmd_scaling = app.add_subcommand("scaling", "Multicore scaling within one domain");
  cmd_scaling->add_option("kernel", scaling.kernel, "Kernel name")->required();
  cmd_scaling->add_option("--max-cores", scaling.max_cores, "Core count, 0 = domain size");
  cmd_scaling->add_option("--lc", scaling_lc, "Layer condition (stencil kernels)")
      ->check(CLI::IsMember({"satisfied", "violated-l1", "violated"}));
  cmd_scaling->add_option("--unroll", scaling.unroll, "Accumulator expansion, 0 = sufficient");

  ecm::SpmvOptions spmv;
  auto* cmd_spmv = app.add_subcommand("spmv", "Model and run SpMV on a sparse matrix");
  cmd_spmv->add_option("--matrix", spmv.matrix_path, "Matrix Market file");
  cmd_spmv->add_option("--hpcg", spmv.hpcg_dims, "Grid size (one value or nx ny nz)")
      ->expected(1, 3);
  cmd_spmv->add_option("--format", spmv.format, "Storage format")
      ->check(CLI::IsMember({"crs", "sell"}))
      ->capture_default_str();
  cmd_spmv->add_option("-C,--chunk-height", spmv.chunk_height, "SELL chunk height")
      ->capture_default_str();
  cmd_spmv->add_option("--sigma", spmv.sigma, "SELL sorting window, or 'auto'")
      ->capture_default_str();
  cmd_spmv->add_option("--alpha", spmv.alpha, "RHS efficiency: number, 'optimistic', or 'auto'")
      ->capture_default_str();
  cmd_spmv->add_option("--unroll", spmv.unroll, "Accumulator expansion, 0 = C/VL");
  cmd_spmv->add_flag("--check", spmv.check, "Verify SELL result against CRS");
  cmd_spmv->add_flag("--rcm", spmv.rcm, "Reverse Cuthill-McKee reordering first");
  cmd_spmv->add_option("--threads", spmv.threads, "Worker threads for the numeric run")
      ->capture_default_str();
  cmd_spmv->add_option("--seed", spmv.seed, "Seed for the deterministic input vector")
      ->capture_default_str();

  auto* cmd_validate =
      app.add_subcommand("validate", "Check the model against its pinned reference values");
  auto* cmd_machine = app.add_subcommand("machine", "Dump the machine description");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;  // help/version exit cleanly
  }

  try {
    const ecm::MachineModel m = ecm::resolve_machine(machine);
    const std::string invocation = join_args(argc, argv);
    if (*cmd_predict) {
      predict.lc = ecm::parse_layer_condition(predict_lc);
      emit(ecm::cmd_predict(m, predict), output, invocation);
      return 0;
    }
    if (*cmd_scaling) {
      scaling.lc = ecm::parse_layer_condition(scaling_lc);
      emit(ecm::cmd_scaling(m, scaling), output, invocation);
      return 0;
    }
    if (*cmd_spmv) {
      ecm::Report r = ecm::cmd_spmv(m, spmv);
      const bool pass = r.pass;
      emit(std::move(r), output, invocation);
      return pass ? 0 : 1;
    }
    if (*cmd_validate) {
      ecm::Report r = ecm::cmd_validate(m);
      const bool pass = r.pass;
      emit(std::move(r), output, invocation);
      return pass ? 0 : 1;
    }
    if (*cmd_machine) {
      emit(ecm::cmd_machine(m), output, invocation);
      return 0;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}
