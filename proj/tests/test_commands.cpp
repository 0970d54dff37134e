#include <doctest.h>

#include <filesystem>
#include <random>
#include <stdexcept>

#include "ecm/matrix_io.hpp"
#include "ecm/report.hpp"
#include "test_helpers.hpp"

using namespace ecm;
using nlohmann::json;

namespace {

const MachineModel& a64fx() { return builtin_machine("a64fx-fx700"); }

}  // namespace

TEST_CASE("cmd_predict triad") {
  const Report r = cmd_predict(a64fx(), {.kernel = "triad"});
  const json& p = r.data["predictions"]["partial"];
  CHECK(p["l1"].get<double>() == doctest::Approx(2.0));
  CHECK(p["l2"].get<double>() == doctest::Approx(6.0));
  CHECK(p["mem"].get<double>() == doctest::Approx(7.641).epsilon(0.001));
  CHECK(r.data["machine"] == "a64fx-fx700");
  CHECK(!render_text(r).empty());
}

TEST_CASE("cmd_predict stencil with violated-l1 layer condition") {
  const Report r = cmd_predict(
      a64fx(), {.kernel = "2d5pt", .lc = LayerConditionState::violated_l1_satisfied_l2});
  const json& p = r.data["predictions"]["partial"];
  CHECK(p["l1"].get<double>() == doctest::Approx(3.5));
  CHECK(p["l2"].get<double>() == doctest::Approx(8.5));
  CHECK(p["mem"].get<double>() == doctest::Approx(9.594).epsilon(0.001));
  CHECK(r.data["layer_condition"] == "violated-l1");
}

TEST_CASE("cmd_predict sum without unrolling is latency bound") {
  const Report r = cmd_predict(a64fx(), {.kernel = "sum", .unroll = 1});
  CHECK(r.data["predictions"]["partial"]["l1"].get<double>() == doctest::Approx(9.0));
}

TEST_CASE("cmd_predict overlap scenarios") {
  const Report r = cmd_predict(a64fx(), {.kernel = "triad", .overlap = "all"});
  CHECK(r.data["predictions"]["none"]["mem"].get<double>() == doctest::Approx(9.641).epsilon(0.001));
  CHECK(r.data["predictions"]["full"]["mem"].get<double>() == doctest::Approx(5.0));
  CHECK_THROWS_AS(cmd_predict(a64fx(), {.kernel = "triad", .overlap = "sideways"}),
                  std::invalid_argument);
  CHECK_THROWS_AS(cmd_predict(a64fx(), {.kernel = "nonexistent"}), std::invalid_argument);
}

TEST_CASE("cmd_scaling triad saturates at 4 cores") {
  const Report r = cmd_scaling(a64fx(), {.kernel = "triad"});
  CHECK(r.data["scaling"]["saturation_cores"].get<unsigned>() == 4);
  CHECK(r.data["scaling"]["points"].size() == 12);
  // One core runs at the single-core prediction.
  const double wu = r.data["scaling"]["points"][0]["work_units_per_second"].get<double>();
  CHECK(wu == doctest::Approx(1.8e9 / 7.6410256410256412));
  CHECK(!render_text(r).empty());
}

TEST_CASE("cmd_scaling sum without unrolling never saturates in the domain") {
  const Report r = cmd_scaling(a64fx(), {.kernel = "sum", .unroll = 1});
  CHECK(r.data["scaling"]["saturation_cores"].get<unsigned>() == 18);
  const auto& points = r.data["scaling"]["points"];
  const double roof = r.data["scaling"]["roof_work_units_per_cycle"].get<double>();
  for (const auto& pt : points) {
    CHECK(pt["work_units_per_second"].get<double>() / 1.8e9 < roof);
  }
}

TEST_CASE("cmd_spmv on a generated matrix with check") {
  const Report r = cmd_spmv(a64fx(), {.hpcg_dims = {8}, .check = true});
  CHECK(r.pass);
  CHECK(r.data["check"]["pass"].get<bool>());
  CHECK(r.data["matrix"]["nrows"].get<index_t>() == 512);
  CHECK(r.data["matrix"]["nnz"].get<index_t>() == 22LL * 22 * 22);
  CHECK(r.data["sell"]["padding"]["overhead"].get<double>() >= 0.0);
  CHECK(r.data["model"]["cycles_per_row"]["mem"].get<double>() > 0.0);
  CHECK(!render_text(r).empty());
}

TEST_CASE("cmd_spmv sigma auto meets the 5% padding target") {
  const Report r = cmd_spmv(a64fx(), {.hpcg_dims = {16}, .sigma = "auto"});
  CHECK(r.data["sell"]["auto"].get<bool>());
  CHECK(r.data["sell"]["padding"]["overhead"].get<double>() <= 0.05);
}

TEST_CASE("cmd_spmv crs format reports the saturation check") {
  const Report r = cmd_spmv(a64fx(), {.hpcg_dims = {8}, .format = "crs"});
  CHECK(!r.data["crs_saturation"]["saturates"].get<bool>());
  CHECK(r.data["model"]["latency_bound"].get<bool>());
  CHECK(!r.data.contains("sell"));
}

TEST_CASE("cmd_spmv with rcm restores a shuffled banded matrix") {
  std::mt19937_64 rng(17);
  const CrsMatrix shuffled =
      ecm::testing::shuffle_symmetric(ecm::testing::make_tridiagonal(60), rng);
  const auto path = std::filesystem::temp_directory_path() / "ecmperf_rcm_input.mtx";
  write_matrix_market(shuffled, path.string());

  const Report r = cmd_spmv(a64fx(), {.matrix_path = path.string(), .check = true, .rcm = true});
  CHECK(r.pass);
  CHECK(r.data["matrix"]["rcm"]["bandwidth_before"].get<index_t>() > 1);
  CHECK(r.data["matrix"]["rcm"]["bandwidth_after"].get<index_t>() == 1);
  std::filesystem::remove(path);
}

TEST_CASE("cmd_spmv is deterministic apart from wall-clock timing") {
  const SpmvOptions opt{.hpcg_dims = {6}, .check = true, .seed = 7};
  Report a = cmd_spmv(a64fx(), opt);
  Report b = cmd_spmv(a64fx(), opt);
  a.data.erase("timing");
  b.data.erase("timing");
  CHECK(a.data.dump() == b.data.dump());
}

TEST_CASE("cmd_spmv input validation") {
  CHECK_THROWS_AS(cmd_spmv(a64fx(), {}), std::invalid_argument);
  CHECK_THROWS_AS(cmd_spmv(a64fx(), {.hpcg_dims = {4, 4}}), std::invalid_argument);
  CHECK_THROWS_AS(cmd_spmv(a64fx(), {.hpcg_dims = {4}, .format = "ellpack"}),
                  std::invalid_argument);
}

TEST_CASE("cmd_validate passes on the builtin machine") {
  const Report r = cmd_validate(a64fx());
  CHECK(r.pass);
  CHECK(r.data["pass"].get<bool>());
  REQUIRE(r.data["kernel_table"].size() == 11);
  for (const auto& row : r.data["kernel_table"]) CHECK(row["pass"].get<bool>());
  for (const auto& c : r.data["constants"]) CHECK(c["pass"].get<bool>());
  CHECK(!render_text(r).empty());
}

TEST_CASE("cmd_validate fails on a detuned machine") {
  MachineModel m = a64fx();
  m.mem_bw_multistream = 90.0;  // slower memory shifts every MEM prediction
  const Report r = cmd_validate(m);
  CHECK(!r.pass);
  CHECK(!r.data["pass"].get<bool>());
}

TEST_CASE("cmd_machine dumps the description") {
  const Report r = cmd_machine(a64fx());
  CHECK(r.data["machine"]["name"] == "a64fx-fx700");
  CHECK(r.data["machine"]["instruction_table"].size() == 13);
}
