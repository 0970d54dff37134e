#include <doctest.h>

#include <stdexcept>

#include <cmath>
#include <random>

#include "ecm/ecm_engine.hpp"

using namespace ecm;

namespace {

const MachineModel& a64fx() { return builtin_machine("a64fx-fx700"); }

TrafficProfile triad_profile() {
  TrafficProfile t;
  t.core_load_cycles = 1.0;
  t.core_store_cycles = 1.0;
  t.l1l2_read_bytes = 192.0;
  t.l1l2_write_bytes = 64.0;
  t.mem_read_bytes = 192.0;
  t.mem_write_bytes = 64.0;
  return t;
}

// Valid random profile: outer-level traffic never exceeds inner-level.
TrafficProfile random_profile(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> cycles(0.0, 4.0);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  TrafficProfile t;
  t.readonly = unit(rng) < 0.3;
  t.core_load_cycles = cycles(rng);
  t.core_store_cycles = t.readonly ? 0.0 : cycles(rng);
  t.dependency_chain_cycles = unit(rng) < 0.5 ? 0.0 : 12.0 * unit(rng);
  t.l1l2_read_bytes = 512.0 * unit(rng);
  t.mem_read_bytes = t.l1l2_read_bytes * unit(rng);
  if (!t.readonly) {
    t.l1l2_write_bytes = 256.0 * unit(rng);
    t.mem_write_bytes = t.l1l2_write_bytes * unit(rng);
  }
  return t;
}

}  // namespace

TEST_CASE("compose reproduces the triad per-VL triple") {
  const EcmPrediction p = compose(a64fx(), triad_profile());
  CHECK(p.t_l1 == doctest::Approx(2.0));
  CHECK(p.t_l2 == doctest::Approx(6.0));
  CHECK(p.t_mem == doctest::Approx(7.6410256410256412));
}

TEST_CASE("compose reproduces the copy per-VL triple") {
  TrafficProfile t;
  t.core_load_cycles = 0.5;
  t.core_store_cycles = 1.0;
  t.l1l2_read_bytes = 128.0;
  t.l1l2_write_bytes = 64.0;
  t.mem_read_bytes = 128.0;
  t.mem_write_bytes = 64.0;
  const EcmPrediction p = compose(a64fx(), t);
  CHECK(p.t_l1 == doctest::Approx(1.5));
  CHECK(p.t_l2 == doctest::Approx(4.5));
  CHECK(p.t_mem == doctest::Approx(5.5940170940170938));
}

TEST_CASE("compose uses the read-only bandwidth for read-only profiles") {
  TrafficProfile t;
  t.core_load_cycles = 0.5;
  t.l1l2_read_bytes = 64.0;
  t.mem_read_bytes = 64.0;
  t.readonly = true;
  const EcmPrediction p = compose(a64fx(), t);
  CHECK(p.t_l1 == doctest::Approx(0.5));
  CHECK(p.t_l2 == doctest::Approx(1.5));
  CHECK(p.t_mem == doctest::Approx(2.012));  // 1.5 + 64/125
}

TEST_CASE("all-zero traffic predicts zero everywhere") {
  const TrafficProfile t;
  for (auto* fn : {compose, compose_no_overlap, compose_full_overlap}) {
    const EcmPrediction p = fn(a64fx(), t);
    CHECK(p.t_l1 == 0.0);
    CHECK(p.t_l2 == 0.0);
    CHECK(p.t_mem == 0.0);
  }
}

TEST_CASE("scenario compositions for triad") {
  // Serial: core + L1<->L2 transfers + memory read and write terms.
  const EcmPrediction none = compose_no_overlap(a64fx(), triad_profile());
  CHECK(none.t_l1 == doctest::Approx(2.0));
  CHECK(none.t_l2 == doctest::Approx(7.0));
  CHECK(none.t_mem == doctest::Approx(2.0 + 5.0 + 192.0 / 117.0 + 64.0 / 64.0));

  // Fully overlapping: the largest contribution wins.
  const EcmPrediction full = compose_full_overlap(a64fx(), triad_profile());
  CHECK(full.t_l1 == doctest::Approx(2.0));
  CHECK(full.t_l2 == doctest::Approx(5.0));
  CHECK(full.t_mem == doctest::Approx(5.0));
}

TEST_CASE("dependency_bound") {
  CHECK(dependency_bound(9.0, 1) == doctest::Approx(9.0));
  CHECK(dependency_bound(9.0, 8) == doctest::Approx(1.125));
  CHECK(dependency_bound(9.0, 4) == doctest::Approx(2.25));
  CHECK_THROWS_AS(dependency_bound(0.0, 1), std::invalid_argument);
  CHECK_THROWS_AS(dependency_bound(9.0, 0), std::invalid_argument);
}

TEST_CASE("dependency chain floors every level") {
  TrafficProfile t;
  t.core_load_cycles = 0.5;
  t.l1l2_read_bytes = 64.0;
  t.mem_read_bytes = 64.0;
  t.readonly = true;
  t.dependency_chain_cycles = 9.0;
  const EcmPrediction p = compose(a64fx(), t);
  CHECK(p.t_l1 == doctest::Approx(9.0));
  CHECK(p.t_l2 == doctest::Approx(9.0));
  CHECK(p.t_mem == doctest::Approx(9.0));  // transfers hide under the chain
}

TEST_CASE("traffic profile validation") {
  TrafficProfile t;
  t.l1l2_read_bytes = -1.0;
  CHECK_THROWS_WITH_AS(validate(t), doctest::Contains("l1l2_read_bytes"), std::invalid_argument);

  t = TrafficProfile{};
  t.mem_read_bytes = 64.0;  // exceeds the zero L1<->L2 read volume
  CHECK_THROWS_AS(validate(t), std::invalid_argument);

  t = TrafficProfile{};
  t.readonly = true;
  t.core_store_cycles = 1.0;
  CHECK_THROWS_AS(validate(t), std::invalid_argument);
}

TEST_CASE("scale: triad saturates at 4 cores") {
  const TrafficProfile t = triad_profile();
  const ScalingCurve c = scale(a64fx(), compose(a64fx(), t), t);
  REQUIRE(c.points.size() == 12);
  REQUIRE(c.saturation_cores);
  CHECK(*c.saturation_cores == 4);
  CHECK(c.roof_work_units_per_cycle == doctest::Approx(117.0 / 256.0));
  // One core always runs at the single-core prediction.
  CHECK(c.points[0].work_units_per_cycle == doctest::Approx(1.0 / 7.6410256410256412));
  // At the roof the bandwidth equals the domain triad figure.
  CHECK(c.points[11].bandwidth_bytes_per_second == doctest::Approx(117.0 * 1.8e9));
}

TEST_CASE("scale: read-only roof") {
  TrafficProfile t;
  t.core_load_cycles = 0.5;
  t.l1l2_read_bytes = 64.0;
  t.mem_read_bytes = 64.0;
  t.readonly = true;
  const ScalingCurve c = scale(a64fx(), compose(a64fx(), t), t);
  REQUIRE(c.saturation_cores);
  CHECK(*c.saturation_cores == 4);  // ceil(2.012 * 125/64)
}

TEST_CASE("scale: latency-bound profile saturates beyond the domain") {
  TrafficProfile t;
  t.core_load_cycles = 0.5;
  t.l1l2_read_bytes = 64.0;
  t.mem_read_bytes = 64.0;
  t.readonly = true;
  t.dependency_chain_cycles = 9.0;
  const ScalingCurve c = scale(a64fx(), compose(a64fx(), t), t);
  REQUIRE(c.saturation_cores);
  CHECK(*c.saturation_cores == 18);  // never within the 12-core domain
  for (const auto& pt : c.points) {
    CHECK(pt.work_units_per_cycle < c.roof_work_units_per_cycle);
  }
}

TEST_CASE("scale: no memory traffic means no roof") {
  TrafficProfile t;
  t.core_load_cycles = 1.0;
  const ScalingCurve c = scale(a64fx(), compose(a64fx(), t), t, 4);
  CHECK(!c.saturation_cores);
  CHECK(c.points.size() == 4);
  CHECK(c.points[3].work_units_per_cycle == doctest::Approx(4.0));
}

TEST_CASE("scale rejects a zero-time prediction") {
  const TrafficProfile t;
  CHECK_THROWS_AS(scale(a64fx(), compose(a64fx(), t), t), std::invalid_argument);
}

TEST_CASE("scenario ordering and level monotonicity on random profiles") {
  std::mt19937_64 rng(20260810);
  for (int i = 0; i < 300; ++i) {
    const TrafficProfile t = random_profile(rng);
    const EcmPrediction partial = compose(a64fx(), t);
    const EcmPrediction none = compose_no_overlap(a64fx(), t);
    const EcmPrediction full = compose_full_overlap(a64fx(), t);
    CHECK(partial.t_l1 <= partial.t_l2);
    CHECK(partial.t_l2 <= partial.t_mem);
    CHECK(full.t_l1 <= partial.t_l1 + 1e-12);
    CHECK(full.t_l2 <= partial.t_l2 + 1e-12);
    CHECK(full.t_mem <= partial.t_mem + 1e-12);
    CHECK(partial.t_l1 <= none.t_l1 + 1e-12);
    CHECK(partial.t_l2 <= none.t_l2 + 1e-12);
    CHECK(partial.t_mem <= none.t_mem + 1e-12);
  }
}

TEST_CASE("scale output is non-decreasing and constant beyond saturation") {
  std::mt19937_64 rng(7);
  for (int i = 0; i < 100; ++i) {
    TrafficProfile t = random_profile(rng);
    t.core_load_cycles += 0.1;  // keep t_mem positive
    t.l1l2_read_bytes += 1.0;
    t.mem_read_bytes += 1.0;
    const ScalingCurve c = scale(a64fx(), compose(a64fx(), t), t);
    for (std::size_t n = 1; n < c.points.size(); ++n) {
      CHECK(c.points[n].work_units_per_cycle >= c.points[n - 1].work_units_per_cycle);
      if (c.saturation_cores && c.points[n].cores >= *c.saturation_cores &&
          c.points[n - 1].cores >= *c.saturation_cores) {
        CHECK(c.points[n].work_units_per_cycle == c.points[n - 1].work_units_per_cycle);
      }
    }
  }
}
