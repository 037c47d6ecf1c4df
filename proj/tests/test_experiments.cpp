#include "fpwm/experiments.hpp"

#include <doctest.h>

#include <sstream>

using fpwm::FpwmParams;

TEST_CASE("parse_range") {
  CHECK(fpwm::parse_range("1..8").lo == 1);
  CHECK(fpwm::parse_range("1..8").hi == 8);
  CHECK(fpwm::parse_range("5").lo == 5);
  CHECK(fpwm::parse_range("5").hi == 5);
  CHECK_THROWS_AS(fpwm::parse_range("8..1"), std::invalid_argument);
  CHECK_THROWS_AS(fpwm::parse_range("x..2"), std::invalid_argument);
}

TEST_CASE("tables sweep") {
  const auto rows = fpwm::sweep_tables({1, 4}, {6, 8});
  REQUIRE(rows.size() == 12);
  std::ostringstream os;
  fpwm::write_tables_csv(os, rows);
  const std::string csv = os.str();
  CHECK(csv.rfind("K,m,N,n,bitrate_bit_per_UI,lut_size_bits\n", 0) == 0);
  CHECK(csv.find("\n4,6,1252,10,1.666667,420\n") != std::string::npos);
  CHECK(csv.find("\n4,8,16493,14,1.750000,720\n") != std::string::npos);
  CHECK(csv.find("\n1,8,256,8,1.000000,") != std::string::npos);

  // Same values as a direct recomputation.
  for (const auto& r : rows) {
    const FpwmParams p(r.k, r.m);
    const auto n = fpwm::count_vector(p, r.m).total();
    CHECK(r.total_arrays == n);
    CHECK(r.bits_per_frame == static_cast<int>(boost::multiprecision::msb(n)));
    CHECK(r.lut_size_bits == (r.k + 1) * (r.bits_per_frame + r.k) * r.m);
  }

  try {
    fpwm::sweep_tables({1, 17}, {1, 4});
    FAIL("expected CapExceeded");
  } catch (const fpwm::CapExceeded& e) {
    CHECK(std::string(e.what()).find("16") != std::string::npos);
  }
  CHECK_THROWS_AS(fpwm::sweep_tables({1, 2}, {1, 65}), fpwm::CapExceeded);
}

TEST_CASE("stats report") {
  const struct {
    int k;
    const char* slots;
    const char* s0;
  } rows[] = {{4, "131944", "55296 (41.9%)"}, {2, "12776", "5911 (46.3%)"}, {1, "2048", "1024 (50.0%)"}};
  for (const auto& row : rows) {
    const auto r = fpwm::symbol_stats(FpwmParams(row.k, 8));
    CHECK(r.brute_force_matches());
    std::ostringstream os;
    fpwm::write_stats(os, r);
    CHECK(os.str().find(std::string("symbol_slots (m x N): ") + row.slots) != std::string::npos);
    CHECK(os.str().find(std::string("S_0: ") + row.s0) != std::string::npos);
    CHECK(os.str().find("brute_force_match: yes") != std::string::npos);
  }
  const auto r4 = fpwm::symbol_stats(FpwmParams(4, 8));
  CHECK(r4.edges() == 76648);
  const auto skipped = fpwm::symbol_stats(FpwmParams(4, 8), 100);
  CHECK_FALSE(skipped.brute_force.has_value());
}

TEST_CASE("simulation") {
  fpwm::SimConfig c;
  c.frames = 400;

  SUBCASE("noiseless run is error free and deterministic") {
    const auto a = fpwm::run_simulation(c);
    CHECK(a.report.bits_sent == 400 * 14);
    CHECK(a.report.bit_errors == 0);
    CHECK(a.report.nrz_bits_sent == 400 * 8);
    CHECK(a.report.nrz_bit_errors == 0);
    CHECK(a.report.bit_ratio == 1.75);
    std::ostringstream r1, r2;
    fpwm::write_report(r1, a.report);
    fpwm::write_report(r2, fpwm::run_simulation(c).report);
    CHECK(r1.str() == r2.str());
    CHECK(r1.str().find("\"bit_errors\": 0") != std::string::npos);
  }
  SUBCASE("all-zero payload has no edges") {
    c.frames = 1;
    c.zero_bits = true;
    c.psd_segment = 64;
    const auto run = fpwm::run_simulation(c);
    CHECK_FALSE(run.report.min_pulse_width_ui.has_value());
    std::ostringstream os;
    fpwm::write_report(os, run.report);
    CHECK(os.str().find("\"min_pulse_width_ui\": null") != std::string::npos);
  }
  SUBCASE("automatic oversampling follows K") {
    c.k = 3;
    c.wave.samples_per_ui = 0;
    const auto run = fpwm::run_simulation(c);
    CHECK(run.report.samples_per_ui == 18);
    CHECK(run.report.bit_errors == 0);
  }
  SUBCASE("stage errors carry the stage name") {
    c.k = 3;
    c.wave.samples_per_ui = 16;
    try {
      fpwm::run_simulation(c);
      FAIL("expected SimulationError");
    } catch (const fpwm::SimulationError& e) {
      CHECK(std::string(e.what()).rfind("configure:", 0) == 0);
    }
  }
  SUBCASE("heavy noise surfaces a receiver-stage error or bit errors") {
    c.sigma = 0.8;
    try {
      const auto run = fpwm::run_simulation(c);
      CHECK(run.report.bit_errors > 0);
    } catch (const fpwm::SimulationError& e) {
      const std::string msg = e.what();
      CHECK((msg.rfind("edges_to_symbols:", 0) == 0 || msg.rfind("decode:", 0) == 0 ||
             msg.rfind("detect_edges:", 0) == 0));
    }
  }
}

TEST_CASE("BER is zero for every K <= 4, m <= 8") {
  for (int k = 1; k <= 4; ++k) {
    for (int m = 1; m <= 8; ++m) {
      fpwm::SimConfig c;
      c.k = k;
      c.m = m;
      c.frames = 1000;
      c.wave.samples_per_ui = 0;
      const auto run = fpwm::run_simulation(c);
      CHECK_MESSAGE(run.report.bit_errors == 0, "K=" << k << " m=" << m);
    }
  }
}
