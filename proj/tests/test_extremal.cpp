#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "oracles.hpp"
#include "polarlab/channel.hpp"
#include "polarlab/extremal.hpp"
#include "polarlab/rng.hpp"

using namespace polarlab;

TEST_CASE("erasure channel matching a capacity is closed form") {
  CHECK(erasure_parameter(bec_with_capacity(1.0)) == 0.0);
  CHECK(erasure_parameter(bec_with_capacity(0.0)) == 1.0);
  CHECK(*erasure_parameter(bec_with_capacity(0.7)) ==
        doctest::Approx(0.3).epsilon(1e-15));
  CHECK_THROWS_AS(bec_with_capacity(1.2), std::invalid_argument);
  CHECK_THROWS_AS(bec_with_capacity(-0.1), std::invalid_argument);
}

TEST_CASE("crossover channel matching a capacity") {
  CHECK(bsc_with_capacity(1.0).w0()[1] == 0.0);
  CHECK(bsc_with_capacity(0.0).w0()[1] == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(bsc_with_capacity(0.5).w0()[1] ==
        doctest::Approx(0.11002786443835952).epsilon(1e-11));
  CHECK_THROWS_AS(bsc_with_capacity(2.0), std::invalid_argument);

  Rng rng(derive_seed(13, "cap-roundtrip", 0));
  for (int trial = 0; trial < 100; ++trial) {
    const double target = rng.uniform01();
    CHECK(symmetric_capacity(bsc_with_capacity(target)) ==
          doctest::Approx(target).epsilon(1e-12));
    CHECK(symmetric_capacity(bec_with_capacity(target)) ==
          doctest::Approx(target).epsilon(1e-12));
  }
}

TEST_CASE("gallager-value inverters round-trip") {
  Rng rng(derive_seed(13, "e0-roundtrip", 0));
  for (double rho : {0.5, 1.0, 2.0}) {
    const double top = gallager_e0(make_bsc(0.0), rho);  // rho, the sup
    for (int trial = 0; trial < 25; ++trial) {
      const double target = top * (0.02 + 0.96 * rng.uniform01());
      CHECK(gallager_e0(bec_with_e0(target, rho), rho) ==
            doctest::Approx(target).epsilon(1e-10));
      CHECK(gallager_e0(bsc_with_e0(target, rho), rho) ==
            doctest::Approx(target).epsilon(1e-10));
    }
  }

  // Endpoints and out-of-range targets.
  CHECK(*erasure_parameter(bec_with_e0(0.0, 1.0)) ==
        doctest::Approx(1.0).epsilon(1e-10));
  CHECK(bsc_with_e0(1.0, 1.0).w0()[1] == doctest::Approx(0.0).epsilon(1e-9));
  CHECK_THROWS_AS(bec_with_e0(1.5, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(bsc_with_e0(-0.2, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(bec_with_e0(0.3, 0.0), std::invalid_argument);

  // The value that inverts to roughly BSC(0.11) at rho=1.
  CHECK(bsc_with_e0(0.29886838575516983, 1.0).w0()[1] ==
        doctest::Approx(0.11).epsilon(1e-9));
}

TEST_CASE("fixed-rho matching scan stays inside the extremal interval") {
  Rng rng(derive_seed(13, "e0-scan", 0));
  const std::vector<double> grid{0.25, 0.5, 2.0, 4.0};
  for (int trial = 0; trial < 25; ++trial) {
    const auto w = oracle::random_channel(rng);
    for (double rho0 : {0.5, 1.0}) {
      const auto rows = e0_extremality_scan(w, rho0, grid);
      REQUIRE(rows.size() == grid.size());
      for (std::size_t g = 0; g < rows.size(); ++g) {
        CHECK(rows[g].rho0 == rho0);
        CHECK(rows[g].rho1 == grid[g]);
        CHECK(rows[g].in_interval);
        CHECK(rows[g].e0_w >=
              std::min(rows[g].e0_bec, rows[g].e0_bsc) - 1e-9);
        CHECK(rows[g].e0_w <=
              std::max(rows[g].e0_bec, rows[g].e0_bsc) + 1e-9);
      }
    }
  }
}

TEST_CASE("scan endpoints coincide when the input is itself extremal") {
  const auto rows = e0_extremality_scan(make_bsc(0.2), 1.0, {0.25, 2.0, 4.0});
  for (const auto& r : rows) {
    CHECK(r.e0_w == doctest::Approx(r.e0_bsc).epsilon(1e-9));
    CHECK(r.in_interval);
  }
  const auto rows2 = e0_extremality_scan(make_bec(0.4), 0.5, {0.25, 2.0});
  for (const auto& r : rows2)
    CHECK(r.e0_w == doctest::Approx(r.e0_bec).epsilon(1e-9));
}

TEST_CASE("quantized gaussian scan stays inside the interval") {
  const auto rows =
      e0_extremality_scan(make_quantized_bawgn(1.0, 32), 1.0, {0.25, 0.5, 2.0, 4.0});
  for (const auto& r : rows) CHECK(r.in_interval);
}

TEST_CASE("scan serialization is stable and parseable") {
  const auto rows = e0_extremality_scan(make_bsc(0.11), 1.0, {0.5, 2.0});
  const auto csv = e0_scan_csv(rows);
  CHECK(csv.rfind("rho0,rho1,e0_w,e0_bec,e0_bsc,in_interval\n", 0) == 0);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 3);
  CHECK(e0_scan_csv(rows) == csv);
}
